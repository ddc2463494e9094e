use alloc::string::String;

/// Coarse classification used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    InvalidInput,
    Infeasible,
    Numerical,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("edge list is empty")]
    EmptyInput,
    #[error("graph has no edges after merging and dropping self-loops")]
    NoEdges,
    #[error("record {line}: {reason}")]
    BadRecord { line: usize, reason: String },
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("node index {index} out of range for {len} nodes")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("node {0} has zero degree")]
    IsolatedNode(usize),
    #[error("graph is not connected")]
    Disconnected,
    #[error("walk length {t} exceeds enumeration cap {cap}")]
    WalkTooLong { t: usize, cap: usize },
    #[error("{n} nodes exceeds the dense memory gate of {cap}")]
    MemoryGate { n: usize, cap: usize },
    #[error("cannot remove {required} edges: only {available} non-tree edges exist; use a smaller fraction")]
    SplitInfeasible { required: usize, available: usize },
    #[error("training data contains a single class")]
    SingleClass,
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("eigensolver did not converge after {0} iterations")]
    NoConvergence(usize),
    #[error("{0}")]
    Infeasible(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::SplitInfeasible { .. } | Error::Infeasible(_) | Error::Disconnected => {
                ErrorKind::Infeasible
            }
            Error::NoConvergence(_) | Error::NonFinite(_) => ErrorKind::Numerical,
            _ => ErrorKind::InvalidInput,
        }
    }

    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name, reason: reason.into() }
    }
}
