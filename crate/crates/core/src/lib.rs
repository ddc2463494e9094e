//! Signed random-walk dynamics on undirected signed graphs, the
//! correlation-based polarization measure built on them, polarized
//! embedding through signed autocovariance, and a signed link prediction
//! harness.
//!
//! The crate is `no_std` and only needs `alloc`. Enable the `parallel`
//! feature (which implies `std`) to spread per-column work over a rayon
//! pool; results are identical with and without it.
//!
//! # Features
//! - `std`: marks the build as hosted; required by `parallel`.
//! - `parallel`: column-parallel transition and autocovariance kernels.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod dense;
pub mod dynamics;
pub mod eigen;
pub mod embedding;
mod error;
pub mod evaluation;
pub mod graph;
pub mod measures;
pub mod rng;
pub mod synthesis;

pub use crate::dense::DenseMatrix;
pub use crate::dynamics::{
    continuous_column, continuous_transitions, discrete_transitions, enumerate_walks,
    TransitionField, Walk,
};
pub use crate::embedding::{autocovariance, embed, factorize, AutocovarianceMatrix, Embedding};
pub use crate::error::{Error, ErrorKind};
pub use crate::graph::{ingest_edge_list, EdgeRecord, IngestOptions, IngestReport, SignedGraph};
pub use crate::measures::{
    graph_polarization_profile, node_polarization, social_balance, BalanceReport,
    PolarizationReport,
};

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Default truncation tolerance of the matrix exponential.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Largest node count for which dense n x n results are materialized.
pub const DEFAULT_NODE_CAP: usize = 20_000;
