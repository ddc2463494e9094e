//! File formats and the command-line front end for `pole-core`.

pub mod cli;
pub mod config;
pub mod edgelist;
mod error;
pub mod formats;

pub use error::{Error, Result};

/// Version tag written into every JSON artifact.
pub const FORMAT_VERSION: &str = "1";

/// 17 significant digits, enough to read back the same `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}
