use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Parameters of one command invocation. Every field is optional so a
/// JSON file and command-line flags can each supply part of it.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "snake_case")]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub graph: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_grid: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fraction: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unsigned: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub largest_component: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nodes_per_community: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_degree: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inter_community_ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scheme: Option<String>,
}

macro_rules! overlay {
    ($base:expr, $top:expr, $($f:ident),*) => {
        RunConfig { $($f: $top.$f.or($base.$f)),* }
    };
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    /// Fields set in `top` win over `self`.
    pub fn overlay(self, top: RunConfig) -> RunConfig {
        overlay!(
            self, top, graph, t, t_grid, k, fraction, seed, mode, out, tol, unsigned, largest_component,
            nodes_per_community, mean_degree, inter_community_ratio, scheme
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let file: RunConfig = serde_json::from_str(r#"{"t": 2.0, "k": 8, "seed": 3}"#).unwrap();
        let flags = RunConfig { k: Some(4), ..Default::default() };
        let c = file.overlay(flags);
        assert_eq!((c.t, c.k, c.seed), (Some(2.0), Some(4), Some(3)));
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(serde_json::from_str::<RunConfig>(r#"{"tee": 2.0}"#).is_err());
    }
}
