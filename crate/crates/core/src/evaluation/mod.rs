//! Signed link prediction benchmark.
//!
//! A run splits off a fraction of links while keeping the residual graph
//! connected, embeds the residual, ranks every pair the residual leaves
//! unlinked, and reports precision@k for the held-out positive links at
//! the top of the ranking and held-out negative links at the bottom.

mod linkpred;
mod logistic;
mod precision;
mod ranking;
mod spanning;
mod split;

pub use linkpred::{
    combined_signed_link_prediction, default_markov_grid, select_markov_time,
    select_markov_time_with, select_unsigned_markov_time, signed_link_prediction, ClassifierSummary,
    PairClass, PairFeature, DEFAULT_DIMENSION, DEFAULT_FRACTION, INNER_FRACTION,
};
pub use logistic::{fit_logistic, LogisticConfig, LogisticModel};
pub use precision::{
    mean_precision, precision_at_k, precision_curve_top, precision_from_extremes, EvaluationReport,
    DECILES,
};
pub use ranking::{candidate_count, candidate_pairs, rank_extremes, rank_pairs, Extremes, PairScorer, ScoredPair};
pub use spanning::uniform_spanning_tree;
pub use split::{split_edges, split_edges_stream, RemovedEdge, SplitManifest};
