use alloc::string::String;
use alloc::vec::Vec;

use super::linkpred::{ClassifierSummary, PairFeature};
use super::ranking::{Extremes, ScoredPair};
use super::split::SplitManifest;

/// k-ratios at which precision is reported.
pub const DECILES: [f64; 10] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0];

/// `⌈(i / 10) · total⌉` in exact integer arithmetic.
#[inline]
pub(crate) fn decile_count(i: usize, total: usize) -> usize {
    (i * total).div_ceil(10)
}

/// Precision curves for one link-prediction run.
#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationReport {
    pub method_tag: String,
    /// Indexed like [`DECILES`]; `None` when no positive link was held out.
    pub precision_positive: Option<[f64; 10]>,
    pub precision_negative: Option<[f64; 10]>,
    pub removed_positive: usize,
    pub removed_negative: usize,
    pub candidate_count: usize,
    pub markov_time: f64,
    pub unsigned_markov_time: Option<f64>,
    pub dimension: usize,
    pub seed: u64,
    pub removal_fraction: f64,
    pub pair_features: Option<Vec<PairFeature>>,
    pub classifiers: Vec<ClassifierSummary>,
}

impl EvaluationReport {
    pub(crate) fn bare(method_tag: &str, manifest: &SplitManifest, candidate_count: usize) -> Self {
        EvaluationReport {
            method_tag: method_tag.into(),
            precision_positive: None,
            precision_negative: None,
            removed_positive: manifest.removed_positive.len(),
            removed_negative: manifest.removed_negative.len(),
            candidate_count,
            markov_time: f64::NAN,
            unsigned_markov_time: None,
            dimension: 0,
            seed: manifest.seed,
            removal_fraction: manifest.removal_fraction,
            pair_features: None,
            classifiers: Vec::new(),
        }
    }
}

/// Precision at each decile of `total` over `pairs`, read from the
/// front. `None` when `total` is zero.
pub fn precision_curve_top<'a, I, F>(pairs: I, total: usize, mut is_target: F) -> Option<[f64; 10]>
where
    I: IntoIterator<Item = &'a ScoredPair>,
    F: FnMut(usize, usize) -> bool,
{
    if total == 0 {
        return None;
    }
    let mut curve = [0.0; 10];
    let mut hits = 0usize;
    let mut seen = 0usize;
    let mut next = 1;
    for p in pairs {
        if next > 10 {
            break;
        }
        seen += 1;
        if is_target(p.u, p.v) {
            hits += 1;
        }
        while next <= 10 && decile_count(next, total) == seen {
            curve[next - 1] = hits as f64 / seen as f64;
            next += 1;
        }
    }
    // Fewer candidates than needed: the missing slots count as misses.
    while next <= 10 {
        curve[next - 1] = hits as f64 / decile_count(next, total) as f64;
        next += 1;
    }
    Some(curve)
}

/// Positive curve from the top of `ranking`, negative curve from its
/// bottom.
pub fn precision_at_k(ranking: &[ScoredPair], manifest: &SplitManifest) -> EvaluationReport {
    let mut report = EvaluationReport::bare("ranking", manifest, ranking.len());
    report.precision_positive =
        precision_curve_top(ranking, manifest.removed_positive.len(), |u, v| manifest.is_removed_positive(u, v));
    report.precision_negative = precision_curve_top(ranking.iter().rev(), manifest.removed_negative.len(), |u, v| {
        manifest.is_removed_negative(u, v)
    });
    report
}

/// Same as [`precision_at_k`] from the head and tail only; they must hold
/// at least `P` and `N` pairs respectively.
pub fn precision_from_extremes(extremes: &Extremes, manifest: &SplitManifest) -> EvaluationReport {
    let mut report = EvaluationReport::bare("ranking", manifest, extremes.candidate_count);
    report.precision_positive = precision_curve_top(&extremes.top, manifest.removed_positive.len(), |u, v| {
        manifest.is_removed_positive(u, v)
    });
    report.precision_negative = precision_curve_top(extremes.bottom.iter().rev(), manifest.removed_negative.len(), |u, v| {
        manifest.is_removed_negative(u, v)
    });
    report
}

/// Mean over the ten deciles.
pub fn mean_precision(curve: &[f64; 10]) -> f64 {
    curve.iter().sum::<f64>() / 10.0
}
