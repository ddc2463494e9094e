use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use rand::seq::index;
use rand::Rng;

use super::logistic::{fit_logistic, LogisticConfig, LogisticModel};
use super::precision::{mean_precision, precision_curve_top, precision_from_extremes, EvaluationReport};
use super::ranking::{candidate_count, candidate_pairs, rank_extremes};
use super::split::{split_edges_stream, SplitManifest};
use crate::embedding::{embed, Embedding};
use crate::graph::SignedGraph;
use crate::rng;
use crate::{Error, Result};

/// Embedding dimension used by the benchmark.
pub const DEFAULT_DIMENSION: usize = 40;
/// Share of links held out for testing.
pub const DEFAULT_FRACTION: f64 = 0.2;
/// Share of residual links held out for Markov-time selection.
pub const INNER_FRACTION: f64 = 0.1;

/// `10^0.0, 10^0.1, …, 10^1.0`.
pub fn default_markov_grid() -> Vec<f64> {
    (0..=10).map(|i| libm::pow(10.0, i as f64 / 10.0)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PairClass {
    Positive,
    Negative,
    Disconnected,
}

impl PairClass {
    pub fn as_str(self) -> &'static str {
        match self {
            PairClass::Positive => "positive",
            PairClass::Negative => "negative",
            PairClass::Disconnected => "disconnected",
        }
    }
}

/// One row of the scatter table: a pair, both similarities, its truth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairFeature {
    pub u: usize,
    pub v: usize,
    pub signed_similarity: f64,
    pub unsigned_similarity: f64,
    pub class: PairClass,
}

/// A trained combiner, in raw feature units `(signed_sim, unsigned_sim)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassifierSummary {
    /// Class the model separates from disconnected pairs.
    pub target: PairClass,
    pub weights: Vec<f64>,
    pub bias: f64,
    pub training_size: usize,
    pub iterations: usize,
    pub final_loss: f64,
}

impl ClassifierSummary {
    fn new(target: PairClass, model: &LogisticModel, training_size: usize) -> Self {
        let (weights, bias) = model.raw_parameters();
        ClassifierSummary {
            target,
            weights,
            bias,
            training_size,
            iterations: model.iterations,
            final_loss: model.final_loss,
        }
    }
}

/// Ranks every unlinked residual pair by signed reconstructed similarity.
pub fn signed_link_prediction(manifest: &SplitManifest, t: f64, k: usize, tol: f64) -> Result<EvaluationReport> {
    let residual = &manifest.residual;
    let emb = embed(residual, t, true, k, tol)?;
    let ext = rank_extremes(&emb, residual, manifest.removed_positive.len(), manifest.removed_negative.len());
    let mut report = precision_from_extremes(&ext, manifest);
    report.method_tag = "signed".into();
    report.markov_time = t;
    report.dimension = k;
    Ok(report)
}

/// Up to `count` distinct unlinked pairs, uniformly, in draw order.
fn sample_disconnected<R: Rng + ?Sized>(g: &SignedGraph, count: usize, rng: &mut R) -> Vec<(usize, usize)> {
    let total = candidate_count(g);
    let count = count.min(total);
    if count == 0 {
        return Vec::new();
    }
    if 2 * count >= total {
        let all: Vec<(usize, usize)> = candidate_pairs(g).collect();
        return index::sample(rng, total, count).into_iter().map(|i| all[i]).collect();
    }
    let n = g.node_count();
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let a = rng.random_range(0..n);
        let b = rng.random_range(0..n);
        if a == b {
            continue;
        }
        let p = (a.min(b), a.max(b));
        if g.has_edge(p.0, p.1) || !seen.insert(p) {
            continue;
        }
        out.push(p);
    }
    out
}

fn features(signed: &Embedding, unsigned: &Embedding, u: usize, v: usize) -> [f64; 2] {
    let (a, b) = (u.min(v), u.max(v));
    [signed.similarity_unchecked(a, b), unsigned.similarity_unchecked(a, b)]
}

fn train(
    signed: &Embedding,
    unsigned: &Embedding,
    targets: &[(usize, usize)],
    background: &[(usize, usize)],
) -> Result<LogisticModel> {
    let mut x = Vec::with_capacity(targets.len() + background.len());
    let mut y = Vec::with_capacity(x.capacity());
    for &(u, v) in targets {
        x.push(features(signed, unsigned, u, v).to_vec());
        y.push(true);
    }
    for &(u, v) in background {
        x.push(features(signed, unsigned, u, v).to_vec());
        y.push(false);
    }
    fit_logistic(&x, &y, &LogisticConfig::default())
}

/// Logistic combination of signed and unsigned similarity. Positive links
/// are ranked by a positive-vs-disconnected classifier, negative links by
/// a negative-vs-disconnected one, each trained on the residual's own
/// links against an equally sized sample of unlinked pairs.
pub fn combined_signed_link_prediction(
    manifest: &SplitManifest,
    t_signed: f64,
    t_unsigned: f64,
    k: usize,
    seed: u64,
    tol: f64,
) -> Result<EvaluationReport> {
    let residual = &manifest.residual;
    let signed = embed(residual, t_signed, true, k, tol)?;
    let unsigned = embed(residual, t_unsigned, false, k, tol)?;

    let mut pos_train = Vec::new();
    let mut neg_train = Vec::new();
    for (u, v, w) in residual.edges() {
        if w > 0.0 { pos_train.push((u, v)) } else { neg_train.push((u, v)) }
    }
    let mut rng = rng::stream(seed, rng::NEG_SAMPLE);
    let background = sample_disconnected(residual, pos_train.len().max(neg_train.len()), &mut rng);
    if background.is_empty() {
        return Err(Error::Infeasible("residual graph has no unlinked pairs".into()));
    }

    let mut report = EvaluationReport::bare("combined", manifest, candidate_count(residual));
    report.markov_time = t_signed;
    report.unsigned_markov_time = Some(t_unsigned);
    report.dimension = k;

    if !pos_train.is_empty() {
        let bg = &background[..pos_train.len().min(background.len())];
        let model = train(&signed, &unsigned, &pos_train, bg)?;
        let scorer = |u: usize, v: usize| model.predict_logit(&features(&signed, &unsigned, u, v));
        let ext = rank_extremes(&scorer, residual, manifest.removed_positive.len(), 0);
        report.precision_positive = precision_from_extremes(&ext, manifest).precision_positive;
        report.classifiers.push(ClassifierSummary::new(PairClass::Positive, &model, pos_train.len() + bg.len()));
    }
    if !neg_train.is_empty() {
        let bg = &background[..neg_train.len().min(background.len())];
        let model = train(&signed, &unsigned, &neg_train, bg)?;
        // Most likely negative goes to the bottom of the ranking.
        let scorer = |u: usize, v: usize| -model.predict_logit(&features(&signed, &unsigned, u, v));
        let ext = rank_extremes(&scorer, residual, 0, manifest.removed_negative.len());
        report.precision_negative = precision_from_extremes(&ext, manifest).precision_negative;
        report.classifiers.push(ClassifierSummary::new(PairClass::Negative, &model, neg_train.len() + bg.len()));
    }

    let mut table = Vec::with_capacity(manifest.removed_count() + background.len());
    let classes = [(&manifest.removed_positive, PairClass::Positive), (&manifest.removed_negative, PairClass::Negative)];
    for (list, class) in classes {
        for e in list.iter() {
            let [s, us] = features(&signed, &unsigned, e.u, e.v);
            table.push(PairFeature { u: e.u, v: e.v, signed_similarity: s, unsigned_similarity: us, class });
        }
    }
    for &(u, v) in &background {
        let [s, us] = features(&signed, &unsigned, u, v);
        table.push(PairFeature { u, v, signed_similarity: s, unsigned_similarity: us, class: PairClass::Disconnected });
    }
    report.pair_features = Some(table);
    Ok(report)
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::param("t-grid", "at least one Markov time is required"));
    }
    if let Some(&bad) = grid.iter().find(|&&t| !(t > 0.0) || !t.is_finite()) {
        return Err(Error::param("t-grid", alloc::format!("Markov time {bad} must be positive")));
    }
    Ok(())
}

/// Picks the grid time maximizing `score` on an inner split of the
/// residual; ties go to the smaller time.
pub fn select_markov_time_with<F>(manifest: &SplitManifest, grid: &[f64], seed: u64, mut score: F) -> Result<f64>
where
    F: FnMut(&SplitManifest, f64) -> Result<f64>,
{
    check_grid(grid)?;
    if grid.len() == 1 {
        return Ok(grid[0]);
    }
    let inner = split_edges_stream(&manifest.residual, INNER_FRACTION, seed, rng::INNER_SPLIT)?;
    let mut best: Option<(f64, f64)> = None;
    for &t in grid {
        let s = score(&inner, t)?;
        best = match best {
            Some((bt, bs)) if bs > s || (bs == s && bt <= t) => Some((bt, bs)),
            _ => Some((t, s)),
        };
    }
    Ok(best.expect("non-empty grid").0)
}

/// Mean-of-deciles precision of signed similarity, averaged over the
/// positive and negative curves that are defined.
pub fn select_markov_time(manifest: &SplitManifest, grid: &[f64], k: usize, seed: u64, tol: f64) -> Result<f64> {
    select_markov_time_with(manifest, grid, seed, |inner, t| {
        let r = signed_link_prediction(inner, t, k, tol)?;
        let curves: Vec<f64> =
            [r.precision_positive, r.precision_negative].iter().flatten().map(mean_precision).collect();
        Ok(if curves.is_empty() { 0.0 } else { curves.iter().sum::<f64>() / curves.len() as f64 })
    })
}

/// Selection for the unsigned similarity: held-out links of either sign
/// should rank at the top.
pub fn select_unsigned_markov_time(manifest: &SplitManifest, grid: &[f64], k: usize, seed: u64, tol: f64) -> Result<f64> {
    select_markov_time_with(manifest, grid, seed, |inner, t| {
        let residual = &inner.residual;
        let emb = embed(residual, t, false, k, tol)?;
        let total = inner.removed_count();
        let ext = rank_extremes(&emb, residual, total, 0);
        let curve = precision_curve_top(&ext.top, total, |u, v| {
            inner.is_removed_positive(u, v) || inner.is_removed_negative(u, v)
        });
        Ok(curve.as_ref().map(mean_precision).unwrap_or(0.0))
    })
}
