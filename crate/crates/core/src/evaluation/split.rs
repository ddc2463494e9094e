use alloc::vec::Vec;

use rand::seq::index;

use super::spanning::uniform_spanning_tree;
use crate::graph::SignedGraph;
use crate::rng;
use crate::{Error, Result};

/// A held-out link with its original signed weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RemovedEdge {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
}

/// Residual graph plus the links held out of it. Node indices and labels
/// are those of the graph the split was drawn from.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitManifest {
    pub residual: SignedGraph,
    pub removed_positive: Vec<RemovedEdge>,
    pub removed_negative: Vec<RemovedEdge>,
    pub seed: u64,
    pub removal_fraction: f64,
    pub original_edge_count: usize,
}

impl SplitManifest {
    pub fn removed_count(&self) -> usize {
        self.removed_positive.len() + self.removed_negative.len()
    }

    fn contains(list: &[RemovedEdge], u: usize, v: usize) -> bool {
        let key = (u.min(v), u.max(v));
        list.binary_search_by(|e| (e.u, e.v).cmp(&key)).is_ok()
    }

    pub fn is_removed_positive(&self, u: usize, v: usize) -> bool {
        Self::contains(&self.removed_positive, u, v)
    }

    pub fn is_removed_negative(&self, u: usize, v: usize) -> bool {
        Self::contains(&self.removed_negative, u, v)
    }

    /// Builds a manifest from an explicit set of held-out pairs.
    pub fn from_removed(g: &SignedGraph, removed: &[(usize, usize)], seed: u64) -> Result<Self> {
        let residual = g.without_edges(removed)?;
        if !residual.is_connected() {
            return Err(Error::Disconnected);
        }
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for &(a, b) in removed {
            let (u, v) = (a.min(b), a.max(b));
            let weight = g.weight(u, v);
            if weight == 0.0 {
                return Err(Error::param("removed", alloc::format!("({u}, {v}) is not an edge")));
            }
            let e = RemovedEdge { u, v, weight };
            if weight > 0.0 { pos.push(e) } else { neg.push(e) }
        }
        pos.sort_by_key(|e| (e.u, e.v));
        neg.sort_by_key(|e| (e.u, e.v));
        let m = g.edge_count();
        Ok(SplitManifest {
            residual,
            removed_positive: pos,
            removed_negative: neg,
            seed,
            removal_fraction: removed.len() as f64 / m as f64,
            original_edge_count: m,
        })
    }
}

/// Removes `⌊fraction · m⌋` uniformly chosen links outside a uniform
/// spanning tree, so the residual stays connected.
pub fn split_edges(g: &SignedGraph, fraction: f64, seed: u64) -> Result<SplitManifest> {
    split_edges_stream(g, fraction, seed, rng::SPLIT)
}

/// [`split_edges`] drawing from the named random stream `stream`.
pub fn split_edges_stream(g: &SignedGraph, fraction: f64, seed: u64, stream: &str) -> Result<SplitManifest> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::param("fraction", "must lie strictly between 0 and 1"));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let mut rng = rng::stream(seed, stream);
    let tree = uniform_spanning_tree(g, &mut rng);
    let candidates: Vec<(usize, usize)> = g
        .edges()
        .map(|(u, v, _)| (u, v))
        .filter(|e| tree.binary_search(e).is_err())
        .collect();
    let m = g.edge_count();
    let required = libm::floor(fraction * m as f64) as usize;
    if candidates.is_empty() || required > candidates.len() {
        return Err(Error::SplitInfeasible { required, available: candidates.len() });
    }
    if required == 0 {
        return Err(Error::param("fraction", alloc::format!("removes no link out of {m}")));
    }
    let mut picked: Vec<usize> = index::sample(&mut rng, candidates.len(), required).into_vec();
    picked.sort_unstable();
    let removed: Vec<(usize, usize)> = picked.iter().map(|&i| candidates[i]).collect();
    let mut manifest = SplitManifest::from_removed(g, &removed, seed)?;
    manifest.removal_fraction = fraction;
    Ok(manifest)
}
