use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::dense::DenseMatrix;
use crate::embedding::Embedding;
use crate::graph::SignedGraph;

/// Anything that can score an unordered node pair; higher means more
/// likely positively linked.
pub trait PairScorer {
    fn score(&self, u: usize, v: usize) -> f64;
}

impl PairScorer for Embedding {
    fn score(&self, u: usize, v: usize) -> f64 {
        self.similarity_unchecked(u.min(v), u.max(v))
    }
}

impl PairScorer for DenseMatrix {
    fn score(&self, u: usize, v: usize) -> f64 {
        self.get(u.min(v), u.max(v))
    }
}

impl<F: Fn(usize, usize) -> f64> PairScorer for F {
    fn score(&self, u: usize, v: usize) -> f64 {
        self(u, v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoredPair {
    pub u: usize,
    pub v: usize,
    pub score: f64,
}

/// Ranking order: score descending, then `(u, v)` ascending.
#[inline]
fn rank_cmp(a: &ScoredPair, b: &ScoredPair) -> Ordering {
    b.score.total_cmp(&a.score).then((a.u, a.v).cmp(&(b.u, b.v)))
}

/// Pairs ordered so that `max` is the worst-ranked one.
#[derive(PartialEq)]
struct ByRank(ScoredPair);

impl Eq for ByRank {}

impl PartialOrd for ByRank {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ByRank {
    fn cmp(&self, other: &Self) -> Ordering {
        rank_cmp(&self.0, &other.0)
    }
}

/// Pairs ordered so that `max` is the best-ranked one.
#[derive(PartialEq)]
struct ByReverseRank(ScoredPair);

impl Eq for ByReverseRank {}

impl PartialOrd for ByReverseRank {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ByReverseRank {
    fn cmp(&self, other: &Self) -> Ordering {
        rank_cmp(&other.0, &self.0)
    }
}

/// Unordered pairs `(u, v)`, `u < v`, not linked in `residual`.
pub fn candidate_pairs(residual: &SignedGraph) -> impl Iterator<Item = (usize, usize)> + '_ {
    let n = residual.node_count();
    (0..n).flat_map(move |u| {
        let nb = residual.neighbor_indices(u);
        let mut i = nb.partition_point(|&x| x <= u);
        (u + 1..n).filter(move |&v| {
            while i < nb.len() && nb[i] < v {
                i += 1;
            }
            !(i < nb.len() && nb[i] == v)
        })
        .map(move |v| (u, v))
    })
}

/// `n(n-1)/2 - m`.
pub fn candidate_count(residual: &SignedGraph) -> usize {
    let n = residual.node_count();
    n * (n - 1) / 2 - residual.edge_count()
}

/// Every candidate pair in ranking order.
pub fn rank_pairs<S: PairScorer + ?Sized>(scorer: &S, residual: &SignedGraph) -> Vec<ScoredPair> {
    let mut pairs: Vec<ScoredPair> =
        candidate_pairs(residual).map(|(u, v)| ScoredPair { u, v, score: scorer.score(u, v) }).collect();
    pairs.sort_by(rank_cmp);
    pairs
}

/// The head and tail of the ranking.
#[derive(Debug, Clone, PartialEq)]
pub struct Extremes {
    /// Best-ranked pairs, best first.
    pub top: Vec<ScoredPair>,
    /// Worst-ranked pairs in ranking order; the last one is the very bottom.
    pub bottom: Vec<ScoredPair>,
    pub candidate_count: usize,
}

/// Candidate counts up to which [`rank_extremes`] simply sorts everything.
pub const FULL_SORT_LIMIT: usize = 1 << 21;

/// The `top` best and `bottom` worst candidates, using bounded heaps when
/// the candidate set is large.
pub fn rank_extremes<S: PairScorer + ?Sized>(
    scorer: &S,
    residual: &SignedGraph,
    top: usize,
    bottom: usize,
) -> Extremes {
    let count = candidate_count(residual);
    if count <= FULL_SORT_LIMIT {
        let all = rank_pairs(scorer, residual);
        return extremes_from_sorted(&all, top, bottom);
    }
    rank_extremes_streaming(scorer, residual, top, bottom)
}

pub(crate) fn extremes_from_sorted(all: &[ScoredPair], top: usize, bottom: usize) -> Extremes {
    let t = top.min(all.len());
    let b = bottom.min(all.len());
    Extremes { top: all[..t].to_vec(), bottom: all[all.len() - b..].to_vec(), candidate_count: all.len() }
}

pub(crate) fn rank_extremes_streaming<S: PairScorer + ?Sized>(
    scorer: &S,
    residual: &SignedGraph,
    top: usize,
    bottom: usize,
) -> Extremes {
    let mut best: BinaryHeap<ByRank> = BinaryHeap::with_capacity(top + 1);
    let mut worst: BinaryHeap<ByReverseRank> = BinaryHeap::with_capacity(bottom + 1);
    let mut count = 0;
    for (u, v) in candidate_pairs(residual) {
        count += 1;
        let p = ScoredPair { u, v, score: scorer.score(u, v) };
        if top > 0 {
            if best.len() < top {
                best.push(ByRank(p));
            } else if rank_cmp(&p, &best.peek().expect("full heap").0) == Ordering::Less {
                best.pop();
                best.push(ByRank(p));
            }
        }
        if bottom > 0 {
            if worst.len() < bottom {
                worst.push(ByReverseRank(p));
            } else if rank_cmp(&p, &worst.peek().expect("full heap").0) == Ordering::Greater {
                worst.pop();
                worst.push(ByReverseRank(p));
            }
        }
    }
    let mut top: Vec<ScoredPair> = best.into_iter().map(|b| b.0).collect();
    top.sort_by(rank_cmp);
    let mut bottom: Vec<ScoredPair> = worst.into_iter().map(|b| b.0).collect();
    bottom.sort_by(rank_cmp);
    Extremes { top, bottom, candidate_count: count }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{ingest_edge_list, EdgeRecord, IngestOptions};
    use alloc::vec;

    fn path4() -> SignedGraph {
        let recs = vec![EdgeRecord::new("0", "1", 1.0), EdgeRecord::new("1", "2", 1.0), EdgeRecord::new("2", "3", -1.0)];
        ingest_edge_list(&recs, IngestOptions::default()).unwrap().graph
    }

    #[test]
    fn path_candidates() {
        let g = path4();
        let c: Vec<(usize, usize)> = candidate_pairs(&g).collect();
        assert_eq!(c, vec![(0, 2), (0, 3), (1, 3)]);
        assert_eq!(candidate_count(&g), 3);
    }

    #[test]
    fn ties_break_by_index() {
        let g = path4();
        let r = rank_pairs(&|_: usize, _: usize| 0.0, &g);
        let order: Vec<(usize, usize)> = r.iter().map(|p| (p.u, p.v)).collect();
        assert_eq!(order, vec![(0, 2), (0, 3), (1, 3)]);
        let r = rank_pairs(&|u: usize, v: usize| (u + v) as f64, &g);
        assert_eq!((r[0].u, r[0].v), (1, 3));
    }

    #[test]
    fn streaming_matches_full_sort() {
        let mut recs = Vec::new();
        for i in 0..30usize {
            recs.push(EdgeRecord::new(alloc::format!("{i}"), alloc::format!("{}", (i + 1) % 30), 1.0));
            if i % 3 == 0 {
                recs.push(EdgeRecord::new(alloc::format!("{i}"), alloc::format!("{}", (i + 7) % 30), -1.0));
            }
        }
        let g = ingest_edge_list(&recs, IngestOptions::default()).unwrap().graph;
        // Coarse scores force many ties.
        let scorer = |u: usize, v: usize| ((u * 31 + v * 17) % 11) as f64;
        let all = rank_pairs(&scorer, &g);
        for (t, b) in [(0, 5), (7, 0), (13, 13), (10_000, 3)] {
            assert_eq!(rank_extremes_streaming(&scorer, &g, t, b), extremes_from_sorted(&all, t, b));
        }
    }
}
