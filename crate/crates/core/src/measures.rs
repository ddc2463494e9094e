//! Random-walk polarization and the triangle balance statistic.

use alloc::vec;
use alloc::vec::Vec;

use crate::dynamics::Propagator;
use crate::graph::SignedGraph;
use crate::{Error, Result};

/// Node- and graph-level polarization at one Markov time.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarizationReport {
    pub markov_time: f64,
    /// `Pol(u; t)` per node, in `[-1, 1]`.
    pub node_scores: Vec<f64>,
    /// Mean of `node_scores`.
    pub graph_score: f64,
    /// Nodes whose unsigned column was constant; they score 0.
    pub zero_variance_nodes: Vec<usize>,
}

impl PolarizationReport {
    /// Node indices sorted by ascending score, ties by index.
    pub fn ascending(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.node_scores.len()).collect();
        order.sort_by(|&a, &b| self.node_scores[a].total_cmp(&self.node_scores[b]).then(a.cmp(&b)));
        order
    }
}

/// Pearson correlation, `None` when either vector is constant.
pub fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (&a, &b) in x.iter().zip(y) {
        let (da, db) = (a - mx, b - my);
        sxy += da * db;
        sxx += da * da;
        syy += db * db;
    }
    if sxx <= 0.0 || syy <= 0.0 {
        return None;
    }
    Some((sxy / libm::sqrt(sxx * syy)).clamp(-1.0, 1.0))
}

/// `Pol(u; t) = corr(|M|_{:u}(t), M_{:u}(t))` over full columns of the
/// continuous transitions, self-entry included.
pub fn node_polarization(g: &SignedGraph, t: f64, tol: f64) -> Result<PolarizationReport> {
    let mut reports = graph_polarization_profile_with_tol(g, &[t], tol)?;
    Ok(reports.pop().expect("one report per time"))
}

/// One [`PolarizationReport`] per Markov time, in input order.
pub fn graph_polarization_profile(g: &SignedGraph, times: &[f64]) -> Result<Vec<PolarizationReport>> {
    graph_polarization_profile_with_tol(g, times, crate::DEFAULT_TOL)
}

/// Columns are advanced through the times in ascending order, so each
/// time after the first only costs the increment from its predecessor.
pub fn graph_polarization_profile_with_tol(
    g: &SignedGraph,
    times: &[f64],
    tol: f64,
) -> Result<Vec<PolarizationReport>> {
    if times.is_empty() {
        return Err(Error::param("times", "at least one Markov time is required"));
    }
    if !(tol > 0.0) {
        return Err(Error::param("tol", "must be positive"));
    }
    if let Some(&bad) = times.iter().find(|&&t| !(t > 0.0) || !t.is_finite()) {
        return Err(Error::param("t", alloc::format!("Markov time {bad} must be positive")));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = g.node_count();
    let mut order: Vec<usize> = (0..times.len()).collect();
    order.sort_by(|&a, &b| times[a].total_cmp(&times[b]).then(a.cmp(&b)));
    let mut props = Vec::with_capacity(order.len());
    let mut prev = 0.0;
    for &i in &order {
        let dt = times[i] - prev;
        props.push(if dt > 0.0 { Some(Propagator::new(dt, tol)) } else { None });
        prev = times[i];
    }

    // scores[u][j] for the j-th time in ascending order.
    let per_node = |u: usize| -> Vec<Option<f64>> {
        let mut signed = vec![0.0; n];
        signed[u] = 1.0;
        let mut unsigned = signed.clone();
        props
            .iter()
            .map(|p| {
                if let Some(p) = p {
                    p.apply(g, true, &mut signed);
                    p.apply(g, false, &mut unsigned);
                }
                pearson(&unsigned, &signed)
            })
            .collect()
    };
    #[cfg(feature = "parallel")]
    let scores: Vec<Vec<Option<f64>>> = {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(per_node).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let scores: Vec<Vec<Option<f64>>> = (0..n).map(per_node).collect();

    let mut reports: Vec<Option<PolarizationReport>> = vec![None; times.len()];
    for (j, &i) in order.iter().enumerate() {
        let mut zero_variance_nodes = Vec::new();
        let node_scores: Vec<f64> = scores
            .iter()
            .enumerate()
            .map(|(u, s)| {
                s[j].unwrap_or_else(|| {
                    zero_variance_nodes.push(u);
                    0.0
                })
            })
            .collect();
        let graph_score = node_scores.iter().sum::<f64>() / n as f64;
        reports[i] = Some(PolarizationReport { markov_time: times[i], node_scores, graph_score, zero_variance_nodes });
    }
    Ok(reports.into_iter().map(|r| r.expect("every time filled")).collect())
}

/// Closed triangles and how many of them are balanced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BalanceReport {
    pub triangle_count: u64,
    pub balanced_count: u64,
    /// `None` when the graph has no triangle.
    pub balance: Option<f64>,
}

/// Fraction of triangles whose edge-sign product is positive.
pub fn social_balance(g: &SignedGraph) -> BalanceReport {
    let mut triangles = 0u64;
    let mut balanced = 0u64;
    for u in 0..g.node_count() {
        let nu = g.neighbor_indices(u);
        let wu = g.neighbor_weights(u);
        let start = nu.partition_point(|&x| x <= u);
        for i in start..nu.len() {
            let v = nu[i];
            let nv = g.neighbor_indices(v);
            let wv = g.neighbor_weights(v);
            // Merge the parts of both lists above v.
            let (mut a, mut b) = (i + 1, nv.partition_point(|&x| x <= v));
            while a < nu.len() && b < nv.len() {
                match nu[a].cmp(&nv[b]) {
                    core::cmp::Ordering::Less => a += 1,
                    core::cmp::Ordering::Greater => b += 1,
                    core::cmp::Ordering::Equal => {
                        triangles += 1;
                        let negatives = [wu[i], wu[a], wv[b]].iter().filter(|&&w| w < 0.0).count();
                        if negatives % 2 == 0 {
                            balanced += 1;
                        }
                        a += 1;
                        b += 1;
                    }
                }
            }
        }
    }
    BalanceReport {
        triangle_count: triangles,
        balanced_count: balanced,
        balance: (triangles > 0).then(|| balanced as f64 / triangles as f64),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{ingest_edge_list, EdgeRecord, IngestOptions};

    fn graph(list: &[(&str, &str, f64)]) -> SignedGraph {
        let recs: Vec<EdgeRecord> = list.iter().map(|&(a, b, w)| EdgeRecord::new(a, b, w)).collect();
        ingest_edge_list(&recs, IngestOptions::default()).unwrap().graph
    }

    #[test]
    fn balance_of_single_triangles() {
        let pos = graph(&[("a", "b", 1.0), ("b", "c", 1.0), ("a", "c", 1.0)]);
        assert_eq!(social_balance(&pos).balance, Some(1.0));
        let mixed = graph(&[("a", "b", 1.0), ("b", "c", 1.0), ("a", "c", -1.0)]);
        assert_eq!(social_balance(&mixed).balance, Some(0.0));
        let path = graph(&[("a", "b", 1.0), ("b", "c", 1.0)]);
        let r = social_balance(&path);
        assert_eq!((r.triangle_count, r.balance), (0, None));
    }

    #[test]
    fn k4_counts_four_triangles() {
        let g = graph(&[("a", "b", 1.0), ("a", "c", 1.0), ("a", "d", -1.0), ("b", "c", 1.0), ("b", "d", -1.0), ("c", "d", -1.0)]);
        let r = social_balance(&g);
        assert_eq!(r.triangle_count, 4);
        // abc (+++) and abd, acd, bcd each with two negatives.
        assert_eq!(r.balanced_count, 4);
    }

    #[test]
    fn all_positive_scores_one() {
        let g = graph(&[("a", "b", 1.0), ("b", "c", 2.0), ("c", "d", 1.0), ("a", "c", 1.0)]);
        let r = node_polarization(&g, 2.0, 1e-9).unwrap();
        assert!(r.node_scores.iter().all(|&s| (s - 1.0).abs() < 1e-12));
        assert!((r.graph_score - 1.0).abs() < 1e-12);
    }

    #[test]
    fn profile_errors_and_consistency() {
        let g = graph(&[("a", "b", 1.0), ("b", "c", -1.0), ("a", "c", 1.0), ("c", "d", 1.0)]);
        assert!(graph_polarization_profile(&g, &[]).is_err());
        assert!(graph_polarization_profile(&g, &[0.0]).is_err());
        let single = node_polarization(&g, 3.0, crate::DEFAULT_TOL).unwrap();
        let profile = graph_polarization_profile(&g, &[3.0]).unwrap();
        assert_eq!(profile[0], single);
        let two = graph_polarization_profile(&g, &[10.0, 1.0]).unwrap();
        assert_eq!(two[0].markov_time, 10.0);
        assert_eq!(two[1].markov_time, 1.0);
    }

    #[test]
    fn disconnected_rejected() {
        let g = graph(&[("a", "b", 1.0), ("c", "d", 1.0)]);
        assert_eq!(node_polarization(&g, 1.0, 1e-9).unwrap_err(), Error::Disconnected);
    }

    #[test]
    fn pearson_constant_is_none() {
        assert_eq!(pearson(&[1.0, 1.0], &[0.0, 1.0]), None);
        assert!((pearson(&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0]).unwrap() - 1.0).abs() < 1e-15);
    }
}
