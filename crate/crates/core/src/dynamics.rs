//! Signed and unsigned random-walk transitions.
//!
//! With `P = D⁻¹A` (or `D⁻¹|A|` for the unsigned walk), the discrete
//! transitions are `Pᵗ` and the continuous ones `exp(-(I - P)t)`. Entry
//! `(u, v)` is the walk from `u` to `v`. Column `v` is obtained by applying
//! the operator to the indicator `e_v` with sparse products, so every
//! column is independent of the others.

use alloc::vec;
use alloc::vec::Vec;

use crate::dense::DenseMatrix;
use crate::graph::SignedGraph;
use crate::{Error, Result, DEFAULT_NODE_CAP};

/// Longest walk [`enumerate_walks`] accepts by default.
pub const DEFAULT_WALK_CAP: usize = 6;

/// Largest Markov time handled by a single Taylor expansion; longer times
/// are split into equal steps so `e^{-t}` stays representable.
const MAX_TAYLOR_STEP: f64 = 32.0;

/// Transition matrix `M(t)` or `|M|(t)` at one Markov time.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionField {
    matrix: DenseMatrix,
    markov_time: f64,
    signed: bool,
    discrete: bool,
}

impl TransitionField {
    /// Transition weight of walks starting at `from` and ending at `to`.
    #[inline]
    pub fn get(&self, from: usize, to: usize) -> f64 {
        self.matrix.get(from, to)
    }

    /// All transitions into `to`, indexed by starting node (`M_{:to}`).
    #[inline]
    pub fn column(&self, to: usize) -> &[f64] {
        self.matrix.col(to)
    }

    /// The matrix with rows indexed by start node and columns by end node.
    pub fn matrix(&self) -> &DenseMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> DenseMatrix {
        self.matrix
    }

    pub fn markov_time(&self) -> f64 {
        self.markov_time
    }

    pub fn is_signed(&self) -> bool {
        self.signed
    }

    pub fn is_discrete(&self) -> bool {
        self.discrete
    }

    pub fn node_count(&self) -> usize {
        self.matrix.rows()
    }
}

/// `out = P x` for the signed or absolute one-step operator.
pub(crate) fn step(g: &SignedGraph, signed: bool, x: &[f64], out: &mut [f64]) {
    for (u, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (&v, &w) in g.neighbor_indices(u).iter().zip(g.neighbor_weights(u)) {
            let w = if signed { w } else { w.abs() };
            acc += w * x[v];
        }
        *o = acc / g.degree(u);
    }
}

fn check_gate(g: &SignedGraph, cap: usize) -> Result<()> {
    if g.node_count() > cap {
        return Err(Error::MemoryGate { n: g.node_count(), cap });
    }
    Ok(())
}

fn collect_columns(n: usize, f: impl Fn(usize) -> Vec<f64> + Sync + Send) -> DenseMatrix {
    #[cfg(feature = "parallel")]
    let cols: Vec<Vec<f64>> = {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(f).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let cols: Vec<Vec<f64>> = (0..n).map(f).collect();
    DenseMatrix::from_columns(n, cols)
}

/// Exact `(D⁻¹A)ᵗ`, or `(D⁻¹|A|)ᵗ` when `signed` is false.
pub fn discrete_transitions(g: &SignedGraph, t: usize, signed: bool) -> Result<TransitionField> {
    check_gate(g, DEFAULT_NODE_CAP)?;
    let n = g.node_count();
    let matrix = if t == 0 {
        DenseMatrix::identity(n)
    } else {
        collect_columns(n, |v| {
            let mut x = vec![0.0; n];
            x[v] = 1.0;
            let mut y = vec![0.0; n];
            for _ in 0..t {
                step(g, signed, &x, &mut y);
                core::mem::swap(&mut x, &mut y);
            }
            x
        })
    };
    Ok(TransitionField { matrix, markov_time: t as f64, signed, discrete: true })
}

/// Poisson weights `e^{-τ} τ^j / j!` for `j = 0..=J`, with `J` the first
/// order whose neglected tail is provably below `tol`.
fn poisson_weights(tau: f64, tol: f64) -> Vec<f64> {
    let mut weights = vec![libm::exp(-tau)];
    let mut j = 0usize;
    loop {
        let next = weights[j] * tau / (j + 1) as f64;
        // Tail Σ_{i>j} c_i <= c_{j+1} / (1 - τ/(j+2)) once j + 2 > τ.
        let ratio = tau / (j + 2) as f64;
        if ratio < 1.0 && next / (1.0 - ratio) < tol {
            break;
        }
        weights.push(next);
        j += 1;
    }
    weights
}

/// Truncated-Taylor propagation plan for one Markov time.
#[derive(Debug, Clone)]
pub(crate) struct Propagator {
    steps: usize,
    weights: Vec<f64>,
}

impl Propagator {
    pub(crate) fn new(t: f64, tol: f64) -> Self {
        let steps = if t > MAX_TAYLOR_STEP { libm::ceil(t / MAX_TAYLOR_STEP) as usize } else { 1 };
        let tau = t / steps as f64;
        Propagator { steps, weights: poisson_weights(tau, tol / steps as f64) }
    }

    #[cfg(test)]
    pub(crate) fn order(&self) -> usize {
        self.weights.len() - 1
    }

    /// Replaces `x` by `exp(-(I - P)t) x`.
    pub(crate) fn apply(&self, g: &SignedGraph, signed: bool, x: &mut Vec<f64>) {
        if self.weights.len() == 1 && self.weights[0] == 1.0 {
            return;
        }
        let n = x.len();
        let mut term = vec![0.0; n];
        let mut next = vec![0.0; n];
        let mut acc = vec![0.0; n];
        for _ in 0..self.steps {
            term.copy_from_slice(x);
            for (a, &v) in acc.iter_mut().zip(term.iter()) {
                *a = self.weights[0] * v;
            }
            for &c in &self.weights[1..] {
                step(g, signed, &term, &mut next);
                core::mem::swap(&mut term, &mut next);
                for (a, &v) in acc.iter_mut().zip(term.iter()) {
                    *a += c * v;
                }
            }
            core::mem::swap(x, &mut acc);
        }
    }
}

fn check_time(t: f64, tol: f64) -> Result<()> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::param("tol", "must be positive"));
    }
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::param("t", "Markov time must be finite and nonnegative"));
    }
    Ok(())
}

/// Column `M_{:to}(t)` of the continuous transitions, without building
/// the full matrix.
pub fn continuous_column(g: &SignedGraph, t: f64, signed: bool, tol: f64, to: usize) -> Result<Vec<f64>> {
    check_time(t, tol)?;
    let n = g.node_count();
    if to >= n {
        return Err(Error::IndexOutOfRange { index: to, len: n });
    }
    let mut x = vec![0.0; n];
    x[to] = 1.0;
    if t > 0.0 {
        Propagator::new(t, tol).apply(g, signed, &mut x);
    }
    Ok(x)
}

/// `exp(-(I - D⁻¹A)t)` by truncated Taylor series on each column, every
/// entry within `tol` of the exact value.
pub fn continuous_transitions(g: &SignedGraph, t: f64, signed: bool, tol: f64) -> Result<TransitionField> {
    continuous_transitions_capped(g, t, signed, tol, DEFAULT_NODE_CAP)
}

/// [`continuous_transitions`] with an explicit dense memory gate.
pub fn continuous_transitions_capped(
    g: &SignedGraph,
    t: f64,
    signed: bool,
    tol: f64,
    node_cap: usize,
) -> Result<TransitionField> {
    check_time(t, tol)?;
    check_gate(g, node_cap)?;
    let n = g.node_count();
    let matrix = if t == 0.0 {
        DenseMatrix::identity(n)
    } else {
        let prop = Propagator::new(t, tol);
        collect_columns(n, |v| {
            let mut x = vec![0.0; n];
            x[v] = 1.0;
            prop.apply(g, signed, &mut x);
            x
        })
    };
    Ok(TransitionField { matrix, markov_time: t, signed, discrete: false })
}

/// A walk `⟨w_0, …, w_t⟩` with its probability and balance-theory sign.
#[derive(Debug, Clone, PartialEq)]
pub struct Walk {
    pub nodes: Vec<usize>,
    pub probability: f64,
    pub sign: i8,
}

/// Every length-`t` walk from `u` to `v`. Exponential in `t`; meant as a
/// reference for small graphs.
pub fn enumerate_walks(g: &SignedGraph, u: usize, v: usize, t: usize) -> Result<Vec<Walk>> {
    enumerate_walks_capped(g, u, v, t, DEFAULT_WALK_CAP)
}

pub fn enumerate_walks_capped(g: &SignedGraph, u: usize, v: usize, t: usize, cap: usize) -> Result<Vec<Walk>> {
    if t > cap {
        return Err(Error::WalkTooLong { t, cap });
    }
    let n = g.node_count();
    for &x in &[u, v] {
        if x >= n {
            return Err(Error::IndexOutOfRange { index: x, len: n });
        }
    }
    let mut out = Vec::new();
    let mut path = vec![u];
    extend_walk(g, v, t, &mut path, 1.0, 1, &mut out);
    Ok(out)
}

fn extend_walk(
    g: &SignedGraph,
    target: usize,
    remaining: usize,
    path: &mut Vec<usize>,
    probability: f64,
    sign: i8,
    out: &mut Vec<Walk>,
) {
    let here = *path.last().expect("walk is never empty");
    if remaining == 0 {
        if here == target {
            out.push(Walk { nodes: path.clone(), probability, sign });
        }
        return;
    }
    let d = g.degree(here);
    for (next, w) in g.neighbors(here) {
        path.push(next);
        let s = if w < 0.0 { -sign } else { sign };
        extend_walk(g, target, remaining - 1, path, probability * w.abs() / d, s, out);
        path.pop();
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
    fn zero_time_is_identity() {
        let g = graph(&[("a", "b", 1.0), ("b", "c", -2.0)]);
        assert_eq!(discrete_transitions(&g, 0, true).unwrap().matrix(), &DenseMatrix::identity(3));
        assert_eq!(continuous_transitions(&g, 0.0, true, 1e-9).unwrap().matrix(), &DenseMatrix::identity(3));
    }

    #[test]
    fn single_forced_step() {
        let g = graph(&[("a", "b", 1.0)]);
        let m = discrete_transitions(&g, 1, true).unwrap();
        assert_eq!(m.matrix().to_row_major(), vec![0.0, 1.0, 1.0, 0.0]);
    }

    #[test]
    fn two_step_mixed_path() {
        // a -(+1)- b -(-1)- c; the only walk a->c is a,b,c with prob 1 * 1/2, sign -.
        let g = graph(&[("a", "b", 1.0), ("b", "c", -1.0)]);
        let m = discrete_transitions(&g, 2, true).unwrap();
        assert_eq!(m.get(0, 2), -0.5);
        let walks = enumerate_walks(&g, 0, 2, 2).unwrap();
        assert_eq!(walks.len(), 1);
        assert_eq!(walks[0].nodes, vec![0, 1, 2]);
        assert_eq!(walks[0].sign, -1);
    }

    #[test]
    fn two_node_closed_form() {
        for (w, sign) in [(1.0, 1.0), (-1.0, -1.0)] {
            let g = graph(&[("a", "b", w)]);
            let m = continuous_transitions(&g, 1.0, true, 1e-12).unwrap();
            let off = sign * (1.0 - libm::exp(-2.0)) / 2.0;
            assert!((m.get(0, 1) - off).abs() < 1e-10);
            assert!((m.get(1, 0) - off).abs() < 1e-10);
            assert!((m.get(0, 0) - (1.0 + libm::exp(-2.0)) / 2.0).abs() < 1e-10);
        }
    }

    #[test]
    fn long_times_are_split() {
        let g = graph(&[("a", "b", 1.0)]);
        let m = continuous_transitions(&g, 100.0, true, 1e-10).unwrap();
        assert!((m.get(0, 1) - 0.5).abs() < 1e-10);
        assert!(Propagator::new(100.0, 1e-10).order() < 80);
    }

    #[test]
    fn triangle_return_walks() {
        let g = graph(&[("a", "b", 1.0), ("b", "c", 1.0), ("a", "c", 1.0)]);
        let walks = enumerate_walks(&g, 0, 0, 2).unwrap();
        assert_eq!(walks.len(), 2);
        assert!(walks.iter().all(|w| w.probability == 0.25 && w.sign == 1));
    }

    #[test]
    fn parity_leaves_no_walk() {
        let g = graph(&[("a", "b", 1.0)]);
        assert!(enumerate_walks(&g, 0, 1, 2).unwrap().is_empty());
    }

    #[test]
    fn enemy_of_enemy_twice() {
        let g = graph(&[("a", "b", 1.0), ("b", "c", -1.0), ("c", "d", -1.0)]);
        let walks = enumerate_walks(&g, 0, 3, 3).unwrap();
        assert_eq!(walks.len(), 1);
        assert_eq!(walks[0].sign, 1);
    }

    #[test]
    fn walk_cap_and_bad_tol() {
        let g = graph(&[("a", "b", 1.0)]);
        assert_eq!(enumerate_walks(&g, 0, 1, 7).unwrap_err(), Error::WalkTooLong { t: 7, cap: 6 });
        assert!(continuous_transitions(&g, 1.0, true, 0.0).is_err());
        assert!(continuous_transitions(&g, -1.0, true, 1e-9).is_err());
    }

    #[test]
    fn memory_gate() {
        let g = graph(&[("a", "b", 1.0), ("b", "c", 1.0)]);
        assert_eq!(
            continuous_transitions_capped(&g, 1.0, true, 1e-9, 2).unwrap_err(),
            Error::MemoryGate { n: 3, cap: 2 }
        );
    }
}
