//! Signed autocovariance similarity and its low-rank factorization.
//!
//! `R(t) = M(t)ᵀ W M(t)` with the degree weight matrix
//! `W = D / vol - d dᵀ / vol²`. The embedding keeps the `k` eigenpairs of
//! `R` of largest magnitude: `U = Q_k |Λ_k|^{1/2}` together with the signs
//! of the selected eigenvalues, and reconstructs
//! `sim(u, v) = Σ_i s_i U_ui U_vi`. That is the best rank-`k` symmetric
//! approximation of `R` in Frobenius norm, including when some of the
//! selected eigenvalues are negative.

use alloc::string::String;
use alloc::vec::Vec;

use crate::dense::{dot, DenseMatrix};
use crate::dynamics::continuous_transitions;
use crate::eigen::top_k_by_magnitude;
use crate::graph::SignedGraph;
use crate::{Error, Result, DEFAULT_NODE_CAP};

/// Dense symmetric `R(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AutocovarianceMatrix {
    pub matrix: DenseMatrix,
    pub markov_time: f64,
    pub signed: bool,
    pub labels: Vec<String>,
}

/// Signed (or, with `signed = false`, unsigned) autocovariance of `g`.
///
/// `W` is never formed: with `a = Mᵀ d`,
/// `R = MᵀDM / vol - a aᵀ / vol²`. Each entry is evaluated once and
/// mirrored, so the result is exactly symmetric.
pub fn autocovariance(g: &SignedGraph, t: f64, signed: bool, tol: f64) -> Result<AutocovarianceMatrix> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let m = continuous_transitions(g, t, signed, tol)?.into_matrix();
    let n = g.node_count();
    let d = g.degrees();
    let vol = g.volume();
    // Column u of M holds M_{wu} over starting nodes w.
    let weighted: Vec<Vec<f64>> = (0..n).map(|u| m.col(u).iter().zip(d).map(|(x, w)| x * w).collect()).collect();
    let a: Vec<f64> = weighted.iter().map(|c| c.iter().sum()).collect();
    let row = |u: usize| -> Vec<f64> {
        (0..=u).map(|v| dot(&weighted[u], m.col(v)) / vol - a[u] * a[v] / (vol * vol)).collect()
    };
    #[cfg(feature = "parallel")]
    let lower: Vec<Vec<f64>> = {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(row).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let lower: Vec<Vec<f64>> = (0..n).map(row).collect();
    let mut r = DenseMatrix::zeros(n, n);
    for (u, vals) in lower.iter().enumerate() {
        for (v, &x) in vals.iter().enumerate() {
            r.set(u, v, x);
            r.set(v, u, x);
        }
    }
    Ok(AutocovarianceMatrix { matrix: r, markov_time: t, signed, labels: g.labels().to_vec() })
}

/// Node vectors with per-dimension spectral signs.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    vectors: DenseMatrix,
    /// Row-major copy of `vectors` for pair scoring.
    rows: Vec<f64>,
    spectral_signs: Vec<f64>,
    eigenvalues: Vec<f64>,
    markov_time: f64,
    signed: bool,
    plain_dot: bool,
    labels: Vec<String>,
}

/// Rank-`k` factorization of `R` by its eigenpairs of largest `|λ|`.
pub fn factorize(r: &AutocovarianceMatrix, k: usize) -> Result<Embedding> {
    let n = r.matrix.rows();
    if k == 0 || k > n {
        return Err(Error::param("k", alloc::format!("embedding dimension must be in 1..={n}")));
    }
    let pairs = top_k_by_magnitude(&r.matrix, k)?;
    let mut cols = Vec::with_capacity(k);
    let mut signs = Vec::with_capacity(k);
    for (i, &lambda) in pairs.values.iter().enumerate() {
        let scale = libm::sqrt(lambda.abs());
        cols.push(pairs.vectors.col(i).iter().map(|q| q * scale).collect());
        signs.push(if lambda < 0.0 { -1.0 } else { 1.0 });
    }
    let vectors = DenseMatrix::from_columns(n, cols);
    Embedding::from_parts(vectors, signs, pairs.values, r.markov_time, r.signed, r.labels.clone())
}

/// Autocovariance followed by factorization.
pub fn embed(g: &SignedGraph, t: f64, signed: bool, k: usize, tol: f64) -> Result<Embedding> {
    if k == 0 || k > g.node_count() {
        return Err(Error::param("k", alloc::format!("embedding dimension must be in 1..={}", g.node_count())));
    }
    factorize(&autocovariance(g, t, signed, tol)?, k)
}

impl Embedding {
    /// Assembles an embedding from stored parts; `eigenvalues` may be empty
    /// when unknown (as after loading from a file).
    pub fn from_parts(
        vectors: DenseMatrix,
        spectral_signs: Vec<f64>,
        eigenvalues: Vec<f64>,
        markov_time: f64,
        signed: bool,
        labels: Vec<String>,
    ) -> Result<Self> {
        let (n, k) = (vectors.rows(), vectors.cols());
        if spectral_signs.len() != k {
            return Err(Error::param("spectral_signs", "length must equal the dimension"));
        }
        if spectral_signs.iter().any(|&s| s != 1.0 && s != -1.0) {
            return Err(Error::param("spectral_signs", "entries must be +1 or -1"));
        }
        if labels.len() != n {
            return Err(Error::param("labels", "one label per node"));
        }
        if vectors.as_slice().iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("embedding vectors"));
        }
        let rows = vectors.transpose().as_slice().to_vec();
        Ok(Embedding {
            vectors,
            rows,
            spectral_signs,
            eigenvalues,
            markov_time,
            signed,
            plain_dot: false,
            labels,
        })
    }

    /// Plain dot products (all signs treated as +1), for baseline-style use.
    pub fn with_plain_dot(mut self, plain: bool) -> Self {
        self.plain_dot = plain;
        self
    }

    pub fn is_plain_dot(&self) -> bool {
        self.plain_dot
    }

    pub fn vectors(&self) -> &DenseMatrix {
        &self.vectors
    }

    pub fn vector(&self, u: usize) -> &[f64] {
        let k = self.dimension();
        &self.rows[u * k..(u + 1) * k]
    }

    pub fn spectral_signs(&self) -> &[f64] {
        &self.spectral_signs
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn dimension(&self) -> usize {
        self.vectors.cols()
    }

    pub fn node_count(&self) -> usize {
        self.vectors.rows()
    }

    pub fn markov_time(&self) -> f64 {
        self.markov_time
    }

    pub fn is_signed(&self) -> bool {
        self.signed
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    #[inline]
    pub(crate) fn similarity_unchecked(&self, u: usize, v: usize) -> f64 {
        let (a, b) = (self.vector(u), self.vector(v));
        if self.plain_dot {
            return dot(a, b);
        }
        let mut acc = 0.0;
        for ((&x, &y), &s) in a.iter().zip(b).zip(&self.spectral_signs) {
            acc += s * x * y;
        }
        acc
    }

    /// `Σ_i s_i U_ui U_vi`.
    pub fn similarity(&self, u: usize, v: usize) -> Result<f64> {
        let n = self.node_count();
        for &x in &[u, v] {
            if x >= n {
                return Err(Error::IndexOutOfRange { index: x, len: n });
            }
        }
        // Evaluated in canonical order so sim(u, v) and sim(v, u) agree bitwise.
        Ok(self.similarity_unchecked(u.min(v), u.max(v)))
    }

    /// Full reconstructed similarity matrix, gated at the default node cap.
    pub fn similarity_matrix(&self) -> Result<DenseMatrix> {
        self.similarity_matrix_capped(DEFAULT_NODE_CAP)
    }

    pub fn similarity_matrix_capped(&self, node_cap: usize) -> Result<DenseMatrix> {
        let n = self.node_count();
        if n > node_cap {
            return Err(Error::MemoryGate { n, cap: node_cap });
        }
        let mut out = DenseMatrix::zeros(n, n);
        self.similarity_blocks(256, |start, block| {
            for c in 0..block.cols() {
                for r in 0..n {
                    out.set(r, start + c, block.get(r, c));
                }
            }
        });
        Ok(out)
    }

    /// Streams the similarity matrix as column blocks `(first column, n x b block)`.
    pub fn similarity_blocks(&self, block: usize, mut consumer: impl FnMut(usize, &DenseMatrix)) {
        let n = self.node_count();
        let block = block.max(1);
        let mut start = 0;
        while start < n {
            let width = block.min(n - start);
            let b = DenseMatrix::from_fn(n, width, |r, c| {
                let v = start + c;
                self.similarity_unchecked(r.min(v), r.max(v))
            });
            consumer(start, &b);
            start += width;
        }
    }
}

/// `Σ_i s_i U_{:i} U_{:i}ᵀ` assembled densely (test helper and oracle).
pub fn reconstruction(e: &Embedding) -> DenseMatrix {
    let n = e.node_count();
    let mut out = DenseMatrix::zeros(n, n);
    for i in 0..e.dimension() {
        let s = if e.plain_dot { 1.0 } else { e.spectral_signs[i] };
        let col = e.vectors.col(i);
        for c in 0..n {
            for r in 0..n {
                let v = out.get(r, c) + s * col[r] * col[c];
                out.set(r, c, v);
            }
        }
    }
    out
}
