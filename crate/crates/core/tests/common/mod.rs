#![allow(dead_code)]

use pole_core::{rng, DenseMatrix, SignedGraph};
use rand::Rng;

/// Connected random signed graph: a random spanning chain plus each
/// remaining pair with probability `p`. Weights have magnitude in
/// `[0.5, 2)` and are negative with probability `neg`.
pub fn random_graph(seed: u64, n: usize, p: f64, neg: f64) -> SignedGraph {
    let mut rng = rng::stream(seed, "test-graph");
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        order.swap(i, rng.random_range(0..=i));
    }
    let mut adj = vec![vec![false; n]; n];
    for w in order.windows(2) {
        adj[w[0]][w[1]] = true;
        adj[w[1]][w[0]] = true;
    }
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if adj[u][v] || rng.random::<f64>() < p {
                let mag = 0.5 + 1.5 * rng.random::<f64>();
                let w = if rng.random::<f64>() < neg { -mag } else { mag };
                edges.push((u, v, w));
            }
        }
    }
    let labels = (0..n).map(|u| format!("n{u}")).collect();
    SignedGraph::from_edges(labels, &edges).unwrap()
}

/// Dense adjacency, signed or absolute.
pub fn adjacency(g: &SignedGraph, signed: bool) -> DenseMatrix {
    let n = g.node_count();
    let mut a = DenseMatrix::zeros(n, n);
    for (u, v, w) in g.edges() {
        let w = if signed { w } else { w.abs() };
        a.set(u, v, w);
        a.set(v, u, w);
    }
    a
}

pub fn to_na(m: &DenseMatrix) -> nalgebra::DMatrix<f64> {
    nalgebra::DMatrix::from_fn(m.rows(), m.cols(), |r, c| m.get(r, c))
}

/// `exp(-(I - D⁻¹A) t)` through the eigendecomposition of the symmetric
/// `D^{-1/2} A D^{-1/2}`.
pub fn reference_exponential(g: &SignedGraph, t: f64, signed: bool) -> nalgebra::DMatrix<f64> {
    let n = g.node_count();
    let a = to_na(&adjacency(g, signed));
    let d = g.degrees();
    let s = nalgebra::DMatrix::from_fn(n, n, |r, c| a[(r, c)] / (d[r] * d[c]).sqrt());
    let eig = s.symmetric_eigen();
    let q = &eig.eigenvectors;
    let e = nalgebra::DMatrix::from_diagonal(&eig.eigenvalues.map(|l| (-(1.0 - l) * t).exp()));
    let core = q * e * q.transpose();
    nalgebra::DMatrix::from_fn(n, n, |r, c| core[(r, c)] * (d[c] / d[r]).sqrt())
}

/// `MᵀWM` with `W = D/vol - ddᵀ/vol²`, formed densely.
pub fn reference_autocovariance(g: &SignedGraph, t: f64, signed: bool) -> nalgebra::DMatrix<f64> {
    let n = g.node_count();
    let m = reference_exponential(g, t, signed);
    let d = nalgebra::DVector::from_column_slice(g.degrees());
    let vol = g.volume();
    let w = nalgebra::DMatrix::from_diagonal(&d) / vol - &d * d.transpose() / (vol * vol);
    let r = m.transpose() * w * m;
    assert_eq!(r.nrows(), n);
    r
}
