//! Symmetric eigensolvers.
//!
//! The dense path reduces to tridiagonal form with Householder reflections
//! and diagonalizes with the implicit QL method. Larger problems use a
//! thick-restart Lanczos iteration that only touches the matrix through
//! products and targets the eigenvalues of largest magnitude.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::dense::{dot, norm, DenseMatrix};
use crate::{Error, Result};

/// Above this size [`top_k_by_magnitude`] switches to Lanczos.
pub const DENSE_LIMIT: usize = 3_000;

/// Residual tolerance of the Lanczos path, relative to the largest
/// selected eigenvalue.
pub const LANCZOS_TOL: f64 = 1e-10;

const MAX_QL_SWEEPS: usize = 60;
const MAX_RESTARTS: usize = 1_000;

/// Eigenpairs `(values[i], vectors.col(i))`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPairs {
    pub values: Vec<f64>,
    pub vectors: DenseMatrix,
}

/// Full decomposition of a symmetric matrix, eigenvalues ascending.
pub fn symmetric_eigen(a: &DenseMatrix) -> Result<EigenPairs> {
    let n = a.rows();
    if n != a.cols() {
        return Err(Error::param("matrix", "must be square"));
    }
    if a.as_slice().iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("eigensolver input"));
    }
    if n == 0 {
        return Ok(EigenPairs { values: Vec::new(), vectors: DenseMatrix::zeros(0, 0) });
    }
    // Column-major working copy; v[c * n + r] = V[r][c].
    let mut v = a.as_slice().to_vec();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tridiagonalize(n, &mut v, &mut d, &mut e);
    tridiagonal_ql(n, &mut v, &mut d, &mut e)?;
    let vectors = DenseMatrix::from_columns(n, v.chunks(n).map(|c| c.to_vec()).collect());
    Ok(EigenPairs { values: d, vectors })
}

fn tridiagonalize(n: usize, v: &mut [f64], d: &mut [f64], e: &mut [f64]) {
    let at = |r: usize, c: usize| c * n + r;
    for j in 0..n {
        d[j] = v[at(n - 1, j)];
    }
    for i in (1..n).rev() {
        let mut scale = 0.0;
        let mut h = 0.0;
        for k in 0..i {
            scale += d[k].abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[at(i - 1, j)];
                v[at(i, j)] = 0.0;
                v[at(j, i)] = 0.0;
            }
        } else {
            for k in 0..i {
                d[k] /= scale;
                h += d[k] * d[k];
            }
            let mut f = d[i - 1];
            let mut g = libm::sqrt(h);
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for ej in e.iter_mut().take(i) {
                *ej = 0.0;
            }
            for j in 0..i {
                f = d[j];
                v[at(j, i)] = f;
                g = e[j] + v[at(j, j)] * f;
                for k in j + 1..i {
                    g += v[at(k, j)] * d[k];
                    e[k] += v[at(k, j)] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    v[at(k, j)] -= f * e[k] + g * d[k];
                }
                d[j] = v[at(i - 1, j)];
                v[at(i, j)] = 0.0;
            }
        }
        d[i] = h;
    }
    // Accumulate the transformations.
    for i in 0..n - 1 {
        v[at(n - 1, i)] = v[at(i, i)];
        v[at(i, i)] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = v[at(k, i + 1)] / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += v[at(k, i + 1)] * v[at(k, j)];
                }
                for k in 0..=i {
                    v[at(k, j)] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[at(k, i + 1)] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = v[at(n - 1, j)];
        v[at(n - 1, j)] = 0.0;
    }
    v[at(n - 1, n - 1)] = 1.0;
    e[0] = 0.0;
}

fn tridiagonal_ql(n: usize, v: &mut [f64], d: &mut [f64], e: &mut [f64]) -> Result<()> {
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    let eps = f64::EPSILON;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > MAX_QL_SWEEPS {
                    return Err(Error::NoConvergence(iter));
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = libm::hypot(p, 1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().take(n).skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = libm::hypot(p, e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    let (left, right) = v.split_at_mut((i + 1) * n);
                    let col_i = &mut left[i * n..];
                    let col_next = &mut right[..n];
                    for (a, b) in col_i.iter_mut().zip(col_next.iter_mut()) {
                        let hk = *b;
                        *b = s * *a + c * hk;
                        *a = c * *a - s * hk;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    // Selection sort keeps the column swaps minimal.
    for i in 0..n.saturating_sub(1) {
        let mut k = i;
        let mut p = d[i];
        for (j, &dj) in d.iter().enumerate().skip(i + 1) {
            if dj < p {
                k = j;
                p = dj;
            }
        }
        if k != i {
            d.swap(i, k);
            for r in 0..n {
                v.swap(i * n + r, k * n + r);
            }
        }
    }
    Ok(())
}

/// Flips `x` so its largest-magnitude entry (first on ties) is positive.
pub fn canonical_sign(x: &mut [f64]) {
    let mut best = 0;
    for (i, val) in x.iter().enumerate() {
        if val.abs() > x[best].abs() {
            best = i;
        }
    }
    if x.get(best).is_some_and(|&b| b < 0.0) {
        x.iter_mut().for_each(|v| *v = -*v);
    }
}

/// Positions of the `k` largest `|values|`, stable on ties.
pub(crate) fn select_by_magnitude(values: &[f64], k: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[b].abs().total_cmp(&values[a].abs()));
    idx.truncate(k);
    idx
}

/// The `k` eigenpairs of largest `|λ|`, ordered by descending `|λ|`, with
/// [`canonical_sign`] applied to every vector.
pub fn top_k_by_magnitude(a: &DenseMatrix, k: usize) -> Result<EigenPairs> {
    let n = a.rows();
    if k == 0 || k > n {
        return Err(Error::param("k", alloc::format!("must be in 1..={n}")));
    }
    if n > DENSE_LIMIT && 2 * k + 20 < n {
        lanczos_top_k(n, k, LANCZOS_TOL, |x, y| a.mul_vec(x, y))
    } else {
        dense_top_k(a, k)
    }
}

/// Dense route of [`top_k_by_magnitude`], usable at any size.
pub fn dense_top_k(a: &DenseMatrix, k: usize) -> Result<EigenPairs> {
    let full = symmetric_eigen(a)?;
    let n = a.rows();
    let pick = select_by_magnitude(&full.values, k);
    let values = pick.iter().map(|&i| full.values[i]).collect();
    let cols = pick
        .iter()
        .map(|&i| {
            let mut c = full.vectors.col(i).to_vec();
            canonical_sign(&mut c);
            c
        })
        .collect();
    Ok(EigenPairs { values, vectors: DenseMatrix::from_columns(n, cols) })
}

/// Orthogonalizes `w` against `basis` twice (classical Gram-Schmidt with
/// reorthogonalization).
fn orthogonalize(basis: &[Vec<f64>], w: &mut [f64]) {
    for _ in 0..2 {
        for b in basis {
            let c = dot(b, w);
            for (x, &y) in w.iter_mut().zip(b) {
                *x -= c * y;
            }
        }
    }
}

/// Thick-restart Lanczos for the `k` eigenpairs of largest magnitude of a
/// symmetric operator given by `apply(x, y)`: `y = A x`.
///
/// The start vector is fixed, so results are reproducible.
pub fn lanczos_top_k(
    n: usize,
    k: usize,
    tol: f64,
    apply: impl Fn(&[f64], &mut [f64]),
) -> Result<EigenPairs> {
    if k == 0 || k > n {
        return Err(Error::param("k", alloc::format!("must be in 1..={n}")));
    }
    let m = n.min((2 * k + 10).max(k + 30));
    let mut rng = crate::rng::stream(0, "lanczos-start");
    let fresh = |rng: &mut rand_chacha::ChaCha8Rng| -> Vec<f64> {
        (0..n).map(|_| rng.random::<f64>() - 0.5).collect()
    };

    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(m + 1);
    let mut images: Vec<Vec<f64>> = Vec::with_capacity(m + 1);
    let mut start = fresh(&mut rng);
    let s = norm(&start);
    start.iter_mut().for_each(|x| *x /= s);
    basis.push(start);

    for _restart in 0..MAX_RESTARTS {
        // Extend to m vectors, every basis vector paired with its image.
        loop {
            if images.len() < basis.len() {
                let mut y = vec![0.0; n];
                apply(basis.last().expect("nonempty"), &mut y);
                images.push(y);
            }
            if basis.len() == m {
                break;
            }
            let mut w = images.last().expect("nonempty").clone();
            let scale = norm(&w).max(1.0);
            orthogonalize(&basis, &mut w);
            let mut nw = norm(&w);
            if nw <= 1e-10 * scale {
                // Invariant subspace; continue from a fresh direction.
                w = fresh(&mut rng);
                orthogonalize(&basis, &mut w);
                nw = norm(&w);
                if nw <= 1e-10 {
                    break;
                }
            }
            w.iter_mut().for_each(|x| *x /= nw);
            basis.push(w);
        }

        // Rayleigh-Ritz on the current basis.
        let j = basis.len();
        let mut h = DenseMatrix::from_fn(j, j, |r, c| dot(&basis[r], &images[c]));
        h.symmetrize();
        let ritz = symmetric_eigen(&h)?;
        let kk = k.min(j);
        let pick = select_by_magnitude(&ritz.values, kk);
        let mut xs = Vec::with_capacity(kk);
        let mut axs = Vec::with_capacity(kk);
        let mut worst: f64 = 0.0;
        let lead = ritz.values[pick[0]].abs().max(f64::MIN_POSITIVE);
        for &p in &pick {
            let y = ritz.vectors.col(p);
            let mut x = vec![0.0; n];
            let mut ax = vec![0.0; n];
            for (c, &yc) in y.iter().enumerate() {
                for ((xi, axi), (&b, &ib)) in
                    x.iter_mut().zip(ax.iter_mut()).zip(basis[c].iter().zip(&images[c]))
                {
                    *xi += yc * b;
                    *axi += yc * ib;
                }
            }
            let theta = ritz.values[p];
            let res: f64 = libm::sqrt(x.iter().zip(&ax).map(|(&xi, &ai)| { let r = ai - theta * xi; r * r }).sum());
            worst = worst.max(res);
            xs.push(x);
            axs.push(ax);
        }
        if (worst <= tol * lead && kk == k) || j == n {
            let values = pick.iter().map(|&p| ritz.values[p]).collect();
            for x in xs.iter_mut() {
                canonical_sign(x);
            }
            return Ok(EigenPairs { values, vectors: DenseMatrix::from_columns(n, xs) });
        }
        // Restart from the wanted Ritz vectors plus the next Krylov direction.
        let mut next = images.last().expect("nonempty").clone();
        orthogonalize(&basis, &mut next);
        let nn = norm(&next);
        basis = xs;
        images = axs;
        if nn <= 1e-10 {
            next = fresh(&mut rng);
        }
        // The Ritz vectors are only orthonormal to rounding; clean up again.
        orthogonalize(&basis, &mut next);
        let nn = norm(&next);
        next.iter_mut().for_each(|x| *x /= nn);
        basis.push(next);
    }
    Err(Error::NoConvergence(MAX_RESTARTS))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reconstruct(p: &EigenPairs) -> DenseMatrix {
        let n = p.vectors.rows();
        DenseMatrix::from_fn(n, n, |r, c| {
            (0..p.values.len()).map(|i| p.values[i] * p.vectors.get(r, i) * p.vectors.get(c, i)).sum()
        })
    }

    fn sample(n: usize, seed: u64) -> DenseMatrix {
        let mut rng = crate::rng::stream(seed, "eigen-test");
        let mut a = DenseMatrix::from_fn(n, n, |_, _| rng.random::<f64>() * 2.0 - 1.0);
        a.symmetrize();
        a
    }

    #[test]
    fn diagonal_and_small_cases() {
        let a = DenseMatrix::from_row_major(3, 3, &[3.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 2.0]);
        let p = symmetric_eigen(&a).unwrap();
        assert_eq!(p.values, vec![-1.0, 2.0, 3.0]);
        let one = symmetric_eigen(&DenseMatrix::from_row_major(1, 1, &[5.0])).unwrap();
        assert_eq!(one.values, vec![5.0]);
        let two = symmetric_eigen(&DenseMatrix::from_row_major(2, 2, &[0.0, 1.0, 1.0, 0.0])).unwrap();
        assert!((two.values[0] + 1.0).abs() < 1e-15 && (two.values[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn full_decomposition_reconstructs() {
        for (n, seed) in [(5, 1), (17, 2), (40, 3)] {
            let a = sample(n, seed);
            let p = symmetric_eigen(&a).unwrap();
            assert!(reconstruct(&p).max_abs_diff(&a) < 1e-12);
            let q = &p.vectors;
            let qtq = q.transpose().matmul(q);
            assert!(qtq.max_abs_diff(&DenseMatrix::identity(n)) < 1e-12);
            assert!(p.values.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn magnitude_selection_and_sign() {
        let a = DenseMatrix::from_row_major(3, 3, &[-5.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 3.0]);
        let p = top_k_by_magnitude(&a, 2).unwrap();
        assert_eq!(p.values, vec![-5.0, 3.0]);
        assert_eq!(p.vectors.col(0), &[1.0, 0.0, 0.0]);
        assert!(top_k_by_magnitude(&a, 0).is_err());
        assert!(top_k_by_magnitude(&a, 4).is_err());
    }

    #[test]
    fn lanczos_matches_dense() {
        let n = 150;
        let a = sample(n, 9);
        for k in [1, 5, 12] {
            let dense = dense_top_k(&a, k).unwrap();
            let lz = lanczos_top_k(n, k, LANCZOS_TOL, |x, y| a.mul_vec(x, y)).unwrap();
            for i in 0..k {
                assert!((dense.values[i] - lz.values[i]).abs() < 1e-8, "k={k} i={i}");
            }
            let rd = reconstruct(&dense);
            let rl = reconstruct(&lz);
            assert!(rd.max_abs_diff(&rl) < 1e-6);
        }
    }

    #[test]
    fn lanczos_on_low_rank_operator() {
        // Rank-3 matrix: the Krylov space is exhausted quickly.
        let n = 60;
        let u: Vec<Vec<f64>> = (0..3).map(|j| (0..n).map(|i| libm::sin((i * (j + 1)) as f64 + 0.3)).collect()).collect();
        let lam = [4.0, -2.0, 1.0];
        let a = DenseMatrix::from_fn(n, n, |r, c| (0..3).map(|j| lam[j] * u[j][r] * u[j][c]).sum());
        let lz = lanczos_top_k(n, 2, 1e-10, |x, y| a.mul_vec(x, y)).unwrap();
        let dense = dense_top_k(&a, 2).unwrap();
        for i in 0..2 {
            assert!((lz.values[i] - dense.values[i]).abs() < 1e-8);
        }
    }
}
