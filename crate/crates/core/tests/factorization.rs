mod common;

use pole_core::embedding::reconstruction;
use pole_core::{autocovariance, factorize};

#[test]
fn rank_k_error_equals_discarded_spectrum() {
    for seed in 0..100u64 {
        let g = common::random_graph(seed, 10, 0.35, 0.35);
        let t = [0.5, 1.0, 3.0][seed as usize % 3];
        let r = autocovariance(&g, t, true, 1e-12).unwrap();
        let mut spectrum: Vec<f64> = common::to_na(&r.matrix).symmetric_eigen().eigenvalues.iter().copied().collect();
        spectrum.sort_by(|a, b| b.abs().total_cmp(&a.abs()));
        for k in 1..=9 {
            let e = factorize(&r, k).unwrap();
            let diff = common::to_na(&reconstruction(&e)) - common::to_na(&r.matrix);
            let err = diff.norm_squared();
            let discarded: f64 = spectrum[k..].iter().map(|l| l * l).sum();
            assert!((err - discarded).abs() <= 1e-8, "seed {seed} k {k}: {err:e} vs {discarded:e}");
        }
    }
}

#[test]
fn autocovariance_matches_dense_formula() {
    for seed in 0..10u64 {
        let g = common::random_graph(seed, 12, 0.3, 0.4);
        for signed in [true, false] {
            let r = autocovariance(&g, 2.0, signed, 1e-12).unwrap();
            let reference = common::reference_autocovariance(&g, 2.0, signed);
            let diff = (common::to_na(&r.matrix) - reference).amax();
            assert!(diff < 1e-10, "{diff:e}");
        }
    }
}
