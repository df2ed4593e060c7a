mod common;

use lpmetis::graph::{generate, GeneratorSpec, Model};
use lpmetis::metrics::{spectral_norm, spectral_submatrix_check};
use nalgebra::DMatrix;

#[test]
fn power_iteration_matches_symmetric_eigensolver() {
    for seed in 0..20u64 {
        let (n, edges, _) = common::instance(seed, 48, true);
        let mut dense = vec![0.0; n * n];
        for (&(a, b), &w) in &edges {
            dense[a * n + b] = w;
            dense[b * n + a] = w;
        }
        let eig = DMatrix::from_row_slice(n, n, &dense).symmetric_eigen();
        let want = eig.eigenvalues.iter().fold(0.0f64, |m, l| m.max(l.abs()));
        let got = spectral_norm(&dense, n);
        assert!((got - want).abs() <= 1e-8 * want.max(1.0), "seed {seed}: {got} vs {want}");
    }
}

#[test]
fn principal_submatrices_never_exceed_full_norm() {
    let g = generate(&GeneratorSpec {
        model: Model::RandomWeighted { n: 64, m: 512, low: 0.1, high: 1.0 },
        seed: 42,
    })
    .unwrap()
    .graph;
    let r = spectral_submatrix_check(&g, 100, 42).unwrap();
    assert_eq!(r.trials, 100);
    assert!(r.passed, "{r:?}");
    assert!(r.max_ratio <= 1.0 + 1e-9);
}
