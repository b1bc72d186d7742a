mod common;

use common::{cca_oracle, centered, dataset};
use mvkit::embed::{
    classical_mds, mvmds_fit_transform, omnibus_fit_transform, omnibus_matrix, Cca, Distance, Gcca, GccaRanks, Kernel,
    KernelSpec, Kmcca, Mcca,
};
use mvkit::linalg::max_principal_angle;
use mvkit::random::{gaussian_matrix, orthonormal_matrix, seeded};
use mvkit::{Fit, Transform};
use nalgebra::DMatrix;
use proptest::prelude::*;

fn correlated_pair(seed: u64, n: usize, d1: usize, d2: usize) -> (DMatrix<f64>, DMatrix<f64>) {
    let mut rng = seeded(seed);
    let z: DMatrix<f64> = gaussian_matrix(&mut rng, n, 2, 1.0);
    let a = &z * gaussian_matrix::<f64>(&mut rng, 2, d1, 1.0) + gaussian_matrix::<f64>(&mut rng, n, d1, 0.7);
    let b = &z * gaussian_matrix::<f64>(&mut rng, 2, d2, 1.0) + gaussian_matrix::<f64>(&mut rng, n, d2, 0.7);
    (a, b)
}

#[test]
fn identical_views_give_unit_correlations() {
    let mut rng = seeded(11);
    let x: DMatrix<f64> = gaussian_matrix(&mut rng, 50, 3, 1.0);
    let m = Cca::new(3).fit(&dataset(vec![x.clone(), x], None)).unwrap();
    for r in m.correlations().iter() {
        assert!((r - 1.0).abs() < 1e-8, "{r}");
    }
}

#[test]
fn correlations_match_generalized_eigensolve() {
    for seed in 0..5 {
        let (a, b) = correlated_pair(seed, 80, 4, 3);
        let m = Cca::new(3).fit(&dataset(vec![a.clone(), b.clone()], None)).unwrap();
        let oracle = cca_oracle(&a, &b);
        for (got, want) in m.correlations().iter().zip(&oracle) {
            assert!((got - want).abs() < 1e-8, "seed {seed}: {got} vs {want}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn correlations_invariant_under_invertible_transform(seed in 0u64..10_000, entries in proptest::collection::vec(-2.0f64..2.0, 9)) {
        let t = DMatrix::from_row_slice(3, 3, &entries) + DMatrix::identity(3, 3) * 3.0;
        prop_assume!(t.determinant().abs() > 0.5);
        let (a, b) = correlated_pair(seed, 60, 4, 3);
        let base = Cca::new(3).fit(&dataset(vec![a.clone(), b.clone()], None)).unwrap();
        let moved = Cca::new(3).fit(&dataset(vec![a, &b * t], None)).unwrap();
        for (x, y) in base.correlations().iter().zip(moved.correlations().iter()) {
            prop_assert!((x - y).abs() < 1e-6);
        }
    }

    #[test]
    fn transform_is_idempotent_on_training_data(seed in 0u64..10_000) {
        let (a, b) = correlated_pair(seed, 40, 3, 3);
        let ds = dataset(vec![a, b], None);
        let m = Cca::new(2).fit(&ds).unwrap();
        prop_assert_eq!(m.transform(&ds).unwrap(), m.transform(&ds).unwrap());
    }
}

#[test]
fn family_agrees_on_two_views() {
    let (a, b) = correlated_pair(3, 100, 4, 5);
    let ds = dataset(vec![a.clone(), b.clone()], None);
    let cca = Cca::new(2).fit(&ds).unwrap();
    let mcca = Mcca::new(2).fit(&ds).unwrap();
    assert!((cca.correlations()[0] - mcca.correlations()[0]).abs() < 1e-6);
    let kmcca = Kmcca::new(2, KernelSpec::new(Kernel::Linear).regularization(0.0)).fit(&ds).unwrap();
    assert!((kmcca.correlations()[0] - mcca.correlations()[0]).abs() < 1e-5);
    for w in cca.correlations().as_slice().windows(2) {
        assert!(w[0] >= w[1]);
    }
}

#[test]
fn two_view_gcca_spans_summed_canonical_variates() {
    let (a, b) = correlated_pair(5, 90, 4, 3);
    let ds = dataset(vec![a, b], None);
    let r = 2;
    let gcca = Gcca::new(r).ranks(GccaRanks::Explicit(vec![4, 3])).fit(&ds).unwrap();
    let scores = Cca::new(r).fit(&ds).unwrap().transform(&ds).unwrap();
    let mut sum = DMatrix::zeros(90, r);
    for z in &scores {
        for c in 0..r {
            let col = z.column(c);
            let mut s = sum.column_mut(c);
            s += col / col.norm();
        }
    }
    assert!(max_principal_angle(&gcca.joint, &sum).unwrap() < 1e-6);
}

#[test]
fn mvmds_of_equal_views_is_classical_mds() {
    let mut rng = seeded(8);
    let x: DMatrix<f64> = gaussian_matrix(&mut rng, 30, 4, 1.0);
    let res = mvmds_fit_transform(&dataset(vec![x.clone(), x.clone(), x.clone()], None), 3).unwrap();
    let (mds, _) = classical_mds(&x, 3).unwrap();
    assert!(max_principal_angle(&res.components, &mds).unwrap() < 1e-8);
    let g = res.components.tr_mul(&res.components);
    assert!((g - DMatrix::identity(3, 3)).amax() < 1e-8);
}

#[test]
fn mvmds_of_rotated_views_matches_either_view() {
    let mut rng = seeded(9);
    let x: DMatrix<f64> = gaussian_matrix(&mut rng, 25, 3, 1.0);
    let q: DMatrix<f64> = orthonormal_matrix(&mut rng, 3, 3);
    let res = mvmds_fit_transform(&dataset(vec![x.clone(), &x * q], None), 2).unwrap();
    let (mds, _) = classical_mds(&x, 2).unwrap();
    assert!(max_principal_angle(&res.components, &mds).unwrap() < 1e-8);
}

#[test]
fn omnibus_identical_views_share_blocks() {
    let mut rng = seeded(10);
    let x: DMatrix<f64> = gaussian_matrix(&mut rng, 12, 3, 1.0);
    let res = omnibus_fit_transform(&dataset(vec![x.clone(), x.clone(), x], None), 2, Distance::Euclidean).unwrap();
    assert!((&res.embeddings[0] - &res.embeddings[1]).amax() < 1e-8);
    assert!((&res.embeddings[0] - &res.embeddings[2]).amax() < 1e-8);
}

#[test]
fn omnibus_matches_brute_force_truncation() {
    let mut rng = seeded(12);
    let a: DMatrix<f64> = gaussian_matrix(&mut rng, 4, 2, 1.0);
    let b: DMatrix<f64> = gaussian_matrix(&mut rng, 4, 3, 1.0);
    let ds = dataset(vec![a, b], None);
    let m = omnibus_matrix(&ds, Distance::Euclidean);
    assert_eq!(&m, &m.transpose());
    for d in 1..=3 {
        let res = omnibus_fit_transform(&ds, d, Distance::Euclidean).unwrap();
        let mut x = DMatrix::zeros(8, d);
        x.rows_mut(0, 4).copy_from(&res.embeddings[0]);
        x.rows_mut(4, 4).copy_from(&res.embeddings[1]);
        let signs = DMatrix::from_diagonal(&res.eigenvalues.map(|v: f64| v.signum()));
        let gram = &x * signs * x.transpose();

        let eig = m.clone().symmetric_eigen();
        let mut order: Vec<usize> = (0..8).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[j].abs().partial_cmp(&eig.eigenvalues[i].abs()).unwrap());
        let mut trunc = DMatrix::zeros(8, 8);
        for &i in order.iter().take(d) {
            let v = eig.eigenvectors.column(i);
            trunc += v * v.transpose() * eig.eigenvalues[i];
        }
        let got = (&m - gram).norm();
        let best = (&m - trunc).norm();
        assert!(got <= best + 1e-8, "d={d}: {got} vs {best}");
    }
}

#[test]
fn kmcca_transform_of_training_data_is_stable() {
    let (a, b) = correlated_pair(13, 40, 3, 4);
    let ds = dataset(vec![centered(&a), b], None);
    let m = Kmcca::new(2, KernelSpec::new(Kernel::Rbf { gamma: 0.2 })).fit(&ds).unwrap();
    assert_eq!(m.transform(&ds).unwrap(), m.transform(&ds).unwrap());
    for w in m.correlations().as_slice().windows(2) {
        assert!(w[0] >= w[1] - 1e-12);
    }
}
