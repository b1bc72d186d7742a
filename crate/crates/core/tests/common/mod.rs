//! Generators and reference implementations shared by the integration tests.
#![allow(dead_code)]

use mvkit::random::{gaussian_matrix, orthonormal_matrix, seeded, standard_normal, Rng};
use mvkit::{MultiviewDataset, ViewMatrix};
use nalgebra::{DMatrix, DVector};
use rand::RngExt;

pub fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

pub fn dataset(views: Vec<DMatrix<f64>>, labels: Option<Vec<f64>>) -> MultiviewDataset<f64> {
    MultiviewDataset::from_views(views.into_iter().map(ViewMatrix::new).collect(), labels).unwrap()
}

pub fn centered(x: &DMatrix<f64>) -> DMatrix<f64> {
    let mut c = x.clone();
    for mut col in c.column_iter_mut() {
        let m = col.mean();
        col.add_scalar_mut(-m);
    }
    c
}

/// Canonical correlations from the generalized eigenproblem
/// `C12 C22⁻¹ C21 w = ρ² C11 w`, reduced with a Cholesky factor of `C11`.
pub fn cca_oracle(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Vec<f64> {
    let (ca, cb) = (centered(a), centered(b));
    let c11 = ca.tr_mul(&ca);
    let c22 = cb.tr_mul(&cb);
    let c12 = ca.tr_mul(&cb);
    let l = c11.cholesky().unwrap().l();
    let linv = l.clone().try_inverse().unwrap();
    let m = &linv * &c12 * c22.try_inverse().unwrap() * c12.transpose() * linv.transpose();
    let m = (&m + m.transpose()) * 0.5;
    let mut rho: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().map(|v| v.max(0.0).sqrt()).collect();
    rho.sort_by(|x, y| y.partial_cmp(x).unwrap());
    rho
}

/// Plain Lloyd k-means with farthest-point initialization from row 0.
pub fn lloyd(x: &DMatrix<f64>, k: usize) -> Vec<usize> {
    let n = x.nrows();
    let mut centers = vec![x.row(0).into_owned()];
    while centers.len() < k {
        let far = (0..n)
            .max_by(|&i, &j| {
                let di = centers.iter().map(|c| (x.row(i) - c).norm_squared()).fold(f64::INFINITY, f64::min);
                let dj = centers.iter().map(|c| (x.row(j) - c).norm_squared()).fold(f64::INFINITY, f64::min);
                di.partial_cmp(&dj).unwrap()
            })
            .unwrap();
        centers.push(x.row(far).into_owned());
    }
    let mut labels = vec![0; n];
    for _ in 0..100 {
        let next: Vec<usize> = (0..n)
            .map(|i| {
                (0..k)
                    .min_by(|&a, &b| {
                        (x.row(i) - &centers[a])
                            .norm_squared()
                            .partial_cmp(&(x.row(i) - &centers[b]).norm_squared())
                            .unwrap()
                    })
                    .unwrap()
            })
            .collect();
        for (c, center) in centers.iter_mut().enumerate() {
            let members: Vec<usize> = (0..n).filter(|&i| next[i] == c).collect();
            if !members.is_empty() {
                *center = members.iter().fold(center.clone() * 0.0, |acc, &i| acc + x.row(i)) / members.len() as f64;
            }
        }
        if next == labels {
            break;
        }
        labels = next;
    }
    labels
}

/// Normalized spectral clustering: median-heuristic RBF with zero diagonal,
/// top eigenvectors of `D^{-1/2} W D^{-1/2}`, row normalization, Lloyd.
pub fn spectral_oracle(x: &DMatrix<f64>, k: usize) -> Vec<usize> {
    let n = x.nrows();
    let d2 = DMatrix::from_fn(n, n, |i, j| (x.row(i) - x.row(j)).norm_squared());
    let mut upper: Vec<f64> = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).map(|(i, j)| d2[(i, j)]).collect();
    let med = median(std::mem::take(&mut upper));
    let w = DMatrix::from_fn(n, n, |i, j| if i == j { 0.0 } else { (-d2[(i, j)] / med).exp() });
    let deg: Vec<f64> = (0..n).map(|i| w.row(i).sum()).collect();
    let l = DMatrix::from_fn(n, n, |i, j| w[(i, j)] / (deg[i] * deg[j]).sqrt());
    let eig = l.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].partial_cmp(&eig.eigenvalues[a]).unwrap());
    let mut u = DMatrix::from_fn(n, k, |i, c| eig.eigenvectors[(i, order[c])]);
    for mut row in u.row_iter_mut() {
        let nr = row.norm();
        row /= nr;
    }
    lloyd(&u, k)
}

/// Rows of `x` scaled to unit Euclidean norm.
pub fn unit_rows(x: &DMatrix<f64>) -> DMatrix<f64> {
    let mut out = x.clone();
    for mut row in out.row_iter_mut() {
        let nr = row.norm();
        row /= nr;
    }
    out
}

/// `n × d` view of three Gaussian blobs around orthogonal directions that
/// sit `sep` apart, noise `sigma`.
pub fn blobs_view(rng: &mut Rng, y: &[usize], d: usize, sep: f64, sigma: f64) -> DMatrix<f64> {
    let c: DMatrix<f64> = orthonormal_matrix(rng, d, 3);
    let mut x: DMatrix<f64> = gaussian_matrix(rng, y.len(), d, sigma);
    for i in 0..y.len() {
        let mut r = x.row_mut(i);
        r += c.column(y[i]).transpose() * (sep / 2f64.sqrt());
    }
    x
}

/// Two concentric circles (radii 1 and 3) in view 1; the same labels
/// shifted ±3 along one axis of a 2-D Gaussian in view 2.
pub fn circles_and_line(seed: u64, n: usize) -> (MultiviewDataset<f64>, Vec<usize>) {
    let mut rng = seeded(seed);
    let y: Vec<usize> = (0..n).map(|i| i % 2).collect();
    let mut a = DMatrix::zeros(n, 2);
    let mut b: DMatrix<f64> = gaussian_matrix(&mut rng, n, 2, 1.0);
    for i in 0..n {
        let t: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        let r = if y[i] == 0 { 1.0 } else { 3.0 };
        a[(i, 0)] = r * t.cos() + 0.1 * standard_normal(&mut rng);
        a[(i, 1)] = r * t.sin() + 0.1 * standard_normal(&mut rng);
        b[(i, 0)] += if y[i] == 0 { -3.0 } else { 3.0 };
    }
    (dataset(vec![a, b], None), y)
}

/// Two views that are each sufficient for a balanced binary label and
/// independent given it: `x_v = ±μ e_1 + N(0, I_d)`.
pub fn conditionally_independent(n: usize, seed: u64, mu: f64, d: usize) -> (DMatrix<f64>, DMatrix<f64>, Vec<f64>) {
    let mut rng = seeded(seed);
    let y: Vec<f64> = (0..n).map(|i| (i % 2) as f64).collect();
    let mut a: DMatrix<f64> = gaussian_matrix(&mut rng, n, d, 1.0);
    let mut b: DMatrix<f64> = gaussian_matrix(&mut rng, n, d, 1.0);
    for i in 0..n {
        let s = if y[i] == 1.0 { mu } else { -mu };
        a[(i, 0)] += s;
        b[(i, 0)] += s;
    }
    (a, b, y)
}

/// `n × c` matrix of unit-variance Laplace draws.
pub fn laplace(rng: &mut Rng, n: usize, c: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, c, |_, _| {
        let u: f64 = rng.random_range(-0.5..0.5);
        -u.signum() * (1.0 - 2.0 * u.abs()).ln() / 2f64.sqrt()
    })
}

/// Two views sharing a rank-2 joint signal, each with a rank-1 individual
/// signal, plus Gaussian noise.
pub fn joint_individual(seed: u64, n: usize, sigma: f64) -> MultiviewDataset<f64> {
    let mut rng = seeded(seed);
    let z: DMatrix<f64> = gaussian_matrix(&mut rng, n, 2, 1.0);
    let mut views = Vec::new();
    for d in [30usize, 40] {
        let a: DMatrix<f64> = orthonormal_matrix(&mut rng, d, 2);
        let w: DMatrix<f64> = gaussian_matrix(&mut rng, n, 1, 1.0);
        let b: DMatrix<f64> = orthonormal_matrix(&mut rng, d, 1);
        let e: DMatrix<f64> = gaussian_matrix(&mut rng, n, d, sigma);
        views.push(&z * a.transpose() * 3.0 + &w * b.transpose() * 2.0 + e);
    }
    dataset(views, None)
}

pub fn column(v: &[f64]) -> DMatrix<f64> {
    DMatrix::from_column_slice(v.len(), 1, v)
}

pub fn dvec(v: &[f64]) -> DVector<f64> {
    DVector::from_column_slice(v)
}
