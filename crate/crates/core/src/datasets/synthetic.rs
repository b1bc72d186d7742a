use nalgebra::DMatrix;

use crate::dataset::{MultiviewDataset, ViewMatrix};
use crate::error::{MvError, Result};
use crate::random::{gaussian_matrix, orthonormal_matrix, seeded, Rng};
use crate::scalar::Real;

/// Latent factor model: `X_v = Z A_vᵀ + ε_v` with orthonormal `A_v`.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSpec {
    pub n_samples: usize,
    pub latent_dim: usize,
    pub view_dims: Vec<usize>,
    pub noise_sigma: f64,
    /// 0 draws a standard normal latent; otherwise a spherical mixture.
    pub n_clusters: usize,
    /// Minimum distance between mixture centers.
    pub separation: f64,
    pub seed: u64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        Self {
            n_samples: 100,
            latent_dim: 2,
            view_dims: vec![5, 5],
            noise_sigma: 0.1,
            n_clusters: 0,
            separation: 8.0,
            seed: 0,
        }
    }
}

impl SyntheticSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(MvError::BadSpec(m));
        if self.n_samples == 0 || self.latent_dim == 0 {
            return bad("n_samples and latent_dim must be positive".into());
        }
        let Some(&dmin) = self.view_dims.iter().min() else {
            return bad("view_dims is empty".into());
        };
        if self.latent_dim > dmin {
            return bad(format!("latent_dim {} exceeds the narrowest view ({dmin})", self.latent_dim));
        }
        if !self.noise_sigma.is_finite() || self.noise_sigma < 0.0 {
            return bad(format!("noise_sigma must be finite and >= 0, got {}", self.noise_sigma));
        }
        if self.n_clusters > 0 {
            if !(self.separation.is_finite() && self.separation > 0.0) {
                return bad(format!("separation must be positive, got {}", self.separation));
            }
            if self.n_clusters > self.n_samples {
                return bad(format!("{} clusters for {} samples", self.n_clusters, self.n_samples));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SyntheticData<T: Real> {
    /// Views, with labels attached when clustered.
    pub dataset: MultiviewDataset<T>,
    pub latent: DMatrix<T>,
    pub labels: Option<Vec<usize>>,
    /// Per view, `d_v × latent_dim` with orthonormal columns.
    pub loadings: Vec<DMatrix<T>>,
}

/// Cluster centers (rows) with minimum pairwise distance `sep`.
fn centers(rng: &mut Rng, k: usize, dim: usize, sep: f64) -> DMatrix<f64> {
    if k == 1 {
        return DMatrix::zeros(1, dim);
    }
    if k <= dim {
        // scaled orthonormal directions are pairwise exactly `sep` apart
        let q: DMatrix<f64> = orthonormal_matrix(rng, dim, k);
        return q.transpose() * (sep / 2f64.sqrt());
    }
    let c: DMatrix<f64> = gaussian_matrix(rng, k, dim, 1.0);
    let mut dmin = f64::INFINITY;
    for i in 0..k {
        for j in 0..i {
            dmin = dmin.min((c.row(i) - c.row(j)).norm());
        }
    }
    c * (sep / dmin)
}

pub fn make_latent_views<T: Real>(spec: &SyntheticSpec) -> Result<SyntheticData<T>> {
    spec.validate()?;
    let mut rng = seeded(spec.seed);
    let (n, r) = (spec.n_samples, spec.latent_dim);
    let mut latent: DMatrix<f64> = gaussian_matrix(&mut rng, n, r, 1.0);
    let labels = if spec.n_clusters > 0 {
        let k = spec.n_clusters;
        let c = centers(&mut rng, k, r, spec.separation);
        let y: Vec<usize> = (0..n).map(|i| i % k).collect();
        for i in 0..n {
            let mut row = latent.row_mut(i);
            row += c.row(y[i]);
        }
        Some(y)
    } else {
        None
    };
    let latent: DMatrix<T> = latent.map(T::lit);
    let mut views = Vec::new();
    let mut loadings = Vec::new();
    for &d in &spec.view_dims {
        let a: DMatrix<T> = orthonormal_matrix(&mut rng, d, r);
        let noise: DMatrix<T> = gaussian_matrix(&mut rng, n, d, spec.noise_sigma);
        views.push(ViewMatrix::new(&latent * a.transpose() + noise));
        loadings.push(a);
    }
    let y = labels.as_ref().map(|l| l.iter().map(|&c| c as f64).collect());
    Ok(SyntheticData {
        dataset: MultiviewDataset::from_views(views, y)?,
        latent,
        labels,
        loadings,
    })
}
