//! Multiview clustering.
//!
//! - [`mv_kmeans_fit_predict`] / [`mv_spherical_kmeans_fit_predict`]: two-view
//!   co-EM k-means, Euclidean and cosine.
//! - [`mv_spectral_fit_predict`]: co-trained spectral clustering.
//! - [`coreg_spectral_fit_predict`]: co-regularized spectral clustering.
//!
//! Labels are only meaningful up to permutation; compare runs with the
//! adjusted Rand index.

mod coreg;
mod kmeans;
mod mvkmeans;
mod spectral;

pub use coreg::{coreg_objective, coreg_spectral_fit_predict};
pub use kmeans::{kmeans, KMeansFit, Metric};
pub use mvkmeans::{mv_kmeans_fit_predict, mv_spherical_kmeans_fit_predict};
pub use spectral::{
    affinity_matrix, mv_spectral_fit_predict, normalized_affinity, spectral_clustering, spectral_embedding,
    Affinity, AffinityParams, Gamma,
};

use nalgebra::DMatrix;

use crate::error::{MvError, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusterParams<T: Real> {
    pub n_clusters: usize,
    pub max_iter: usize,
    pub tol: T,
    /// Restarts; the best final objective wins.
    pub n_init: usize,
    pub seed: u64,
}

impl<T: Real> ClusterParams<T> {
    pub fn new(n_clusters: usize) -> Self {
        Self {
            n_clusters,
            max_iter: 100,
            tol: T::lit(1e-6),
            n_init: 5,
            seed: 0,
        }
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn n_init(mut self, n_init: usize) -> Self {
        self.n_init = n_init;
        self
    }

    pub fn max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub(crate) fn validate(&self, n_samples: usize) -> Result<()> {
        if self.n_clusters == 0 || self.n_clusters > n_samples {
            return Err(MvError::BadParams(format!(
                "n_clusters {} must lie in [1, {n_samples}]",
                self.n_clusters
            )));
        }
        if self.n_init == 0 || self.max_iter == 0 {
            return Err(MvError::BadParams("n_init and max_iter must be positive".into()));
        }
        if !(self.tol >= T::zero()) {
            return Err(MvError::BadParams("tol must be non-negative".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterResult<T: Real> {
    /// Cluster id per sample, each `< n_clusters`.
    pub labels: Vec<usize>,
    /// Per-view centroids (`n_clusters × d_v`) for the k-means variants.
    pub centroids: Vec<DMatrix<T>>,
    /// Per-view spectral embeddings (`n × n_clusters`) for the spectral variants.
    pub spectral_bases: Vec<DMatrix<T>>,
    pub n_iter: usize,
    pub objective: T,
    pub converged: bool,
    /// Objective after initialization and after every alternating sweep
    /// (co-regularized spectral only).
    pub objective_trace: Vec<T>,
    /// Final objective of every restart (k-means variants only).
    pub restart_objectives: Vec<T>,
}
