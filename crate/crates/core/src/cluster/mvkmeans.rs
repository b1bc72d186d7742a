use nalgebra::DMatrix;

use super::kmeans::{assign, kmeans_plus_plus, update_centers, Metric};
use super::{ClusterParams, ClusterResult};
use crate::dataset::MultiviewDataset;
use crate::error::{MvError, Result};
use crate::linalg::normalize_rows;
use crate::random::seeded;
use crate::scalar::Real;

/// Two-view co-EM k-means with squared Euclidean distance.
///
/// Centroids are seeded in the second view. Each half-iteration assigns
/// samples in one view and recomputes the other view's centroids from those
/// assignments. The final label of a sample minimizes the sum over views of its
/// distance to the cluster's centroid, each view's distances divided by that
/// view's mean pairwise distance.
pub fn mv_kmeans_fit_predict<T: Real>(
    ds: &MultiviewDataset<T>,
    params: &ClusterParams<T>,
) -> Result<ClusterResult<T>> {
    co_em(ds, params, Metric::SquaredEuclidean)
}

/// Spherical variant: rows and centroids live on the unit sphere and the
/// dissimilarity is `1 - cos`.
pub fn mv_spherical_kmeans_fit_predict<T: Real>(
    ds: &MultiviewDataset<T>,
    params: &ClusterParams<T>,
) -> Result<ClusterResult<T>> {
    co_em(ds, params, Metric::Cosine)
}

fn co_em<T: Real>(ds: &MultiviewDataset<T>, params: &ClusterParams<T>, metric: Metric) -> Result<ClusterResult<T>> {
    ds.require_views(2)?;
    let n = ds.n_samples();
    params.validate(n)?;
    let k = params.n_clusters;
    let views: Vec<DMatrix<T>> = match metric {
        Metric::SquaredEuclidean => ds.views().cloned().collect(),
        Metric::Cosine => {
            for (v, x) in ds.views().enumerate() {
                if let Some(row) = x.row_iter().position(|r| r.norm() <= T::zero()) {
                    return Err(MvError::ZeroRow { view: v, row });
                }
            }
            ds.views().map(normalize_rows).collect()
        }
    };
    let scales: Vec<T> = views
        .iter()
        .map(|x| {
            let s = metric.mean_pairwise(x);
            if s > T::zero() {
                s
            } else {
                T::one()
            }
        })
        .collect();

    let mut rng = seeded(params.seed);
    let mut best: Option<ClusterResult<T>> = None;
    let mut restart_objectives = Vec::with_capacity(params.n_init);
    for _ in 0..params.n_init {
        let mut centers = [DMatrix::zeros(k, views[0].ncols()), kmeans_plus_plus(&views[1], k, metric, &mut rng)];
        let mut first_pass = true;
        let mut prev: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
        let mut converged = false;
        let mut it = 0;
        while it < params.max_iter {
            it += 1;
            // E in view 2, M in view 1
            let (lab1, _) = assign(&views[1], &centers[1], metric);
            let fallback = if first_pass { None } else { Some(&centers[0]) };
            centers[0] = update_centers(&views[0], &lab1, k, metric, fallback);
            first_pass = false;
            // E in view 1, M in view 2
            let (lab0, _) = assign(&views[0], &centers[0], metric);
            centers[1] = update_centers(&views[1], &lab0, k, metric, Some(&centers[1]));
            let unchanged = lab0 == prev[0] && lab1 == prev[1];
            prev = [lab0, lab1];
            if unchanged {
                converged = true;
                break;
            }
        }
        let (labels, objective) = consensus(&views, &centers, &scales, metric);
        let run = ClusterResult {
            labels,
            centroids: centers.to_vec(),
            spectral_bases: Vec::new(),
            n_iter: it,
            objective,
            converged,
            objective_trace: Vec::new(),
            restart_objectives: Vec::new(),
        };
        restart_objectives.push(objective);
        if best.as_ref().is_none_or(|b| run.objective < b.objective) {
            best = Some(run);
        }
    }
    let mut best = best.expect("n_init >= 1");
    best.restart_objectives = restart_objectives;
    Ok(best)
}

/// Scale-normalized summed distances; returns labels and the total objective.
fn consensus<T: Real>(views: &[DMatrix<T>], centers: &[DMatrix<T>; 2], scales: &[T], metric: Metric) -> (Vec<usize>, T) {
    let n = views[0].nrows();
    let k = centers[0].nrows();
    let mut labels = Vec::with_capacity(n);
    let mut total = T::zero();
    for i in 0..n {
        let mut best = 0;
        let mut best_d = T::zero();
        for c in 0..k {
            let mut d = T::zero();
            for v in 0..2 {
                d += metric.dist(&views[v], i, &centers[v], c) / scales[v];
            }
            if c == 0 || d < best_d {
                best = c;
                best_d = d;
            }
        }
        labels.push(best);
        total += best_d;
    }
    (labels, total)
}
