use nalgebra::DMatrix;

use super::spectral::{affinity_matrix, check_finite, embed_and_cluster, normalized_affinity, spectral_embedding};
use super::{AffinityParams, ClusterParams, ClusterResult};
use crate::dataset::MultiviewDataset;
use crate::error::{MvError, Result};
use crate::scalar::Real;

/// `Σ_v tr(U_vᵀ L_v U_v) + λ Σ_{u<v} tr(U_u U_uᵀ U_v U_vᵀ)`.
pub fn coreg_objective<T: Real>(ls: &[DMatrix<T>], us: &[DMatrix<T>], lambda: T) -> T {
    let mut obj = T::zero();
    for (l, u) in ls.iter().zip(us) {
        obj += (u.transpose() * l * u).trace();
    }
    for a in 0..us.len() {
        for b in (a + 1)..us.len() {
            // tr(P_a P_b) = |U_aᵀ U_b|_F²
            obj += lambda * us[a].tr_mul(&us[b]).norm_squared();
        }
    }
    obj
}

/// Co-regularized multiview spectral clustering (pairwise agreement).
///
/// Alternately sets each `U_v` to the top eigenvectors of
/// `L_v + λ Σ_{u≠v} U_u U_uᵀ`, an exact maximization of the objective in that
/// block, until a full sweep gains less than `tol` or `max_iter` sweeps run.
/// Labels come from k-means on the row-normalized embedding of view 0.
pub fn coreg_spectral_fit_predict<T: Real>(
    ds: &MultiviewDataset<T>,
    params: &ClusterParams<T>,
    affinity: &AffinityParams<T>,
) -> Result<ClusterResult<T>> {
    ds.require_min_views(2)?;
    let n = ds.n_samples();
    params.validate(n)?;
    affinity.validate(n)?;
    if n < params.n_clusters + 1 {
        return Err(MvError::TooFewSamples {
            needed: params.n_clusters + 1,
            got: n,
        });
    }
    let kc = params.n_clusters;
    let lambda = affinity.coupling;
    let ls: Vec<DMatrix<T>> = ds
        .views()
        .map(|x| normalized_affinity(&affinity_matrix(x, &affinity.kind)))
        .collect();
    let mut us: Vec<DMatrix<T>> = ls.iter().map(|l| spectral_embedding(l, kc)).collect();
    let mut trace = vec![coreg_objective(&ls, &us, lambda)];
    let mut converged = false;
    let mut sweeps = 0;
    if lambda > T::zero() {
        while sweeps < params.max_iter {
            sweeps += 1;
            for v in 0..us.len() {
                let mut m = ls[v].clone();
                for (u, basis) in us.iter().enumerate() {
                    if u != v {
                        m += basis * basis.transpose() * lambda;
                    }
                }
                us[v] = spectral_embedding(&m, kc);
            }
            let obj = coreg_objective(&ls, &us, lambda);
            let gain = obj - *trace.last().expect("trace starts non-empty");
            trace.push(obj);
            if gain < params.tol {
                converged = true;
                break;
            }
        }
    } else {
        // no coupling: the independent embeddings are already optimal
        converged = true;
    }
    for u in &us {
        check_finite(u, "co-regularized embedding")?;
    }
    let (labels, _, n_iter, _) = embed_and_cluster(&us[0], params);
    Ok(ClusterResult {
        labels,
        centroids: Vec::new(),
        spectral_bases: us,
        n_iter: sweeps.max(n_iter),
        objective: *trace.last().expect("non-empty"),
        converged,
        objective_trace: trace,
        restart_objectives: Vec::new(),
    })
}
