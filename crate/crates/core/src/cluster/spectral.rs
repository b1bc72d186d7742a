use nalgebra::DMatrix;

use super::kmeans::{kmeans, Metric};
use super::{ClusterParams, ClusterResult};
use crate::dataset::MultiviewDataset;
use crate::error::{MvError, Result};
use crate::linalg::{fix_column_signs, normalize_rows, pairwise_sq_dists, sym_eigen};
use crate::random::seeded;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gamma<T: Real> {
    /// `1 / median` of the pairwise squared distances.
    Median,
    Value(T),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Affinity<T: Real> {
    Rbf(Gamma<T>),
    /// Symmetrized k-nearest-neighbor connectivity.
    Knn { n_neighbors: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffinityParams<T: Real> {
    pub kind: Affinity<T>,
    /// Co-regularization strength λ.
    pub coupling: T,
    /// Co-training rounds.
    pub info_iter: usize,
}

impl<T: Real> Default for AffinityParams<T> {
    fn default() -> Self {
        Self {
            kind: Affinity::Rbf(Gamma::Median),
            coupling: T::lit(0.5),
            info_iter: 10,
        }
    }
}

impl<T: Real> AffinityParams<T> {
    pub fn coupling(mut self, lambda: T) -> Self {
        self.coupling = lambda;
        self
    }

    pub fn info_iter(mut self, rounds: usize) -> Self {
        self.info_iter = rounds;
        self
    }

    pub(crate) fn validate(&self, n: usize) -> Result<()> {
        if !(self.coupling >= T::zero()) {
            return Err(MvError::BadParams("coupling must be non-negative".into()));
        }
        match self.kind {
            Affinity::Rbf(Gamma::Value(g)) if !(g > T::zero()) => {
                Err(MvError::BadParams("rbf gamma must be positive".into()))
            }
            Affinity::Knn { n_neighbors } if n_neighbors == 0 || n_neighbors >= n => Err(MvError::BadParams(
                format!("n_neighbors {n_neighbors} must lie in [1, {})", n),
            )),
            _ => Ok(()),
        }
    }
}

/// Symmetric non-negative affinity with a zero diagonal.
pub fn affinity_matrix<T: Real>(x: &DMatrix<T>, kind: &Affinity<T>) -> DMatrix<T> {
    let n = x.nrows();
    let d2 = pairwise_sq_dists(x);
    match *kind {
        Affinity::Rbf(g) => {
            let gamma = match g {
                Gamma::Value(v) => v,
                Gamma::Median => {
                    let mut upper: Vec<T> = Vec::with_capacity(n * (n - 1) / 2);
                    for i in 0..n {
                        for j in (i + 1)..n {
                            upper.push(d2[(i, j)]);
                        }
                    }
                    upper.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
                    let med = if upper.is_empty() {
                        T::one()
                    } else if upper.len() % 2 == 1 {
                        upper[upper.len() / 2]
                    } else {
                        (upper[upper.len() / 2 - 1] + upper[upper.len() / 2]) * T::lit(0.5)
                    };
                    if med > T::zero() {
                        T::one() / med
                    } else {
                        T::one()
                    }
                }
            };
            DMatrix::from_fn(n, n, |i, j| if i == j { T::zero() } else { (-gamma * d2[(i, j)]).exp() })
        }
        Affinity::Knn { n_neighbors } => {
            let mut w = DMatrix::zeros(n, n);
            for i in 0..n {
                let mut order: Vec<usize> = (0..n).filter(|&j| j != i).collect();
                order.sort_by(|&a, &b| {
                    d2[(i, a)]
                        .partial_cmp(&d2[(i, b)])
                        .unwrap_or(std::cmp::Ordering::Equal)
                        .then(a.cmp(&b))
                });
                for &j in order.iter().take(n_neighbors) {
                    w[(i, j)] = T::one();
                    w[(j, i)] = T::one();
                }
            }
            w
        }
    }
}

/// `D^{-1/2} W D^{-1/2}`. Degrees are floored at a tiny positive value.
pub fn normalized_affinity<T: Real>(w: &DMatrix<T>) -> DMatrix<T> {
    let n = w.nrows();
    let deg: Vec<T> = w.row_iter().map(|r| r.sum()).collect();
    let dmax = deg.iter().fold(T::zero(), |a, &b| a.max(b.abs()));
    let floor = (dmax * T::eps()).max(T::min_value().unwrap_or(T::eps()));
    let inv: Vec<T> = deg.iter().map(|&d| T::one() / d.max(floor).sqrt()).collect();
    DMatrix::from_fn(n, n, |i, j| w[(i, j)] * inv[i] * inv[j])
}

/// Top-`k` eigenvectors of a symmetric matrix, signs fixed.
pub fn spectral_embedding<T: Real>(l: &DMatrix<T>, k: usize) -> DMatrix<T> {
    let (_, vecs) = sym_eigen(l);
    let mut u = vecs.columns(0, k).into_owned();
    fix_column_signs(&mut u);
    u
}

pub(crate) fn check_finite<T: Real>(m: &DMatrix<T>, stage: &str) -> Result<()> {
    if m.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(MvError::numerical(stage, "eigensolver produced non-finite values"))
    }
}

/// Row-normalizes an embedding and clusters it with k-means.
pub(crate) fn embed_and_cluster<T: Real>(u: &DMatrix<T>, params: &ClusterParams<T>) -> (Vec<usize>, T, usize, bool) {
    let mut rng = seeded(params.seed);
    let rows = normalize_rows(u);
    let fit = kmeans(
        &rows,
        params.n_clusters,
        params.n_init,
        params.max_iter,
        params.tol,
        Metric::SquaredEuclidean,
        &mut rng,
    );
    (fit.labels, fit.inertia, fit.n_iter, fit.converged)
}

/// Single-view normalized spectral clustering.
pub fn spectral_clustering<T: Real>(
    x: &DMatrix<T>,
    params: &ClusterParams<T>,
    affinity: &AffinityParams<T>,
) -> Result<ClusterResult<T>> {
    let n = x.nrows();
    params.validate(n)?;
    affinity.validate(n)?;
    let l = normalized_affinity(&affinity_matrix(x, &affinity.kind));
    let u = spectral_embedding(&l, params.n_clusters);
    check_finite(&u, "spectral embedding")?;
    let (labels, objective, n_iter, converged) = embed_and_cluster(&u, params);
    Ok(ClusterResult {
        labels,
        centroids: Vec::new(),
        spectral_bases: vec![u],
        n_iter,
        objective,
        converged,
        objective_trace: Vec::new(),
        restart_objectives: Vec::new(),
    })
}

/// Top-`k` eigenvectors of `sym(P N)` with `P = U Uᵀ`.
fn project_embedding<T: Real>(n: &DMatrix<T>, u: &DMatrix<T>, k: usize) -> DMatrix<T> {
    let pn = u * u.tr_mul(n);
    let sym = (&pn + pn.transpose()) * T::lit(0.5);
    spectral_embedding(&sym, k)
}

/// Co-trained multiview spectral clustering.
///
/// Every round, view `v`'s normalized affinity `N_v = D^{-1/2} W_v D^{-1/2}`
/// is replaced by `sym(P_u N_v)` with `P_u = U_u U_uᵀ` taken from another
/// view's current embedding (cycling through the other views round by round),
/// and its embedding is recomputed. `N_v` itself stays fixed across rounds.
/// Labels come from k-means on the row-normalized concatenation of all
/// embeddings.
pub fn mv_spectral_fit_predict<T: Real>(
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
    let k = ds.n_views();
    let kc = params.n_clusters;
    let ws: Vec<DMatrix<T>> = ds.views().map(|x| affinity_matrix(x, &affinity.kind)).collect();
    let ns: Vec<DMatrix<T>> = ws.iter().map(normalized_affinity).collect();
    let mut us: Vec<DMatrix<T>> = ns.iter().map(|l| spectral_embedding(l, kc)).collect();
    for round in 0..affinity.info_iter {
        let next: Vec<DMatrix<T>> = (0..k)
            .map(|v| {
                let u = (v + 1 + round % (k - 1)) % k;
                project_embedding(&ns[v], &us[u], kc)
            })
            .collect();
        us = next;
    }
    let width = kc * k;
    let mut joint = DMatrix::zeros(n, width);
    for (v, u) in us.iter().enumerate() {
        check_finite(u, "co-trained spectral embedding")?;
        joint.columns_mut(v * kc, kc).copy_from(u);
    }
    let (labels, objective, n_iter, converged) = embed_and_cluster(&joint, params);
    Ok(ClusterResult {
        labels,
        centroids: Vec::new(),
        spectral_bases: us,
        n_iter,
        objective,
        converged,
        objective_trace: Vec::new(),
        restart_objectives: Vec::new(),
    })
}
