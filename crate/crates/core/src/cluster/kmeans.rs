use nalgebra::DMatrix;
use rand::RngExt;

use crate::random::Rng;
use crate::scalar::Real;

/// Point-to-centroid dissimilarity used by the k-means routines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    SquaredEuclidean,
    /// `1 - cos`; rows and centroids are kept at unit norm.
    Cosine,
}

impl Metric {
    pub(crate) fn dist<T: Real>(self, x: &DMatrix<T>, i: usize, c: &DMatrix<T>, k: usize) -> T {
        match self {
            Metric::SquaredEuclidean => {
                let mut acc = T::zero();
                for j in 0..x.ncols() {
                    let d = x[(i, j)] - c[(k, j)];
                    acc += d * d;
                }
                acc
            }
            Metric::Cosine => {
                let mut dot = T::zero();
                for j in 0..x.ncols() {
                    dot += x[(i, j)] * c[(k, j)];
                }
                T::one() - dot
            }
        }
    }

    /// Mean dissimilarity over all sample pairs.
    pub(crate) fn mean_pairwise<T: Real>(self, x: &DMatrix<T>) -> T {
        let n = x.nrows();
        let mut acc = T::zero();
        for i in 0..n {
            for j in (i + 1)..n {
                acc += self.dist(x, i, x, j);
            }
        }
        let pairs = n * (n - 1) / 2;
        if pairs == 0 {
            T::one()
        } else {
            acc / T::from_count(pairs)
        }
    }
}

/// k-means++ seeding: first center uniform, then proportional to the
/// dissimilarity to the nearest chosen center.
pub(crate) fn kmeans_plus_plus<T: Real>(x: &DMatrix<T>, k: usize, metric: Metric, rng: &mut Rng) -> DMatrix<T> {
    let n = x.nrows();
    let mut centers = DMatrix::zeros(k, x.ncols());
    let first = rng.random_range(0..n);
    centers.set_row(0, &x.row(first));
    let mut nearest: Vec<f64> = (0..n).map(|i| metric.dist(x, i, &centers, 0).as_f64().max(0.0)).collect();
    for c in 1..k {
        let total: f64 = nearest.iter().sum();
        let pick = if total > 0.0 {
            let target = rng.random::<f64>() * total;
            let mut acc = 0.0;
            let mut chosen = n - 1;
            for (i, &d) in nearest.iter().enumerate() {
                acc += d;
                if acc > target {
                    chosen = i;
                    break;
                }
            }
            chosen
        } else {
            rng.random_range(0..n)
        };
        centers.set_row(c, &x.row(pick));
        for (i, near) in nearest.iter_mut().enumerate() {
            let d = metric.dist(x, i, &centers, c).as_f64().max(0.0);
            if d < *near {
                *near = d;
            }
        }
    }
    centers
}

/// Nearest-centroid assignment; ties go to the lower cluster id.
pub(crate) fn assign<T: Real>(x: &DMatrix<T>, centers: &DMatrix<T>, metric: Metric) -> (Vec<usize>, Vec<T>) {
    let mut labels = Vec::with_capacity(x.nrows());
    let mut dists = Vec::with_capacity(x.nrows());
    for i in 0..x.nrows() {
        let mut best = 0;
        let mut best_d = metric.dist(x, i, centers, 0);
        for k in 1..centers.nrows() {
            let d = metric.dist(x, i, centers, k);
            if d < best_d {
                best = k;
                best_d = d;
            }
        }
        labels.push(best);
        dists.push(best_d);
    }
    (labels, dists)
}

/// Recomputes centroids from labels. An empty cluster takes the sample that is
/// worst served by `fallback` (its previous centers).
pub(crate) fn update_centers<T: Real>(
    x: &DMatrix<T>,
    labels: &[usize],
    k: usize,
    metric: Metric,
    fallback: Option<&DMatrix<T>>,
) -> DMatrix<T> {
    let d = x.ncols();
    let mut sums = DMatrix::zeros(k, d);
    let mut counts = vec![0usize; k];
    for (i, &l) in labels.iter().enumerate() {
        counts[l] += 1;
        let mut row = sums.row_mut(l);
        row += x.row(i);
    }
    let mut taken = vec![false; x.nrows()];
    for c in 0..k {
        if counts[c] > 0 {
            let inv = T::one() / T::from_count(counts[c]);
            let mut row = sums.row_mut(c);
            row *= inv;
            if metric == Metric::Cosine {
                let nrm = row.norm();
                if nrm > T::zero() {
                    row /= nrm;
                    continue;
                }
            } else {
                continue;
            }
        }
        // empty (or zero-mean spherical) cluster: take the worst-served sample
        let mut worst = None;
        let mut worst_d = -T::one();
        for i in 0..x.nrows() {
            if taken[i] {
                continue;
            }
            let di = match fallback {
                Some(f) => {
                    let l = labels[i];
                    metric.dist(x, i, f, l)
                }
                None => T::zero(),
            };
            if di > worst_d {
                worst_d = di;
                worst = Some(i);
            }
        }
        if let Some(i) = worst {
            taken[i] = true;
            sums.set_row(c, &x.row(i));
        }
    }
    sums
}

#[derive(Debug, Clone, PartialEq)]
pub struct KMeansFit<T: Real> {
    pub labels: Vec<usize>,
    pub centers: DMatrix<T>,
    pub inertia: T,
    pub n_iter: usize,
    pub converged: bool,
}

/// Lloyd's k-means with k-means++ seeding and `n_init` restarts.
///
/// A restart stops when assignments no longer change or the largest centroid
/// move is at most `tol`. The restart with the lowest inertia wins; ties keep
/// the earlier restart.
pub fn kmeans<T: Real>(
    x: &DMatrix<T>,
    k: usize,
    n_init: usize,
    max_iter: usize,
    tol: T,
    metric: Metric,
    rng: &mut Rng,
) -> KMeansFit<T> {
    let mut best: Option<KMeansFit<T>> = None;
    for _ in 0..n_init.max(1) {
        let mut centers = kmeans_plus_plus(x, k, metric, rng);
        let (mut labels, _) = assign(x, &centers, metric);
        let mut converged = false;
        let mut it = 0;
        while it < max_iter {
            it += 1;
            let next = update_centers(x, &labels, k, metric, Some(&centers));
            let shift = (&next - &centers).amax();
            centers = next;
            let (new_labels, _) = assign(x, &centers, metric);
            let same = new_labels == labels;
            labels = new_labels;
            if same || shift <= tol {
                converged = true;
                break;
            }
        }
        let (labels, dists) = assign(x, &centers, metric);
        let inertia = dists.iter().fold(T::zero(), |a, &b| a + b);
        let fit = KMeansFit {
            labels,
            centers,
            inertia,
            n_iter: it,
            converged,
        };
        if best.as_ref().is_none_or(|b| fit.inertia < b.inertia) {
            best = Some(fit);
        }
    }
    best.expect("at least one restart")
}
