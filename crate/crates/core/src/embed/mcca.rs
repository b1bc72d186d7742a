use nalgebra::{DMatrix, DVector};

use super::cca::CcaModel;
use crate::dataset::MultiviewDataset;
use crate::error::{MvError, Result};
use crate::estimator::Fit;
use crate::linalg::{apply_column_signs, center_columns, cross_cov, fix_column_signs, pinv_psd, pinv_sqrt_psd, svd};
use crate::scalar::Real;

/// Multiview CCA maximizing the sum of pairwise correlations (SUMCOR).
///
/// Each component is found by Horst iteration: every view's weight is
/// re-solved against the others in turn until the largest weight change drops
/// below `tol`. Later components come from deflating each view against its
/// own scores. A run that hits `max_iter` returns a model with
/// `converged = false`.
#[derive(Debug, Clone)]
pub struct Mcca<T: Real> {
    pub n_components: usize,
    /// One entry per view, or a single entry shared by all views.
    pub regularization: Vec<T>,
    pub tol: T,
    pub max_iter: usize,
}

impl<T: Real> Mcca<T> {
    pub fn new(n_components: usize) -> Self {
        Self {
            n_components,
            regularization: vec![T::zero()],
            tol: T::lit(1e-6),
            max_iter: 500,
        }
    }

    pub fn regularization(mut self, lambda: T) -> Self {
        self.regularization = vec![lambda];
        self
    }

    pub fn per_view_regularization(mut self, lambdas: Vec<T>) -> Self {
        self.regularization = lambdas;
        self
    }

    pub fn tol(mut self, tol: T) -> Self {
        self.tol = tol;
        self
    }

    pub fn max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    fn lambdas(&self, k: usize) -> Result<Vec<T>> {
        let l = match self.regularization.len() {
            0 => vec![T::zero(); k],
            1 => vec![self.regularization[0]; k],
            m if m == k => self.regularization.clone(),
            m => {
                return Err(MvError::BadParams(format!(
                    "{m} regularization values for {k} views"
                )))
            }
        };
        if l.iter().any(|&x| x < T::zero()) {
            return Err(MvError::BadParams("regularization must be non-negative".into()));
        }
        Ok(l)
    }
}

impl<T: Real> Fit<T> for Mcca<T> {
    type Model = CcaModel<T>;

    fn fit(&self, ds: &MultiviewDataset<T>) -> Result<CcaModel<T>> {
        ds.require_min_views(2)?;
        let k = ds.n_views();
        let n = ds.n_samples();
        let r = self.n_components;
        let max_r = ds.widths().into_iter().min().unwrap_or(0).min(n.saturating_sub(1));
        if r == 0 || r > max_r {
            return Err(MvError::Rank(format!(
                "n_components {r} must lie in [1, min(d_v, n - 1) = {max_r}]"
            )));
        }
        let lambdas = self.lambdas(k)?;

        let mut xs = Vec::with_capacity(k);
        let mut means = Vec::with_capacity(k);
        for x in ds.views() {
            let (xc, m) = center_columns(x);
            xs.push(xc);
            means.push(m);
        }
        // cumulative deflation maps: deflated view = original centered view · q
        let mut qs: Vec<DMatrix<T>> = xs.iter().map(|x| DMatrix::identity(x.ncols(), x.ncols())).collect();
        let mut weights: Vec<DMatrix<T>> = xs.iter().map(|x| DMatrix::zeros(x.ncols(), r)).collect();
        let mut corrs = Vec::with_capacity(r);
        let mut converged = true;
        let mut total_iter = 0;

        for comp in 0..r {
            let cov: Vec<Vec<DMatrix<T>>> = (0..k)
                .map(|v| (0..k).map(|u| cross_cov(&xs[v], &xs[u])).collect())
                .collect();
            let metric: Vec<DMatrix<T>> = (0..k)
                .map(|v| {
                    let d = xs[v].ncols();
                    &cov[v][v] + DMatrix::identity(d, d) * lambdas[v]
                })
                .collect();
            let metric_inv: Vec<DMatrix<T>> = metric.iter().map(pinv_psd).collect();

            let mut w = maxvar_start(&xs, &metric)?;
            let normalize = |w: DVector<T>, v: usize| -> DVector<T> {
                let s = w.dot(&(&metric[v] * &w));
                if s > T::zero() {
                    w / s.sqrt()
                } else {
                    w
                }
            };
            let mut done = false;
            let mut it = 0;
            while it < self.max_iter {
                it += 1;
                let mut change = T::zero();
                for v in 0..k {
                    let mut target = DVector::zeros(xs[v].ncols());
                    for u in (0..k).filter(|&u| u != v) {
                        target += &cov[v][u] * &w[u];
                    }
                    let next = normalize(&metric_inv[v] * target, v);
                    change = change.max((&next - &w[v]).amax());
                    w[v] = next;
                }
                if change < self.tol {
                    done = true;
                    break;
                }
            }
            total_iter += it;
            converged &= done;

            let mut corr = T::zero();
            let mut pairs = 0;
            for v in 0..k {
                for u in (v + 1)..k {
                    corr += w[v].dot(&(&cov[v][u] * &w[u]));
                    pairs += 1;
                }
            }
            corrs.push(corr / T::from_count(pairs));

            for v in 0..k {
                weights[v].set_column(comp, &(&qs[v] * &w[v]));
                let t = &xs[v] * &w[v];
                let tt = t.norm_squared();
                if tt <= T::zero() {
                    continue;
                }
                let p = xs[v].tr_mul(&t) / tt;
                xs[v] -= &t * p.transpose();
                let d = xs[v].ncols();
                qs[v] = &qs[v] * (DMatrix::identity(d, d) - &w[v] * p.transpose());
            }
        }

        // order components by correlation, then fix signs on view 0
        let mut order: Vec<usize> = (0..r).collect();
        order.sort_by(|&a, &b| corrs[b].partial_cmp(&corrs[a]).unwrap_or(std::cmp::Ordering::Equal));
        let mut weights: Vec<DMatrix<T>> = weights
            .iter()
            .map(|w| w.select_columns(order.iter()))
            .collect();
        let raw = DVector::from_iterator(r, order.iter().map(|&i| corrs[i]));
        let signs = fix_column_signs(&mut weights[0]);
        for w in weights.iter_mut().skip(1) {
            apply_column_signs(w, &signs);
        }
        Ok(CcaModel {
            weights,
            means,
            raw_correlations: raw,
            n_components: r,
            converged,
            n_iter: total_iter,
        })
    }
}

/// Starting weights from the leading right singular vector of the
/// concatenated whitened views.
fn maxvar_start<T: Real>(xs: &[DMatrix<T>], metric: &[DMatrix<T>]) -> Result<Vec<DVector<T>>> {
    let n = xs[0].nrows();
    let whiten: Vec<DMatrix<T>> = metric.iter().map(pinv_sqrt_psd).collect();
    let width: usize = xs.iter().map(|x| x.ncols()).sum();
    let mut stacked = DMatrix::zeros(n, width);
    let mut offset = 0;
    for (x, wh) in xs.iter().zip(&whiten) {
        stacked.columns_mut(offset, x.ncols()).copy_from(&(x * wh));
        offset += x.ncols();
    }
    let dec = svd(&stacked)?;
    let lead = dec.vt.row(0).transpose();
    let mut out = Vec::with_capacity(xs.len());
    let mut offset = 0;
    for (x, wh) in xs.iter().zip(&whiten) {
        let block = lead.rows(offset, x.ncols()).into_owned();
        out.push(wh * block);
        offset += x.ncols();
    }
    Ok(out)
}
