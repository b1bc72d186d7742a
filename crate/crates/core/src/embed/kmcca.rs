use nalgebra::{DMatrix, DVector};

use super::kernel::{center_gram, KernelSpec};
use super::mean_pairwise_correlation;
use crate::dataset::MultiviewDataset;
use crate::error::{MvError, Result};
use crate::estimator::{Fit, Transform};
use crate::linalg::{apply_column_signs, fix_column_signs, psd_rtol, sym_eigen};
use crate::scalar::Real;

/// Kernel multiview CCA in the dual.
///
/// Solves `A α = ρ B α` where `A` holds the cross products `K_v K_u` off the
/// diagonal and `B` is block-diagonal with `(K_v + εI)²`. Each view's dual
/// weights are restricted to the range of its centered Gram matrix, which
/// keeps the problem well posed for singular Grams and turns `B` into a
/// diagonal that is inverted exactly.
#[derive(Debug, Clone)]
pub struct Kmcca<T: Real> {
    pub n_components: usize,
    pub kernel: KernelSpec<T>,
}

impl<T: Real> Kmcca<T> {
    pub fn new(n_components: usize, kernel: KernelSpec<T>) -> Self {
        Self {
            n_components,
            kernel,
        }
    }
}

#[derive(Debug, Clone)]
pub struct KmccaModel<T: Real> {
    pub kernel: KernelSpec<T>,
    /// Training views, kept for out-of-sample kernel evaluations.
    pub train_views: Vec<DMatrix<T>>,
    /// Per-view dual coefficients, `n × r`.
    pub dual_weights: Vec<DMatrix<T>>,
    /// Mean over training rows of each training Gram column.
    pub gram_col_means: Vec<DVector<T>>,
    pub gram_grand_means: Vec<T>,
    /// Mean pairwise correlation of training scores per component, non-increasing.
    pub raw_correlations: DVector<T>,
    pub n_components: usize,
}

impl<T: Real> KmccaModel<T> {
    pub fn correlations(&self) -> DVector<T> {
        self.raw_correlations.map(|r| r.max(T::zero()).min(T::one()))
    }
}

impl<T: Real> Transform<T> for KmccaModel<T> {
    type Output = Vec<DMatrix<T>>;

    fn transform(&self, ds: &MultiviewDataset<T>) -> Result<Vec<DMatrix<T>>> {
        let widths: Vec<usize> = self.train_views.iter().map(|x| x.ncols()).collect();
        ds.require_widths(&widths)?;
        let n_train = T::from_count(self.train_views[0].nrows());
        Ok(ds
            .views()
            .enumerate()
            .map(|(v, x)| {
                let k = self.kernel.gram(x, &self.train_views[v]);
                let col = &self.gram_col_means[v];
                let grand = self.gram_grand_means[v];
                let row: Vec<T> = k.row_iter().map(|r| r.sum() / n_train).collect();
                let kc = DMatrix::from_fn(k.nrows(), k.ncols(), |i, j| k[(i, j)] - col[j] - row[i] + grand);
                kc * &self.dual_weights[v]
            })
            .collect())
    }
}

impl<T: Real> Fit<T> for Kmcca<T> {
    type Model = KmccaModel<T>;

    fn fit(&self, ds: &MultiviewDataset<T>) -> Result<KmccaModel<T>> {
        ds.require_min_views(2)?;
        self.kernel.validate()?;
        let n = ds.n_samples();
        let k = ds.n_views();
        let eps = self.kernel.regularization;
        let nt = T::from_count(n);

        let mut grams = Vec::with_capacity(k);
        let mut col_means = Vec::with_capacity(k);
        let mut grand_means = Vec::with_capacity(k);
        let mut bases = Vec::with_capacity(k);
        let mut spectra = Vec::with_capacity(k);
        for x in ds.views() {
            let raw = self.kernel.gram(x, x);
            let cm = DVector::from_iterator(n, raw.column_iter().map(|c| c.sum() / nt));
            grand_means.push(cm.sum() / nt);
            col_means.push(cm);
            let kc = center_gram(&raw);
            let (vals, vecs) = sym_eigen(&kc);
            let vmax = vals[0].max(T::zero());
            let keep = vals.iter().filter(|&&v| v > vmax * psd_rtol::<T>()).count();
            if keep == 0 {
                return Err(MvError::DegenerateInput("a centered Gram matrix is zero".into()));
            }
            bases.push(vecs.columns(0, keep).into_owned());
            spectra.push(vals.rows(0, keep).into_owned());
            grams.push(kc);
        }
        let dims: Vec<usize> = bases.iter().map(|b| b.ncols()).collect();
        let total: usize = dims.iter().sum();
        let r = self.n_components;
        let max_r = dims.iter().copied().min().unwrap_or(0);
        if r == 0 || r > max_r {
            return Err(MvError::Rank(format!(
                "n_components {r} must lie in [1, {max_r}] (smallest Gram rank)"
            )));
        }
        let offsets: Vec<usize> = dims
            .iter()
            .scan(0, |acc, &d| {
                let o = *acc;
                *acc += d;
                Some(o)
            })
            .collect();

        // whitened problem: C γ = ρ γ, C_vu = D_v U_vᵀ U_u D_u, D = S / (S + ε)
        let shrink: Vec<DVector<T>> = spectra.iter().map(|s| s.map(|v| v / (v + eps))).collect();
        let mut c = DMatrix::zeros(total, total);
        for v in 0..k {
            for u in (v + 1)..k {
                let block = DMatrix::from_diagonal(&shrink[v])
                    * bases[v].tr_mul(&bases[u])
                    * DMatrix::from_diagonal(&shrink[u]);
                c.view_mut((offsets[v], offsets[u]), (dims[v], dims[u])).copy_from(&block);
                c.view_mut((offsets[u], offsets[v]), (dims[u], dims[v])).copy_from(&block.transpose());
            }
        }
        let (_, vecs) = sym_eigen(&c);

        let mut duals: Vec<DMatrix<T>> = (0..k).map(|_| DMatrix::zeros(n, r)).collect();
        let mut scores: Vec<DMatrix<T>> = (0..k).map(|_| DMatrix::zeros(n, r)).collect();
        for j in 0..r {
            for v in 0..k {
                let gamma = vecs.view((offsets[v], j), (dims[v], 1));
                let beta = DVector::from_iterator(
                    dims[v],
                    gamma.iter().zip(spectra[v].iter()).map(|(&g, &s)| g / (s + eps)),
                );
                let mut alpha = &bases[v] * beta;
                let mut t = &grams[v] * &alpha;
                let var = t.norm_squared() / T::from_count(n.saturating_sub(1).max(1));
                if var > T::zero() {
                    let s = var.sqrt();
                    alpha /= s;
                    t /= s;
                }
                duals[v].set_column(j, &alpha);
                scores[v].set_column(j, &t);
            }
        }
        let corrs: Vec<T> = (0..r).map(|j| mean_pairwise_correlation(&scores, j)).collect();
        let mut order: Vec<usize> = (0..r).collect();
        order.sort_by(|&a, &b| corrs[b].partial_cmp(&corrs[a]).unwrap_or(std::cmp::Ordering::Equal));
        let mut duals: Vec<DMatrix<T>> = duals.iter().map(|d| d.select_columns(order.iter())).collect();
        let signs = fix_column_signs(&mut duals[0]);
        for d in duals.iter_mut().skip(1) {
            apply_column_signs(d, &signs);
        }
        Ok(KmccaModel {
            kernel: self.kernel,
            train_views: ds.views().cloned().collect(),
            dual_weights: duals,
            gram_col_means: col_means,
            gram_grand_means: grand_means,
            raw_correlations: DVector::from_iterator(r, order.iter().map(|&i| corrs[i])),
            n_components: r,
        })
    }
}
