use nalgebra::{DMatrix, DVector};

use crate::dataset::MultiviewDataset;
use crate::error::{MvError, Result};
use crate::estimator::{Fit, Transform};
use crate::linalg::{apply_column_signs, center_columns, cross_cov, fix_column_signs, inv_sqrt_spd, svd};
use crate::scalar::Real;

/// Two-view canonical correlation analysis.
///
/// Whitens each view's covariance (plus `regularization · I`) and takes the SVD
/// of the whitened cross-covariance.
#[derive(Debug, Clone)]
pub struct Cca<T: Real> {
    pub n_components: usize,
    pub regularization: T,
}

impl<T: Real> Cca<T> {
    pub fn new(n_components: usize) -> Self {
        Self {
            n_components,
            regularization: T::zero(),
        }
    }

    pub fn regularization(mut self, lambda: T) -> Self {
        self.regularization = lambda;
        self
    }
}

/// Fitted linear multiview embedding, shared by CCA and multiview CCA.
///
/// Each view gets a `d_v × r` weight matrix; scores are
/// `(view - mean) · weights`.
#[derive(Debug, Clone, PartialEq)]
pub struct CcaModel<T: Real> {
    pub weights: Vec<DMatrix<T>>,
    pub means: Vec<DVector<T>>,
    /// Canonical correlations, non-increasing, as computed (not clipped).
    pub raw_correlations: DVector<T>,
    pub n_components: usize,
    pub converged: bool,
    pub n_iter: usize,
}

impl<T: Real> CcaModel<T> {
    /// Correlations clipped to `[0, 1]`.
    pub fn correlations(&self) -> DVector<T> {
        self.raw_correlations.map(|r| r.max(T::zero()).min(T::one()))
    }

    pub fn widths(&self) -> Vec<usize> {
        self.weights.iter().map(|w| w.nrows()).collect()
    }
}

impl<T: Real> Transform<T> for CcaModel<T> {
    type Output = Vec<DMatrix<T>>;

    fn transform(&self, ds: &MultiviewDataset<T>) -> Result<Vec<DMatrix<T>>> {
        ds.require_widths(&self.widths())?;
        Ok(ds
            .views()
            .zip(self.weights.iter().zip(&self.means))
            .map(|(x, (w, mean))| {
                let mut xc = x.clone();
                for (j, mut col) in xc.column_iter_mut().enumerate() {
                    col.add_scalar_mut(-mean[j]);
                }
                xc * w
            })
            .collect())
    }
}

impl<T: Real> Fit<T> for Cca<T> {
    type Model = CcaModel<T>;

    fn fit(&self, ds: &MultiviewDataset<T>) -> Result<CcaModel<T>> {
        ds.require_views(2)?;
        let n = ds.n_samples();
        let (d1, d2) = (ds.view(0).ncols(), ds.view(1).ncols());
        let r = self.n_components;
        let max_r = d1.min(d2).min(n.saturating_sub(1));
        if r == 0 || r > max_r {
            return Err(MvError::Rank(format!(
                "n_components {r} must lie in [1, min(d1, d2, n - 1) = {max_r}]"
            )));
        }
        if self.regularization < T::zero() {
            return Err(MvError::BadParams("regularization must be non-negative".into()));
        }
        let (x1, m1) = center_columns(ds.view(0));
        let (x2, m2) = center_columns(ds.view(1));
        let ridge = |c: DMatrix<T>| {
            let d = c.nrows();
            c + DMatrix::identity(d, d) * self.regularization
        };
        let s11 = ridge(cross_cov(&x1, &x1));
        let s22 = ridge(cross_cov(&x2, &x2));
        let s12 = cross_cov(&x1, &x2);
        let a = inv_sqrt_spd(&s11, "cca view 1 covariance")?;
        let b = inv_sqrt_spd(&s22, "cca view 2 covariance")?;
        let dec = svd(&(&a * s12 * &b))?;
        let mut w1 = a * dec.u.columns(0, r);
        let mut w2 = b * dec.vt.rows(0, r).transpose();
        let signs = fix_column_signs(&mut w1);
        apply_column_signs(&mut w2, &signs);
        Ok(CcaModel {
            weights: vec![w1, w2],
            means: vec![m1, m2],
            raw_correlations: dec.s.rows(0, r).into_owned(),
            n_components: r,
            converged: true,
            n_iter: 0,
        })
    }
}
