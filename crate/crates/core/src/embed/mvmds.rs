use nalgebra::{DMatrix, DVector};

use crate::dataset::MultiviewDataset;
use crate::error::{MvError, Result};
use crate::linalg::{double_center, fix_column_signs, pairwise_sq_dists, sym_eigen};
use crate::scalar::Real;

/// Common principal coordinates shared by all views.
#[derive(Debug, Clone, PartialEq)]
pub struct MvmdsResult<T: Real> {
    /// Orthonormal common components, `n × r`.
    pub components: DMatrix<T>,
    /// Summed eigenvalue `Σ_v qᵀ B_v q` of each component at extraction time.
    pub eigenvalues: DVector<T>,
}

/// Stepwise common-component multiview MDS.
///
/// Each view contributes its double-centered squared-distance matrix
/// `B_v = -½ J D²_v J`. Component `j` is the leading eigenvector of `Σ_v B_v`
/// restricted to the complement of components `1..j`; every `B_v` is then
/// deflated by `(I - q qᵀ)` on both sides.
pub fn mvmds_fit_transform<T: Real>(ds: &MultiviewDataset<T>, n_components: usize) -> Result<MvmdsResult<T>> {
    ds.require_min_views(2)?;
    let n = ds.n_samples();
    if n < 3 {
        return Err(MvError::TooFewSamples { needed: 3, got: n });
    }
    let r = n_components;
    if r == 0 || r > n - 1 {
        return Err(MvError::Rank(format!("n_components {r} must lie in [1, n - 1 = {}]", n - 1)));
    }
    let mut bs: Vec<DMatrix<T>> = ds.views().map(|x| double_center(&pairwise_sq_dists(x))).collect();
    let mut components = DMatrix::zeros(n, r);
    let mut eigenvalues = DVector::zeros(r);
    let mut proj = DMatrix::<T>::identity(n, n);
    for j in 0..r {
        let sum = bs.iter().fold(DMatrix::zeros(n, n), |acc, b| acc + b);
        let (vals, vecs) = sym_eigen(&(&proj * sum * &proj));
        let q = vecs.column(0).into_owned();
        components.set_column(j, &q);
        eigenvalues[j] = vals[0];
        let deflate = DMatrix::identity(n, n) - &q * q.transpose();
        for b in bs.iter_mut() {
            *b = &deflate * &*b * &deflate;
        }
        proj = &deflate * proj;
    }
    fix_column_signs(&mut components);
    Ok(MvmdsResult {
        components,
        eigenvalues,
    })
}

/// Classical (Torgerson) MDS coordinates of one view: top eigenvectors of the
/// double-centered squared distances, scaled by the square root of their eigenvalues.
pub fn classical_mds<T: Real>(x: &DMatrix<T>, n_components: usize) -> Result<(DMatrix<T>, DVector<T>)> {
    let n = x.nrows();
    if n_components == 0 || n_components > n {
        return Err(MvError::Rank(format!("n_components {n_components} must lie in [1, {n}]")));
    }
    let (vals, vecs) = sym_eigen(&double_center(&pairwise_sq_dists(x)));
    let mut coords = vecs.columns(0, n_components).into_owned();
    for j in 0..n_components {
        let scale = vals[j].max(T::zero()).sqrt();
        coords.column_mut(j).scale_mut(scale);
    }
    fix_column_signs(&mut coords);
    Ok((coords, vals.rows(0, n_components).into_owned()))
}
