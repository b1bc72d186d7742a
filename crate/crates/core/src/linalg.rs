//! Dense linear-algebra helpers on top of nalgebra.
//!
//! Every decomposition here returns its spectrum sorted in descending order so
//! callers can slice leading components directly.

use nalgebra::{DMatrix, DVector};

use crate::error::{MvError, Result};
use crate::scalar::Real;

/// Thin singular value decomposition with singular values sorted descending.
#[derive(Debug, Clone)]
pub struct ThinSvd<T: Real> {
    /// `n × m` left singular vectors, `m = min(n, d)`.
    pub u: DMatrix<T>,
    pub s: DVector<T>,
    /// `m × d` right singular vectors (transposed).
    pub vt: DMatrix<T>,
}

impl<T: Real> ThinSvd<T> {
    /// Number of singular values above `rtol · s_max`.
    pub fn rank(&self, rtol: T) -> usize {
        let smax = if self.s.is_empty() { T::zero() } else { self.s[0] };
        self.s.iter().filter(|&&v| v > smax * rtol).count()
    }
}

pub fn svd<T: Real>(m: &DMatrix<T>) -> Result<ThinSvd<T>> {
    let (n, d) = m.shape();
    if n == 0 || d == 0 {
        return Err(MvError::EmptyInput("svd of an empty matrix".into()));
    }
    let dec = nalgebra::linalg::SVD::try_new(m.clone(), true, true, T::eps(), 0)
        .ok_or_else(|| MvError::numerical("svd", "iteration did not converge"))?;
    let u = dec.u.expect("u requested");
    let vt = dec.v_t.expect("v_t requested");
    let mut order: Vec<usize> = (0..dec.singular_values.len()).collect();
    order.sort_by(|&a, &b| {
        dec.singular_values[b]
            .partial_cmp(&dec.singular_values[a])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let s = DVector::from_iterator(order.len(), order.iter().map(|&i| dec.singular_values[i]));
    let u = DMatrix::from_fn(n, order.len(), |r, c| u[(r, order[c])]);
    let vt = DMatrix::from_fn(order.len(), d, |r, c| vt[(order[r], c)]);
    Ok(ThinSvd { u, s, vt })
}

/// Eigen-decomposition of the symmetric part of `m`, eigenvalues descending.
pub fn sym_eigen<T: Real>(m: &DMatrix<T>) -> (DVector<T>, DMatrix<T>) {
    sym_eigen_sorted(m, |v| v)
}

/// Symmetric eigen-decomposition ordered by eigenvalue magnitude, descending.
pub fn sym_eigen_by_magnitude<T: Real>(m: &DMatrix<T>) -> (DVector<T>, DMatrix<T>) {
    sym_eigen_sorted(m, |v| v.abs())
}

fn sym_eigen_sorted<T: Real>(m: &DMatrix<T>, key: impl Fn(T) -> T) -> (DVector<T>, DMatrix<T>) {
    let n = m.nrows();
    let half = T::lit(0.5);
    let sym = (m + m.transpose()) * half;
    let dec = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        key(dec.eigenvalues[b])
            .partial_cmp(&key(dec.eigenvalues[a]))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let vals = DVector::from_iterator(n, order.iter().map(|&i| dec.eigenvalues[i]));
    let vecs = DMatrix::from_fn(n, n, |r, c| dec.eigenvectors[(r, order[c])]);
    (vals, vecs)
}

/// Flips columns so that each column's largest-magnitude entry is positive.
///
/// Returns the applied signs so paired matrices can be flipped consistently.
pub fn fix_column_signs<T: Real>(m: &mut DMatrix<T>) -> Vec<T> {
    let mut signs = Vec::with_capacity(m.ncols());
    for j in 0..m.ncols() {
        let mut best = T::zero();
        let mut best_val = T::zero();
        for i in 0..m.nrows() {
            let v = m[(i, j)];
            if v.abs() > best {
                best = v.abs();
                best_val = v;
            }
        }
        let sign = if best_val < T::zero() { -T::one() } else { T::one() };
        if sign < T::zero() {
            m.column_mut(j).neg_mut();
        }
        signs.push(sign);
    }
    signs
}

pub fn apply_column_signs<T: Real>(m: &mut DMatrix<T>, signs: &[T]) {
    for (j, &s) in signs.iter().enumerate() {
        if s < T::zero() {
            m.column_mut(j).neg_mut();
        }
    }
}

/// Subtracts column means; returns the centered copy and the means.
pub fn center_columns<T: Real>(m: &DMatrix<T>) -> (DMatrix<T>, DVector<T>) {
    let n = T::from_count(m.nrows());
    let means = DVector::from_iterator(m.ncols(), m.column_iter().map(|c| c.sum() / n));
    let mut out = m.clone();
    for (j, mut col) in out.column_iter_mut().enumerate() {
        col.add_scalar_mut(-means[j]);
    }
    (out, means)
}

/// Sample covariance `Aᵀ B / (n - 1)` of two already-centered blocks.
pub fn cross_cov<T: Real>(a: &DMatrix<T>, b: &DMatrix<T>) -> DMatrix<T> {
    let denom = T::from_count(a.nrows().saturating_sub(1).max(1));
    a.tr_mul(b) / denom
}

/// Inverse square root of a symmetric positive-definite matrix.
///
/// Fails when the smallest eigenvalue is not clearly positive.
pub fn inv_sqrt_spd<T: Real>(m: &DMatrix<T>, stage: &str) -> Result<DMatrix<T>> {
    let (vals, vecs) = sym_eigen(m);
    let n = m.nrows();
    let vmax = vals.iter().fold(T::zero(), |a, &v| a.max(v.abs()));
    let floor = vmax * T::eps() * T::from_count(n.max(1) * 10);
    if vmax <= T::zero() || vals[n - 1] <= floor {
        return Err(MvError::numerical(
            stage,
            "covariance is singular or not positive definite; add regularization",
        ));
    }
    let scale = DVector::from_iterator(n, vals.iter().map(|&v| T::one() / v.sqrt()));
    Ok(&vecs * DMatrix::from_diagonal(&scale) * vecs.transpose())
}

/// Moore-Penrose pseudo-inverse via SVD with relative cutoff `max(n, d) · eps`.
pub fn pinv<T: Real>(m: &DMatrix<T>) -> Result<DMatrix<T>> {
    let dec = svd(m)?;
    let rtol = T::eps() * T::from_count(m.nrows().max(m.ncols()));
    let r = dec.rank(rtol);
    let mut out = DMatrix::zeros(m.ncols(), m.nrows());
    for k in 0..r {
        let inv = T::one() / dec.s[k];
        out += dec.vt.row(k).transpose() * dec.u.column(k).transpose() * inv;
    }
    Ok(out)
}

/// Pseudo-inverse of a symmetric positive semi-definite matrix.
pub fn pinv_psd<T: Real>(m: &DMatrix<T>) -> DMatrix<T> {
    let (vals, vecs) = sym_eigen(m);
    let n = m.nrows();
    let vmax = vals.iter().fold(T::zero(), |a, &v| a.max(v.abs()));
    let floor = vmax * psd_rtol::<T>();
    let inv = DVector::from_iterator(
        n,
        vals.iter()
            .map(|&v| if v > floor { T::one() / v } else { T::zero() }),
    );
    &vecs * DMatrix::from_diagonal(&inv) * vecs.transpose()
}

/// Cutoff below which eigenvalues of a PSD matrix count as zero, relative to
/// the largest: `eps^(2/3)`.
pub fn psd_rtol<T: Real>() -> T {
    T::eps().powf(T::lit(2.0 / 3.0))
}

/// Pseudo inverse square root of a PSD matrix; null directions map to zero.
pub fn pinv_sqrt_psd<T: Real>(m: &DMatrix<T>) -> DMatrix<T> {
    let (vals, vecs) = sym_eigen(m);
    let n = m.nrows();
    let vmax = vals.iter().fold(T::zero(), |a, &v| a.max(v.abs()));
    let floor = vmax * psd_rtol::<T>();
    let inv = DVector::from_iterator(
        n,
        vals.iter()
            .map(|&v| if v > floor { T::one() / v.sqrt() } else { T::zero() }),
    );
    &vecs * DMatrix::from_diagonal(&inv) * vecs.transpose()
}

/// Least-squares solution `X` of `A X ≈ B`.
pub fn lstsq<T: Real>(a: &DMatrix<T>, b: &DMatrix<T>) -> Result<DMatrix<T>> {
    Ok(pinv(a)? * b)
}

/// Orthonormal basis for the column span of `m`.
pub fn orth<T: Real>(m: &DMatrix<T>) -> Result<DMatrix<T>> {
    let dec = svd(m)?;
    let rtol = T::eps() * T::from_count(m.nrows().max(m.ncols()) * 10);
    let r = dec.rank(rtol);
    Ok(dec.u.columns(0, r).into_owned())
}

/// Largest principal angle (radians) between the column spans of `a` and `b`.
///
/// Computed from sines so that angles near zero keep full precision. When the
/// spans differ in dimension the smaller one is measured against the larger.
pub fn max_principal_angle<T: Real>(a: &DMatrix<T>, b: &DMatrix<T>) -> Result<T> {
    let qa = orth(a)?;
    let qb = orth(b)?;
    let (big, small) = if qa.ncols() >= qb.ncols() { (qa, qb) } else { (qb, qa) };
    let resid = &small - &big * big.tr_mul(&small);
    let s = svd(&resid)?.s[0];
    Ok(s.min(T::one()).asin())
}

/// Pairwise squared Euclidean distances between rows.
pub fn pairwise_sq_dists<T: Real>(m: &DMatrix<T>) -> DMatrix<T> {
    let n = m.nrows();
    let mut out = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let mut acc = T::zero();
            for c in 0..m.ncols() {
                let d = m[(i, c)] - m[(j, c)];
                acc += d * d;
            }
            out[(i, j)] = acc;
            out[(j, i)] = acc;
        }
    }
    out
}

/// Squared distances between rows of `a` and rows of `b`.
pub fn cross_sq_dists<T: Real>(a: &DMatrix<T>, b: &DMatrix<T>) -> DMatrix<T> {
    DMatrix::from_fn(a.nrows(), b.nrows(), |i, j| {
        let mut acc = T::zero();
        for c in 0..a.ncols() {
            let d = a[(i, c)] - b[(j, c)];
            acc += d * d;
        }
        acc
    })
}

/// Double centering `-½ J D J` with `J = I - 11ᵀ/n`.
pub fn double_center<T: Real>(sq_dists: &DMatrix<T>) -> DMatrix<T> {
    let n = sq_dists.nrows();
    let nt = T::from_count(n);
    let row_means: Vec<T> = sq_dists.row_iter().map(|r| r.sum() / nt).collect();
    let col_means: Vec<T> = sq_dists.column_iter().map(|c| c.sum() / nt).collect();
    let grand = row_means.iter().fold(T::zero(), |a, &b| a + b) / nt;
    let half = T::lit(-0.5);
    DMatrix::from_fn(n, n, |i, j| {
        half * (sq_dists[(i, j)] - row_means[i] - col_means[j] + grand)
    })
}

/// Scales each row to unit Euclidean norm; zero rows are left unchanged.
pub fn normalize_rows<T: Real>(m: &DMatrix<T>) -> DMatrix<T> {
    let mut out = m.clone();
    for mut row in out.row_iter_mut() {
        let nrm = row.norm();
        if nrm > T::zero() {
            row /= nrm;
        }
    }
    out
}
