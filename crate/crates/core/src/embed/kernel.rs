use nalgebra::DMatrix;

use crate::error::{MvError, Result};
use crate::linalg::cross_sq_dists;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kernel<T: Real> {
    Linear,
    /// `(x·y + coef0)^degree`
    Polynomial { degree: u32, coef0: T },
    /// `exp(-gamma · |x - y|²)`
    Rbf { gamma: T },
}

/// Kernel choice plus the ridge `ε` used in the kernel CCA constraint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSpec<T: Real> {
    pub kernel: Kernel<T>,
    pub regularization: T,
}

impl<T: Real> KernelSpec<T> {
    pub fn new(kernel: Kernel<T>) -> Self {
        Self {
            kernel,
            regularization: T::lit(0.1),
        }
    }

    pub fn regularization(mut self, eps: T) -> Self {
        self.regularization = eps;
        self
    }

    pub fn validate(&self) -> Result<()> {
        match self.kernel {
            Kernel::Polynomial { degree, .. } if degree < 1 => {
                return Err(MvError::Kernel("polynomial degree must be at least 1".into()))
            }
            Kernel::Rbf { gamma } if !(gamma > T::zero()) => {
                return Err(MvError::Kernel("rbf gamma must be positive".into()))
            }
            _ => {}
        }
        if !(self.regularization >= T::zero() && self.regularization <= T::one()) {
            return Err(MvError::Kernel("regularization must lie in [0, 1]".into()));
        }
        Ok(())
    }

    /// Kernel matrix between the rows of `a` and the rows of `b`.
    pub fn gram(&self, a: &DMatrix<T>, b: &DMatrix<T>) -> DMatrix<T> {
        match self.kernel {
            Kernel::Linear => a * b.transpose(),
            Kernel::Polynomial { degree, coef0 } => {
                (a * b.transpose()).map(|v| (v + coef0).powi(degree as i32))
            }
            Kernel::Rbf { gamma } => cross_sq_dists(a, b).map(|d| (-gamma * d).exp()),
        }
    }
}

/// Centers a training Gram matrix in feature space: `K - 1K - K1 + 1K1`.
pub fn center_gram<T: Real>(k: &DMatrix<T>) -> DMatrix<T> {
    let n = k.nrows();
    let nt = T::from_count(n);
    let col: Vec<T> = k.column_iter().map(|c| c.sum() / nt).collect();
    let row: Vec<T> = k.row_iter().map(|r| r.sum() / nt).collect();
    let grand = col.iter().fold(T::zero(), |a, &b| a + b) / nt;
    DMatrix::from_fn(n, k.ncols(), |i, j| k[(i, j)] - col[j] - row[i] + grand)
}
