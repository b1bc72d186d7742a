//! Base learners accepted by co-training, plus the bundled defaults.

use nalgebra::{DMatrix, DVector};

use crate::error::{MvError, Result};
use crate::scalar::Real;

/// Binary classifier with class-probability output.
///
/// `train` receives class indices in `{0, 1}`; `predict_proba` returns an
/// `n × 2` matrix whose rows sum to one.
pub trait ProbabilisticClassifier<T: Real>: Clone {
    fn train(&mut self, x: &DMatrix<T>, y: &[usize]) -> Result<()>;
    fn predict_proba(&self, x: &DMatrix<T>) -> Result<DMatrix<T>>;
}

pub trait Regressor<T: Real>: Clone {
    fn train(&mut self, x: &DMatrix<T>, y: &[T]) -> Result<()>;
    fn predict(&self, x: &DMatrix<T>) -> Result<Vec<T>>;
}

/// L2-regularized logistic regression fitted by Newton's method.
///
/// The intercept is not penalized.
#[derive(Debug, Clone, PartialEq)]
pub struct LogisticRegression<T: Real> {
    pub l2: T,
    pub max_iter: usize,
    pub tol: T,
    /// Intercept first, then one coefficient per feature.
    pub coef: Option<DVector<T>>,
}

impl<T: Real> Default for LogisticRegression<T> {
    fn default() -> Self {
        Self {
            l2: T::one(),
            max_iter: 100,
            tol: T::lit(1e-10),
            coef: None,
        }
    }
}

fn sigmoid<T: Real>(z: T) -> T {
    if z >= T::zero() {
        T::one() / (T::one() + (-z).exp())
    } else {
        let e = z.exp();
        e / (T::one() + e)
    }
}

fn with_intercept<T: Real>(x: &DMatrix<T>) -> DMatrix<T> {
    let mut a = DMatrix::from_element(x.nrows(), x.ncols() + 1, T::one());
    a.columns_mut(1, x.ncols()).copy_from(x);
    a
}

impl<T: Real> ProbabilisticClassifier<T> for LogisticRegression<T> {
    fn train(&mut self, x: &DMatrix<T>, y: &[usize]) -> Result<()> {
        if x.nrows() != y.len() || y.is_empty() {
            return Err(MvError::ShapeMismatch(format!("{} rows for {} targets", x.nrows(), y.len())));
        }
        let a = with_intercept(x);
        let p = a.ncols();
        let target = DVector::from_iterator(y.len(), y.iter().map(|&c| if c == 1 { T::one() } else { T::zero() }));
        let mut w = DVector::zeros(p);
        let mut penalty = DMatrix::identity(p, p) * self.l2;
        penalty[(0, 0)] = T::zero();
        for _ in 0..self.max_iter {
            let z = &a * &w;
            let prob = z.map(sigmoid);
            let s = prob.map(|q| q * (T::one() - q));
            let grad = a.tr_mul(&(&prob - &target)) + &penalty * &w;
            let mut hess = &penalty + DMatrix::identity(p, p) * T::lit(1e-12);
            for i in 0..a.nrows() {
                let row = a.row(i);
                hess += row.transpose() * row * s[i];
            }
            let step = hess
                .cholesky()
                .ok_or_else(|| MvError::numerical("logistic regression", "Hessian is not positive definite"))?
                .solve(&grad);
            w -= &step;
            if step.amax() < self.tol {
                break;
            }
        }
        self.coef = Some(w);
        Ok(())
    }

    fn predict_proba(&self, x: &DMatrix<T>) -> Result<DMatrix<T>> {
        let w = self.coef.as_ref().ok_or(MvError::NotFitted)?;
        if x.ncols() + 1 != w.len() {
            return Err(MvError::ShapeMismatch(format!(
                "model has {} features, input has {}",
                w.len() - 1,
                x.ncols()
            )));
        }
        let z = with_intercept(x) * w;
        let mut out = DMatrix::zeros(x.nrows(), 2);
        for i in 0..x.nrows() {
            let p1 = sigmoid(z[i]);
            out[(i, 0)] = T::one() - p1;
            out[(i, 1)] = p1;
        }
        Ok(out)
    }
}

/// k-nearest-neighbor regressor under the Minkowski distance of order `p`.
///
/// Predicts the mean target of the `k` closest training rows; ties in
/// distance go to the earlier training row.
#[derive(Debug, Clone, PartialEq)]
pub struct KnnRegressor<T: Real> {
    pub k: usize,
    pub p: u32,
    x: DMatrix<T>,
    y: Vec<T>,
}

impl<T: Real> KnnRegressor<T> {
    pub fn new(k: usize, p: u32) -> Self {
        Self {
            k,
            p,
            x: DMatrix::zeros(0, 0),
            y: Vec::new(),
        }
    }

    pub fn n_train(&self) -> usize {
        self.y.len()
    }

    pub fn train_targets(&self) -> &[T] {
        &self.y
    }

    pub fn train_row(&self, i: usize) -> DMatrix<T> {
        self.x.rows(i, 1).into_owned()
    }

    /// Monotone surrogate of the Minkowski distance (the `p`-th power).
    fn dist_pow(&self, q: &DMatrix<T>, qi: usize, i: usize) -> T {
        let mut acc = T::zero();
        for c in 0..self.x.ncols() {
            let d = (q[(qi, c)] - self.x[(i, c)]).abs();
            acc += d.powi(self.p as i32);
        }
        acc
    }

    /// Indices of the `k` nearest training rows to row `qi` of `q`.
    pub fn neighbors(&self, q: &DMatrix<T>, qi: usize) -> Vec<usize> {
        let mut d: Vec<(T, usize)> = (0..self.n_train()).map(|i| (self.dist_pow(q, qi, i), i)).collect();
        d.sort_by(|a, b| {
            a.0.partial_cmp(&b.0)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.1.cmp(&b.1))
        });
        d.into_iter().take(self.k).map(|(_, i)| i).collect()
    }

    pub fn predict_row(&self, q: &DMatrix<T>, qi: usize) -> T {
        let nb = self.neighbors(q, qi);
        let sum = nb.iter().fold(T::zero(), |a, &i| a + self.y[i]);
        sum / T::from_count(nb.len())
    }

    /// Copy of the model with one extra training example.
    pub fn with_example(&self, row: &DMatrix<T>, target: T) -> Self {
        let mut out = self.clone();
        out.x = self.x.clone().insert_row(self.x.nrows(), T::zero());
        let last = out.x.nrows() - 1;
        out.x.set_row(last, &row.row(0));
        out.y.push(target);
        out
    }
}

impl<T: Real> Regressor<T> for KnnRegressor<T> {
    fn train(&mut self, x: &DMatrix<T>, y: &[T]) -> Result<()> {
        if x.nrows() != y.len() || y.is_empty() {
            return Err(MvError::ShapeMismatch(format!("{} rows for {} targets", x.nrows(), y.len())));
        }
        if self.k == 0 || self.p == 0 {
            return Err(MvError::BadParams("k and p must be at least 1".into()));
        }
        self.x = x.clone();
        self.y = y.to_vec();
        Ok(())
    }

    fn predict(&self, x: &DMatrix<T>) -> Result<Vec<T>> {
        if self.y.is_empty() {
            return Err(MvError::NotFitted);
        }
        if x.ncols() != self.x.ncols() {
            return Err(MvError::ShapeMismatch(format!(
                "model has {} features, input has {}",
                self.x.ncols(),
                x.ncols()
            )));
        }
        Ok((0..x.nrows()).map(|i| self.predict_row(x, i)).collect())
    }
}
