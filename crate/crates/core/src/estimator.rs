//! The estimator lifecycle: `fit` on a multiview dataset, then `transform` or
//! `predict` on matched views.
//!
//! Parameter structs implement [`Fit`] and return an immutable fitted model.
//! [`Estimator`] wraps a parameter struct with a [`FitState`] for callers that
//! want the stateful `fit` then `predict` flow, and reports [`MvError::NotFitted`]
//! when used out of order.

use crate::dataset::MultiviewDataset;
use crate::error::{MvError, Result};
use crate::scalar::Real;

pub trait Fit<T: Real> {
    type Model;

    fn fit(&self, ds: &MultiviewDataset<T>) -> Result<Self::Model>;

    /// Seed used by randomized estimators.
    fn seed(&self) -> Option<u64> {
        None
    }
}

/// Fitted models that map views to a new representation.
///
/// Labels on the dataset are accepted and ignored.
pub trait Transform<T: Real> {
    type Output;

    fn transform(&self, ds: &MultiviewDataset<T>) -> Result<Self::Output>;
}

pub trait Predict<T: Real> {
    type Output;

    fn predict(&self, ds: &MultiviewDataset<T>) -> Result<Self::Output>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitStatus {
    Unfitted,
    Fitted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FitState {
    pub status: FitStatus,
    pub seed: Option<u64>,
}

impl Default for FitState {
    fn default() -> Self {
        Self {
            status: FitStatus::Unfitted,
            seed: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Estimator<P: Fit<T>, T: Real> {
    params: P,
    state: FitState,
    model: Option<P::Model>,
}

impl<P: Fit<T>, T: Real> Estimator<P, T> {
    pub fn new(params: P) -> Self {
        Self {
            params,
            state: FitState::default(),
            model: None,
        }
    }

    pub fn params(&self) -> &P {
        &self.params
    }

    pub fn state(&self) -> FitState {
        self.state
    }

    /// Fits and stores the model. A failed fit leaves the estimator unfitted.
    pub fn fit(&mut self, ds: &MultiviewDataset<T>) -> Result<&P::Model> {
        self.model = None;
        self.state = FitState {
            status: FitStatus::Unfitted,
            seed: self.params.seed(),
        };
        let model = self.params.fit(ds)?;
        self.state.status = FitStatus::Fitted;
        Ok(self.model.insert(model))
    }

    pub fn model(&self) -> Result<&P::Model> {
        self.model.as_ref().ok_or(MvError::NotFitted)
    }

    pub fn into_model(self) -> Result<P::Model> {
        self.model.ok_or(MvError::NotFitted)
    }
}

impl<P, T> Estimator<P, T>
where
    P: Fit<T>,
    T: Real,
    P::Model: Transform<T>,
{
    pub fn transform(&self, ds: &MultiviewDataset<T>) -> Result<<P::Model as Transform<T>>::Output> {
        self.model()?.transform(ds)
    }

    pub fn fit_transform(
        &mut self,
        ds: &MultiviewDataset<T>,
    ) -> Result<<P::Model as Transform<T>>::Output> {
        self.fit(ds)?.transform(ds)
    }
}

impl<P, T> Estimator<P, T>
where
    P: Fit<T>,
    T: Real,
    P::Model: Predict<T>,
{
    pub fn predict(&self, ds: &MultiviewDataset<T>) -> Result<<P::Model as Predict<T>>::Output> {
        self.model()?.predict(ds)
    }
}
