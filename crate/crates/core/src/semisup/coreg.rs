//! COREG: co-training with two nearest-neighbor regressors.

use nalgebra::DMatrix;
use rand::seq::SliceRandom;

use super::learners::{KnnRegressor, Regressor};
use crate::dataset::{is_unlabeled, MultiviewDataset};
use crate::error::{MvError, Result};
use crate::estimator::Predict;
use crate::random::seeded;
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct CoRegParams {
    pub k1: usize,
    pub p1: u32,
    pub k2: usize,
    pub p2: u32,
    pub pool_size: usize,
    pub max_rounds: usize,
    pub seed: u64,
}

impl Default for CoRegParams {
    fn default() -> Self {
        Self {
            k1: 3,
            p1: 2,
            k2: 3,
            p2: 5,
            pool_size: 100,
            max_rounds: 100,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoRegRound {
    pub added: usize,
    pub refilled: usize,
}

#[derive(Debug, Clone)]
pub struct CoRegModel<T: Real> {
    pub regressors: (KnnRegressor<T>, KnnRegressor<T>),
    /// Sample indices in each regressor's labeled set, initial ones first.
    pub labeled: (Vec<usize>, Vec<usize>),
    pub n_initial: usize,
    pub trace: Vec<CoRegRound>,
    widths: [usize; 2],
}

struct Side<T: Real> {
    idx: Vec<usize>,
    y: Vec<T>,
    model: KnnRegressor<T>,
}

impl<T: Real> Side<T> {
    fn retrain(&mut self, x: &DMatrix<T>) -> Result<()> {
        self.model.train(&x.select_rows(self.idx.iter()), &self.y)
    }
}

/// Squared-error reduction on the candidate's labeled neighbors when the
/// candidate joins the training set with its own prediction as target.
fn delta<T: Real>(h: &KnnRegressor<T>, cand: &DMatrix<T>) -> (T, T) {
    let yhat = h.predict_row(cand, 0);
    let h2 = h.with_example(cand, yhat);
    let mut d = T::zero();
    for i in h.neighbors(cand, 0) {
        let xi = h.train_row(i);
        let yi = h.train_targets()[i];
        let before = yi - h.predict_row(&xi, 0);
        let after = yi - h2.predict_row(&xi, 0);
        d += before * before - after * after;
    }
    (d, yhat)
}

pub fn cotrain_regressor_fit<T: Real>(ds: &MultiviewDataset<T>, params: &CoRegParams) -> Result<CoRegModel<T>> {
    ds.require_views(2)?;
    if params.k1 == 0 || params.k2 == 0 || params.p1 == 0 || params.p2 == 0 || params.pool_size == 0 {
        return Err(MvError::BadParams("neighbor counts, orders and pool_size must be positive".into()));
    }
    let y = ds
        .labels()
        .ok_or_else(|| MvError::NoLabeled("dataset has no target vector".into()))?;
    let init: Vec<usize> = (0..y.len()).filter(|&i| !is_unlabeled(y[i])).collect();
    if init.len() < 2 {
        return Err(MvError::NoLabeled(format!("need at least 2 labeled samples, got {}", init.len())));
    }
    let targets: Vec<T> = init.iter().map(|&i| T::lit(y[i])).collect();
    let mut sides = [
        Side {
            idx: init.clone(),
            y: targets.clone(),
            model: KnnRegressor::new(params.k1, params.p1),
        },
        Side {
            idx: init.clone(),
            y: targets,
            model: KnnRegressor::new(params.k2, params.p2),
        },
    ];
    for (v, s) in sides.iter_mut().enumerate() {
        s.retrain(ds.view(v))?;
    }

    let mut unlabeled: Vec<usize> = (0..y.len()).filter(|&i| is_unlabeled(y[i])).collect();
    let mut rng = seeded(params.seed);
    unlabeled.shuffle(&mut rng);
    let take = params.pool_size.min(unlabeled.len());
    let mut pool: Vec<usize> = unlabeled.drain(..take).collect();

    let mut trace = Vec::new();
    while trace.len() < params.max_rounds && !pool.is_empty() {
        let mut picks: [Option<(usize, T)>; 2] = [None, None];
        for v in 0..2 {
            let h = &sides[v].model;
            let mut best: Option<(T, usize, T)> = None;
            for &u in &pool {
                let cand = ds.view(v).rows(u, 1).into_owned();
                let (d, yhat) = delta(h, &cand);
                if d > T::zero() && best.is_none_or(|(bd, _, _)| d > bd) {
                    best = Some((d, u, yhat));
                }
            }
            picks[v] = best.map(|(_, u, yhat)| (u, yhat));
        }
        if picks.iter().all(Option::is_none) {
            break;
        }
        let mut added = 0;
        for v in 0..2 {
            if let Some((u, yhat)) = picks[v] {
                let other = &mut sides[1 - v];
                other.idx.push(u);
                other.y.push(yhat);
                added += 1;
            }
        }
        pool.retain(|s| !picks.iter().flatten().any(|(u, _)| u == s));
        let refill = (params.pool_size - pool.len()).min(unlabeled.len());
        pool.extend(unlabeled.drain(..refill));
        for (v, s) in sides.iter_mut().enumerate() {
            s.retrain(ds.view(v))?;
        }
        trace.push(CoRegRound { added, refilled: refill });
    }

    let [a, b] = sides;
    Ok(CoRegModel {
        regressors: (a.model, b.model),
        labeled: (a.idx, b.idx),
        n_initial: init.len(),
        trace,
        widths: [ds.view(0).ncols(), ds.view(1).ncols()],
    })
}

impl<T: Real> Predict<T> for CoRegModel<T> {
    type Output = Vec<T>;

    /// Mean of the two regressors' predictions.
    fn predict(&self, ds: &MultiviewDataset<T>) -> Result<Vec<T>> {
        ds.require_views(2)?;
        ds.require_widths(&self.widths)?;
        let a = self.regressors.0.predict(ds.view(0))?;
        let b = self.regressors.1.predict(ds.view(1))?;
        Ok(a.into_iter().zip(b).map(|(p, q)| (p + q) / T::lit(2.0)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{ViewMatrix, UNLABELED};

    fn line_views(x: &[f64], y: Vec<f64>) -> MultiviewDataset<f64> {
        let a = DMatrix::from_column_slice(x.len(), 1, x);
        MultiviewDataset::from_views(vec![ViewMatrix::new(a.clone()), ViewMatrix::new(a)], Some(y)).unwrap()
    }

    #[test]
    fn fully_labeled_is_two_plain_fits() {
        let x: Vec<f64> = (0..20).map(|i| i as f64 * 0.3).collect();
        let y: Vec<f64> = x.iter().map(|v| v.sin()).collect();
        let ds = line_views(&x, y.clone());
        let m = cotrain_regressor_fit(&ds, &CoRegParams::default()).unwrap();
        assert!(m.trace.is_empty());
        let a = DMatrix::from_column_slice(20, 1, &x);
        let mut r1 = KnnRegressor::new(3, 2);
        let mut r2 = KnnRegressor::new(3, 5);
        r1.train(&a, &y).unwrap();
        r2.train(&a, &y).unwrap();
        let expect: Vec<f64> = r1
            .predict(&a)
            .unwrap()
            .into_iter()
            .zip(r2.predict(&a).unwrap())
            .map(|(p, q)| (p + q) / 2.0)
            .collect();
        assert_eq!(m.predict(&ds).unwrap(), expect);
    }

    #[test]
    fn no_positive_delta_stops_immediately() {
        // Constant targets: every candidate's prediction equals its
        // neighbors' targets, so no addition changes any residual.
        let x: Vec<f64> = (0..12).map(|i| i as f64).collect();
        let y: Vec<f64> = (0..12).map(|i| if i < 5 { 1.0 } else { UNLABELED }).collect();
        let ds = line_views(&x, y);
        let m = cotrain_regressor_fit(&ds, &CoRegParams::default()).unwrap();
        assert!(m.trace.is_empty());
        assert_eq!(m.labeled.0, vec![0, 1, 2, 3, 4]);
        assert_eq!(m.labeled.1, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn identical_regressors_average_to_either() {
        let x: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let y: Vec<f64> = x.iter().map(|v| v * v).collect();
        let ds = line_views(&x, y);
        let params = CoRegParams {
            p2: 2,
            ..Default::default()
        };
        let m = cotrain_regressor_fit(&ds, &params).unwrap();
        assert_eq!(m.predict(&ds).unwrap(), m.regressors.0.predict(ds.view(0)).unwrap());
    }

    #[test]
    fn too_few_labels_rejected() {
        let ds = line_views(&[0.0, 1.0, 2.0], vec![1.0, UNLABELED, UNLABELED]);
        assert!(matches!(cotrain_regressor_fit(&ds, &CoRegParams::default()), Err(MvError::NoLabeled(_))));
    }

    #[test]
    fn labeled_sets_grow_monotonically() {
        let x: Vec<f64> = (0..60).map(|i| i as f64 * 0.1).collect();
        let y: Vec<f64> = x
            .iter()
            .enumerate()
            .map(|(i, v)| if i % 6 == 0 { v.sin() } else { UNLABELED })
            .collect();
        let ds = line_views(&x, y);
        let m = cotrain_regressor_fit(&ds, &CoRegParams::default()).unwrap();
        let added: usize = m.trace.iter().map(|r| r.added).sum();
        assert_eq!(m.labeled.0.len() + m.labeled.1.len(), 2 * m.n_initial + added);
        for set in [&m.labeled.0, &m.labeled.1] {
            let mut s = set.clone();
            s.sort_unstable();
            s.dedup();
            assert_eq!(s.len(), set.len());
        }
    }
}
