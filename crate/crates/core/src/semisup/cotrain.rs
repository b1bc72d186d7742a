//! Blum–Mitchell co-training for binary classification.

use nalgebra::DMatrix;
use rand::seq::SliceRandom;

use super::learners::ProbabilisticClassifier;
use crate::dataset::{is_unlabeled, MultiviewDataset};
use crate::error::{MvError, Result};
use crate::estimator::Predict;
use crate::metrics::encode_labels;
use crate::random::seeded;
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct CoTrainParams {
    /// Positives each learner labels per round.
    pub p: usize,
    /// Negatives each learner labels per round.
    pub n: usize,
    pub pool_size: usize,
    pub max_rounds: usize,
    pub seed: u64,
}

impl Default for CoTrainParams {
    fn default() -> Self {
        Self {
            p: 1,
            n: 1,
            pool_size: 75,
            max_rounds: 30,
            seed: 0,
        }
    }
}

impl CoTrainParams {
    pub fn validate(&self) -> Result<()> {
        if self.p == 0 || self.n == 0 {
            return Err(MvError::BadParams("p and n must be at least 1".into()));
        }
        if self.pool_size < self.p + self.n {
            return Err(MvError::BadParams(format!(
                "pool_size {} is smaller than p + n = {}",
                self.pool_size,
                self.p + self.n
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoTrainRound {
    pub added: usize,
    pub refilled: usize,
}

#[derive(Debug, Clone)]
pub struct CoTrainModel<C1, C2> {
    pub learners: (C1, C2),
    /// Original label values of class indices 0 and 1.
    pub classes: [f64; 2],
    /// Initially labeled samples first, then additions in round order.
    pub labeled: Vec<usize>,
    pub n_initial: usize,
    /// Class index assigned to each entry of `labeled`.
    pub assigned: Vec<usize>,
    pub trace: Vec<CoTrainRound>,
    widths: [usize; 2],
}

/// Row-wise arithmetic mean of two probability tables.
pub fn combine_probabilities<T: Real>(a: &DMatrix<T>, b: &DMatrix<T>) -> DMatrix<T> {
    (a + b) / T::lit(2.0)
}

fn train_pair<T, C1, C2>(
    ds: &MultiviewDataset<T>,
    c1: &mut C1,
    c2: &mut C2,
    idx: &[usize],
    y: &[usize],
) -> Result<()>
where
    T: Real,
    C1: ProbabilisticClassifier<T>,
    C2: ProbabilisticClassifier<T>,
{
    c1.train(&ds.view(0).select_rows(idx.iter()), y)?;
    c2.train(&ds.view(1).select_rows(idx.iter()), y)
}

/// Picks the `count` pool members with highest probability of `class`,
/// skipping those already chosen this round.
fn most_confident<T: Real>(
    pool: &[usize],
    proba: &DMatrix<T>,
    class: usize,
    count: usize,
    taken: &[(usize, usize)],
) -> Vec<usize> {
    let mut order: Vec<usize> = (0..pool.len()).collect();
    order.sort_by(|&a, &b| {
        proba[(b, class)]
            .partial_cmp(&proba[(a, class)])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(pool[a].cmp(&pool[b]))
    });
    order
        .into_iter()
        .map(|i| pool[i])
        .filter(|s| !taken.iter().any(|(t, _)| t == s))
        .take(count)
        .collect()
}

/// Fits two classifiers, one per view, growing a shared labeled set.
///
/// Class indices follow ascending label value. With no unlabeled samples
/// the loop runs zero rounds and each learner is trained once on all rows.
pub fn cotrain_classifier_fit<T, C1, C2>(
    ds: &MultiviewDataset<T>,
    learners: (C1, C2),
    params: &CoTrainParams,
) -> Result<CoTrainModel<C1, C2>>
where
    T: Real,
    C1: ProbabilisticClassifier<T>,
    C2: ProbabilisticClassifier<T>,
{
    ds.require_views(2)?;
    params.validate()?;
    let y = ds
        .labels()
        .ok_or_else(|| MvError::NoLabeled("dataset has no label vector".into()))?;
    let (codes, classes) = encode_labels(y);
    if classes.len() > 2 {
        return Err(MvError::NotBinary(classes.len()));
    }
    if classes.len() < 2 {
        return Err(MvError::NoLabeled("both classes need at least one labeled sample".into()));
    }

    let mut labeled: Vec<usize> = (0..y.len()).filter(|&i| !is_unlabeled(y[i])).collect();
    let mut assigned: Vec<usize> = labeled.iter().map(|&i| codes[i]).collect();
    let n_initial = labeled.len();
    let mut unlabeled: Vec<usize> = (0..y.len()).filter(|&i| is_unlabeled(y[i])).collect();
    let mut rng = seeded(params.seed);
    unlabeled.shuffle(&mut rng);
    let take = params.pool_size.min(unlabeled.len());
    let mut pool: Vec<usize> = unlabeled.drain(..take).collect();

    let (mut c1, mut c2) = learners;
    let mut trace = Vec::new();
    while trace.len() < params.max_rounds && !pool.is_empty() {
        train_pair(ds, &mut c1, &mut c2, &labeled, &assigned)?;
        let mut chosen: Vec<(usize, usize)> = Vec::new();
        for v in 0..2 {
            let xs = ds.view(v).select_rows(pool.iter());
            let proba = if v == 0 { c1.predict_proba(&xs)? } else { c2.predict_proba(&xs)? };
            for s in most_confident(&pool, &proba, 1, params.p, &chosen) {
                chosen.push((s, 1));
            }
            for s in most_confident(&pool, &proba, 0, params.n, &chosen) {
                chosen.push((s, 0));
            }
        }
        for &(s, c) in &chosen {
            labeled.push(s);
            assigned.push(c);
        }
        pool.retain(|s| !chosen.iter().any(|(t, _)| t == s));
        let refill = (params.pool_size - pool.len()).min(unlabeled.len());
        pool.extend(unlabeled.drain(..refill));
        trace.push(CoTrainRound {
            added: chosen.len(),
            refilled: refill,
        });
    }
    train_pair(ds, &mut c1, &mut c2, &labeled, &assigned)?;
    Ok(CoTrainModel {
        learners: (c1, c2),
        classes: [classes[0], classes[1]],
        labeled,
        n_initial,
        assigned,
        trace,
        widths: [ds.view(0).ncols(), ds.view(1).ncols()],
    })
}

impl<C1, C2> CoTrainModel<C1, C2> {
    /// Mean of the two learners' class probabilities (`n × 2`).
    pub fn predict_proba<T>(&self, ds: &MultiviewDataset<T>) -> Result<DMatrix<T>>
    where
        T: Real,
        C1: ProbabilisticClassifier<T>,
        C2: ProbabilisticClassifier<T>,
    {
        ds.require_views(2)?;
        ds.require_widths(&self.widths)?;
        let a = self.learners.0.predict_proba(ds.view(0))?;
        let b = self.learners.1.predict_proba(ds.view(1))?;
        Ok(combine_probabilities(&a, &b))
    }
}

impl<T, C1, C2> Predict<T> for CoTrainModel<C1, C2>
where
    T: Real,
    C1: ProbabilisticClassifier<T>,
    C2: ProbabilisticClassifier<T>,
{
    type Output = Vec<f64>;

    /// Original label values; ties go to the lower class.
    fn predict(&self, ds: &MultiviewDataset<T>) -> Result<Vec<f64>> {
        let proba = self.predict_proba(ds)?;
        Ok((0..proba.nrows())
            .map(|i| {
                if proba[(i, 1)] > proba[(i, 0)] {
                    self.classes[1]
                } else {
                    self.classes[0]
                }
            })
            .collect())
    }
}
