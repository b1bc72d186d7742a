//! Evaluation metrics: adjusted Rand index, accuracy, RMSE, Amari distance.

use std::collections::HashMap;

use nalgebra::DMatrix;

use crate::error::{MvError, Result};

/// Adjusted Rand index between two labelings of the same samples.
///
/// Equals 1 exactly when the partitions agree up to relabeling. Two trivial
/// partitions (one cluster each, or all singletons in both) also score 1.
pub fn adjusted_rand_index(a: &[usize], b: &[usize]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(MvError::LengthMismatch(a.len(), b.len()));
    }
    if a.len() < 2 {
        return Err(MvError::TooFewSamples {
            needed: 2,
            got: a.len(),
        });
    }
    let mut table: HashMap<(usize, usize), u64> = HashMap::new();
    let mut rows: HashMap<usize, u64> = HashMap::new();
    let mut cols: HashMap<usize, u64> = HashMap::new();
    for (&x, &y) in a.iter().zip(b) {
        *table.entry((x, y)).or_default() += 1;
        *rows.entry(x).or_default() += 1;
        *cols.entry(y).or_default() += 1;
    }
    let comb2 = |k: u64| (k * k.saturating_sub(1) / 2) as f64;
    let index: f64 = table.values().map(|&c| comb2(c)).sum();
    let sum_rows: f64 = rows.values().map(|&c| comb2(c)).sum();
    let sum_cols: f64 = cols.values().map(|&c| comb2(c)).sum();
    let total = comb2(a.len() as u64);
    let expected = sum_rows * sum_cols / total;
    let max_index = 0.5 * (sum_rows + sum_cols);
    if max_index == expected {
        return Ok(1.0);
    }
    Ok((index - expected) / (max_index - expected))
}

/// Fraction of positions where `pred` equals `truth`.
pub fn accuracy(pred: &[f64], truth: &[f64]) -> Result<f64> {
    if pred.len() != truth.len() {
        return Err(MvError::LengthMismatch(pred.len(), truth.len()));
    }
    if pred.is_empty() {
        return Err(MvError::EmptyInput("accuracy of zero samples".into()));
    }
    let hits = pred.iter().zip(truth).filter(|(p, t)| p == t).count();
    Ok(hits as f64 / pred.len() as f64)
}

pub fn rmse(pred: &[f64], truth: &[f64]) -> Result<f64> {
    if pred.len() != truth.len() {
        return Err(MvError::LengthMismatch(pred.len(), truth.len()));
    }
    if pred.is_empty() {
        return Err(MvError::EmptyInput("rmse of zero samples".into()));
    }
    let ss: f64 = pred.iter().zip(truth).map(|(p, t)| (p - t) * (p - t)).sum();
    Ok((ss / pred.len() as f64).sqrt())
}

/// Maps real-valued class labels to dense indices `0..k` in ascending order.
pub fn encode_labels(y: &[f64]) -> (Vec<usize>, Vec<f64>) {
    let mut classes: Vec<f64> = y.iter().copied().filter(|v| !v.is_nan()).collect();
    classes.sort_by(|a, b| a.partial_cmp(b).expect("labels are not NaN"));
    classes.dedup();
    let idx = y
        .iter()
        .map(|v| classes.iter().position(|c| c == v).unwrap_or(usize::MAX))
        .collect();
    (idx, classes)
}

/// Amari distance of a square matrix `p = W·A` (estimated unmixing times true
/// mixing) from a scaled permutation, normalized to `[0, 1]`.
pub fn amari_distance(p: &DMatrix<f64>) -> Result<f64> {
    let c = p.nrows();
    if c != p.ncols() || c < 2 {
        return Err(MvError::ShapeMismatch(format!("need a square matrix of size >= 2, got {}x{}", c, p.ncols())));
    }
    let a = p.abs();
    let mut total = 0.0;
    for i in 0..c {
        let row = a.row(i);
        total += row.sum() / row.max() - 1.0;
        let col = a.column(i);
        total += col.sum() / col.max() - 1.0;
    }
    Ok(total / (2.0 * c as f64 * (c as f64 - 1.0)))
}
