//! Multiview data model and validation.
//!
//! A dataset is an ordered list of views that share their rows: row `i` of every
//! view describes sample `i`. Views may have different widths.

use nalgebra::{DMatrix, DVector};

use crate::error::{MvError, Result};
use crate::scalar::Real;

/// Marker for an unlabeled sample in a label vector.
pub const UNLABELED: f64 = f64::NAN;

#[inline]
pub fn is_unlabeled(y: f64) -> bool {
    y.is_nan()
}

/// One view: a samples × features matrix with optional column names.
#[derive(Debug, Clone, PartialEq)]
pub struct ViewMatrix<T: Real> {
    pub data: DMatrix<T>,
    pub feature_names: Option<Vec<String>>,
}

impl<T: Real> ViewMatrix<T> {
    pub fn new(data: DMatrix<T>) -> Self {
        Self {
            data,
            feature_names: None,
        }
    }

    pub fn with_names(data: DMatrix<T>, names: Vec<String>) -> Result<Self> {
        if names.len() != data.ncols() {
            return Err(MvError::ShapeMismatch(format!(
                "{} feature names for {} columns",
                names.len(),
                data.ncols()
            )));
        }
        Ok(Self {
            data,
            feature_names: Some(names),
        })
    }

    pub fn n_samples(&self) -> usize {
        self.data.nrows()
    }

    pub fn n_features(&self) -> usize {
        self.data.ncols()
    }
}

impl<T: Real> From<DMatrix<T>> for ViewMatrix<T> {
    fn from(data: DMatrix<T>) -> Self {
        Self::new(data)
    }
}

/// Validated views with matched samples and optional labels.
///
/// Labels are dense; unlabeled samples carry [`UNLABELED`].
#[derive(Debug, Clone, PartialEq)]
pub struct MultiviewDataset<T: Real> {
    views: Vec<ViewMatrix<T>>,
    labels: Option<Vec<f64>>,
    n_samples: usize,
}

/// Validates raw matrices into a dataset.
///
/// `require_k` pins the exact number of views; `min_samples` is a floor on the
/// shared row count.
pub fn validate_views<T: Real>(
    views: Vec<DMatrix<T>>,
    require_k: Option<usize>,
    min_samples: usize,
) -> Result<MultiviewDataset<T>> {
    MultiviewDataset::from_views(views.into_iter().map(ViewMatrix::new).collect(), None)?
        .checked(require_k, min_samples)
}

impl<T: Real> MultiviewDataset<T> {
    /// Builds a dataset, checking shapes, finiteness and label length.
    pub fn from_views(views: Vec<ViewMatrix<T>>, labels: Option<Vec<f64>>) -> Result<Self> {
        let first = views
            .first()
            .ok_or_else(|| MvError::EmptyInput("no views supplied".into()))?;
        let n = first.n_samples();
        for (v, view) in views.iter().enumerate() {
            if view.n_samples() == 0 || view.n_features() == 0 {
                return Err(MvError::EmptyInput(format!(
                    "view {v} has shape {}x{}",
                    view.n_samples(),
                    view.n_features()
                )));
            }
            if view.n_samples() != n {
                return Err(MvError::ShapeMismatch(format!(
                    "view 0 has {n} rows but view {v} has {}",
                    view.n_samples()
                )));
            }
            if let Some(names) = &view.feature_names {
                if names.len() != view.n_features() {
                    return Err(MvError::ShapeMismatch(format!(
                        "view {v}: {} feature names for {} columns",
                        names.len(),
                        view.n_features()
                    )));
                }
            }
            // column-major walk; report in (row, col) terms
            for (c, col) in view.data.column_iter().enumerate() {
                if let Some(r) = col.iter().position(|x| !x.is_finite()) {
                    return Err(MvError::NonFinite { view: v, row: r, col: c });
                }
            }
        }
        let ds = Self {
            views,
            labels: None,
            n_samples: n,
        };
        match labels {
            Some(y) => ds.with_labels(y),
            None => Ok(ds),
        }
    }

    /// Attaches labels. Entries must be finite or [`UNLABELED`].
    pub fn with_labels(mut self, labels: Vec<f64>) -> Result<Self> {
        if labels.len() != self.n_samples {
            return Err(MvError::ShapeMismatch(format!(
                "{} labels for {} samples",
                labels.len(),
                self.n_samples
            )));
        }
        if let Some(i) = labels.iter().position(|y| y.is_infinite()) {
            return Err(MvError::BadSpec(format!("label {i} is infinite")));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn without_labels(mut self) -> Self {
        self.labels = None;
        self
    }

    /// Re-checks view count and sample floor, returning an equal dataset.
    pub fn checked(self, require_k: Option<usize>, min_samples: usize) -> Result<Self> {
        if let Some(k) = require_k {
            self.require_views(k)?;
        }
        if self.n_samples < min_samples {
            return Err(MvError::TooFewSamples {
                needed: min_samples,
                got: self.n_samples,
            });
        }
        Ok(self)
    }

    /// Validates an existing dataset again; idempotent.
    pub fn revalidate(&self, require_k: Option<usize>, min_samples: usize) -> Result<Self> {
        Self::from_views(self.views.clone(), self.labels.clone())?.checked(require_k, min_samples)
    }

    pub fn require_views(&self, k: usize) -> Result<()> {
        if self.views.len() != k {
            return Err(MvError::ViewCount {
                expected: format!("exactly {k}"),
                got: self.views.len(),
            });
        }
        Ok(())
    }

    pub fn require_min_views(&self, k: usize) -> Result<()> {
        if self.views.len() < k {
            return Err(MvError::ViewCount {
                expected: format!("at least {k}"),
                got: self.views.len(),
            });
        }
        Ok(())
    }

    pub fn n_views(&self) -> usize {
        self.views.len()
    }

    pub fn n_samples(&self) -> usize {
        self.n_samples
    }

    pub fn view(&self, v: usize) -> &DMatrix<T> {
        &self.views[v].data
    }

    pub fn view_matrix(&self, v: usize) -> &ViewMatrix<T> {
        &self.views[v]
    }

    pub fn views(&self) -> impl Iterator<Item = &DMatrix<T>> {
        self.views.iter().map(|v| &v.data)
    }

    pub fn view_matrices(&self) -> &[ViewMatrix<T>] {
        &self.views
    }

    /// Feature counts per view.
    pub fn widths(&self) -> Vec<usize> {
        self.views.iter().map(|v| v.n_features()).collect()
    }

    pub fn labels(&self) -> Option<&[f64]> {
        self.labels.as_deref()
    }

    pub fn into_parts(self) -> (Vec<ViewMatrix<T>>, Option<Vec<f64>>) {
        (self.views, self.labels)
    }

    /// Checks that `self` has the view widths a model was trained on.
    pub fn require_widths(&self, widths: &[usize]) -> Result<()> {
        let got = self.widths();
        if got != widths {
            return Err(MvError::ShapeMismatch(format!(
                "model expects view widths {widths:?}, got {got:?}"
            )));
        }
        Ok(())
    }
}

/// Per-view centering and scaling statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct ViewScaling<T: Real> {
    pub means: DVector<T>,
    pub scales: DVector<T>,
    /// Columns with zero variance; their scale stays 1.
    pub degenerate: Vec<bool>,
}

impl<T: Real> ViewScaling<T> {
    pub fn apply(&self, m: &DMatrix<T>) -> DMatrix<T> {
        DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| {
            (m[(i, j)] - self.means[j]) / self.scales[j]
        })
    }

    pub fn invert(&self, m: &DMatrix<T>) -> DMatrix<T> {
        DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| {
            m[(i, j)] * self.scales[j] + self.means[j]
        })
    }

    pub fn any_degenerate(&self) -> bool {
        self.degenerate.iter().any(|&d| d)
    }
}

/// Centers and/or standardizes each view's columns.
///
/// Standard deviations use the `n - 1` denominator. Zero-variance columns keep
/// scale 1 and are flagged in the returned statistics.
pub fn center_scale<T: Real>(
    ds: &MultiviewDataset<T>,
    center: bool,
    unit_variance: bool,
) -> (MultiviewDataset<T>, Vec<ViewScaling<T>>) {
    let n = ds.n_samples();
    let nt = T::from_count(n);
    let mut stats = Vec::with_capacity(ds.n_views());
    let mut views = Vec::with_capacity(ds.n_views());
    for vm in &ds.views {
        let x = &vm.data;
        let d = x.ncols();
        let mut means = DVector::zeros(d);
        let mut scales = DVector::from_element(d, T::one());
        let mut degenerate = vec![false; d];
        for (j, col) in x.column_iter().enumerate() {
            let mean = col.sum() / nt;
            let ss = col.iter().fold(T::zero(), |a, &v| a + (v - mean) * (v - mean));
            let sd = if n > 1 {
                (ss / T::from_count(n - 1)).sqrt()
            } else {
                T::zero()
            };
            let magnitude = col.iter().fold(T::zero(), |a, &v| a.max(v.abs()));
            let is_flat = sd <= magnitude * T::eps() * T::lit(10.0);
            degenerate[j] = is_flat;
            if center {
                means[j] = mean;
            }
            if unit_variance && !is_flat {
                scales[j] = sd;
            }
        }
        let s = ViewScaling {
            means,
            scales,
            degenerate,
        };
        views.push(ViewMatrix {
            data: s.apply(x),
            feature_names: vm.feature_names.clone(),
        });
        stats.push(s);
    }
    let out = MultiviewDataset {
        views,
        labels: ds.labels.clone(),
        n_samples: n,
    };
    (out, stats)
}

/// Undoes [`center_scale`] using its recorded statistics.
pub fn invert_center_scale<T: Real>(
    ds: &MultiviewDataset<T>,
    stats: &[ViewScaling<T>],
) -> Result<MultiviewDataset<T>> {
    if stats.len() != ds.n_views() {
        return Err(MvError::ShapeMismatch(format!(
            "{} scalings for {} views",
            stats.len(),
            ds.n_views()
        )));
    }
    let views = ds
        .views
        .iter()
        .zip(stats)
        .map(|(vm, s)| ViewMatrix {
            data: s.invert(&vm.data),
            feature_names: vm.feature_names.clone(),
        })
        .collect();
    Ok(MultiviewDataset {
        views,
        labels: ds.labels.clone(),
        n_samples: ds.n_samples,
    })
}
