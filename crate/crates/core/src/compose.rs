//! Building views from a single matrix, and merging or splitting views.

use nalgebra::DMatrix;

use crate::dataset::{MultiviewDataset, ViewMatrix};
use crate::error::{MvError, Result};
use crate::random::{gaussian_matrix, seeded};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubspaceSpec {
    pub n_views: usize,
    pub subset_size: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProjectionSpec {
    pub n_views: usize,
    pub n_components: usize,
    pub seed: u64,
}

/// Views drawn as random column subsets, with the chosen indices.
#[derive(Debug, Clone)]
pub struct SubspaceViews<T: Real> {
    pub dataset: MultiviewDataset<T>,
    /// Column indices of the source matrix used by each view, in view column order.
    pub indices: Vec<Vec<usize>>,
}

/// Draws `n_views` column subsets of size `subset_size`.
///
/// Sampling is without replacement inside a view and independent across views,
/// so different views may share columns.
pub fn random_subspace<T: Real>(x: &ViewMatrix<T>, spec: SubspaceSpec) -> Result<SubspaceViews<T>> {
    let d = x.n_features();
    if spec.n_views == 0 {
        return Err(MvError::BadSpec("n_views must be at least 1".into()));
    }
    if spec.subset_size == 0 || spec.subset_size > d {
        return Err(MvError::BadSpec(format!(
            "subset_size {} must lie in [1, {d}]",
            spec.subset_size
        )));
    }
    let mut rng = seeded(spec.seed);
    let mut indices = Vec::with_capacity(spec.n_views);
    let mut views = Vec::with_capacity(spec.n_views);
    for _ in 0..spec.n_views {
        let cols = rand::seq::index::sample(&mut rng, d, spec.subset_size).into_vec();
        let data = x.data.select_columns(cols.iter());
        let names = x
            .feature_names
            .as_ref()
            .map(|n| cols.iter().map(|&c| n[c].clone()).collect());
        views.push(ViewMatrix {
            data,
            feature_names: names,
        });
        indices.push(cols);
    }
    Ok(SubspaceViews {
        dataset: MultiviewDataset::from_views(views, None)?,
        indices,
    })
}

/// Projects `x` through independent Gaussian matrices, one per view.
///
/// Entries are i.i.d. normal with variance `1 / n_components`, which keeps
/// squared norms unbiased.
pub fn random_gaussian_projection<T: Real>(
    x: &ViewMatrix<T>,
    spec: ProjectionSpec,
) -> Result<MultiviewDataset<T>> {
    if spec.n_views == 0 || spec.n_components == 0 {
        return Err(MvError::BadSpec(
            "n_views and n_components must be at least 1".into(),
        ));
    }
    let mut rng = seeded(spec.seed);
    let std = (1.0 / spec.n_components as f64).sqrt();
    let views = (0..spec.n_views)
        .map(|_| {
            let r: DMatrix<T> = gaussian_matrix(&mut rng, x.n_features(), spec.n_components, std);
            ViewMatrix::new(&x.data * r)
        })
        .collect();
    MultiviewDataset::from_views(views, None)
}

/// Concatenates all views column-wise in view order.
pub fn concat_views<T: Real>(ds: &MultiviewDataset<T>) -> ViewMatrix<T> {
    let n = ds.n_samples();
    let width: usize = ds.widths().iter().sum();
    let mut data = DMatrix::zeros(n, width);
    let mut offset = 0;
    for v in ds.views() {
        data.columns_mut(offset, v.ncols()).copy_from(v);
        offset += v.ncols();
    }
    let names = if ds.view_matrices().iter().all(|v| v.feature_names.is_some()) {
        Some(
            ds.view_matrices()
                .iter()
                .flat_map(|v| v.feature_names.clone().unwrap_or_default())
                .collect(),
        )
    } else {
        None
    };
    ViewMatrix {
        data,
        feature_names: names,
    }
}

/// Splits columns into contiguous blocks at the given boundaries.
pub fn split_features<T: Real>(x: &ViewMatrix<T>, boundaries: &[usize]) -> Result<MultiviewDataset<T>> {
    let d = x.n_features();
    let mut prev = 0;
    for &b in boundaries {
        if b <= prev || b >= d {
            return Err(MvError::BadBoundaries(format!(
                "boundaries {boundaries:?} must be strictly increasing within (0, {d})"
            )));
        }
        prev = b;
    }
    let mut edges = Vec::with_capacity(boundaries.len() + 2);
    edges.push(0);
    edges.extend_from_slice(boundaries);
    edges.push(d);
    let views = edges
        .windows(2)
        .map(|w| ViewMatrix {
            data: x.data.columns(w[0], w[1] - w[0]).into_owned(),
            feature_names: x.feature_names.as_ref().map(|n| n[w[0]..w[1]].to_vec()),
        })
        .collect();
    MultiviewDataset::from_views(views, None)
}
