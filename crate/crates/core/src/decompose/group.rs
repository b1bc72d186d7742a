//! Group PCA and group ICA over concatenated per-view reductions.

use nalgebra::DMatrix;

use crate::dataset::MultiviewDataset;
use crate::error::{MvError, Result};
use crate::linalg::{center_columns, fix_column_signs, lstsq, svd};
use crate::random::{gaussian_matrix, seeded};
use crate::scalar::Real;

#[derive(Debug, Clone)]
pub struct GroupPcaResult<T: Real> {
    /// `n × n_components`, orthogonal columns.
    pub scores: DMatrix<T>,
    /// Per view, `d_v × n_components` with `X_v ≈ scores · loadingsᵀ`.
    pub loadings: Vec<DMatrix<T>>,
    pub singular_values: Vec<T>,
    pub means: Vec<DMatrix<T>>,
    pub individual_ranks: Vec<usize>,
}

fn reduce_view<T: Real>(x: &DMatrix<T>, r: usize) -> Result<DMatrix<T>> {
    let dec = svd(x)?;
    let mut out = dec.u.columns(0, r).into_owned();
    for c in 0..r {
        let s = dec.s[c];
        out.column_mut(c).scale_mut(s);
    }
    Ok(out)
}

/// PCA of the column-wise concatenation of per-view PCA scores.
///
/// `individual_ranks` defaults to `min(n, d_v)` per view. Score columns are
/// sign-fixed so each column's largest-magnitude entry is positive.
pub fn group_pca_fit_transform<T: Real>(
    ds: &MultiviewDataset<T>,
    individual_ranks: Option<&[usize]>,
    n_components: usize,
) -> Result<GroupPcaResult<T>> {
    let n = ds.n_samples();
    let ranks: Vec<usize> = match individual_ranks {
        Some(r) if r.len() != ds.n_views() => {
            return Err(MvError::BadParams(format!("{} ranks for {} views", r.len(), ds.n_views())))
        }
        Some(r) => r.to_vec(),
        None => ds.widths().iter().map(|&d| d.min(n)).collect(),
    };
    let mut centered = Vec::new();
    let mut means = Vec::new();
    for (v, x) in ds.views().enumerate() {
        if ranks[v] == 0 || ranks[v] > n.min(x.ncols()) {
            return Err(MvError::Rank(format!(
                "individual rank {} for view {v} must lie in 1..={}",
                ranks[v],
                n.min(x.ncols())
            )));
        }
        let (c, m) = center_columns(x);
        centered.push(c);
        means.push(DMatrix::from_row_slice(1, m.len(), m.as_slice()));
    }
    let total: usize = ranks.iter().sum();
    if n_components == 0 || n_components > total.min(n) {
        return Err(MvError::Rank(format!(
            "n_components {n_components} must lie in 1..={}",
            total.min(n)
        )));
    }
    let mut stacked = DMatrix::zeros(n, total);
    let mut at = 0;
    for (c, &r) in centered.iter().zip(&ranks) {
        stacked.columns_mut(at, r).copy_from(&reduce_view(c, r)?);
        at += r;
    }
    let dec = svd(&stacked)?;
    if n_components > dec.s.len() {
        return Err(MvError::Rank(format!("group rank is {}", dec.s.len())));
    }
    let mut scores = dec.u.columns(0, n_components).into_owned();
    for c in 0..n_components {
        let s = dec.s[c];
        scores.column_mut(c).scale_mut(s);
    }
    fix_column_signs(&mut scores);
    let loadings = centered
        .iter()
        .map(|c| lstsq(&scores, c).map(|l| l.transpose()))
        .collect::<Result<_>>()?;
    Ok(GroupPcaResult {
        scores,
        loadings,
        singular_values: dec.s.iter().take(n_components).copied().collect(),
        means,
        individual_ranks: ranks,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupIcaParams {
    pub individual_ranks: Option<Vec<usize>>,
    pub n_components: usize,
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
}

impl GroupIcaParams {
    pub fn new(n_components: usize) -> Self {
        Self {
            individual_ranks: None,
            n_components,
            tol: 1e-4,
            max_iter: 200,
            seed: 0,
        }
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

#[derive(Debug, Clone)]
pub struct IcaResult<T: Real> {
    /// `Σ d_v × c` map from concatenated centered views to sources.
    pub unmixing: DMatrix<T>,
    /// `n × c`, unit-variance columns.
    pub sources: DMatrix<T>,
    /// Per view, `d_v × c` with `X_v ≈ sources · mixingᵀ`.
    pub mixing: Vec<DMatrix<T>>,
    /// Rotation applied to the whitened group scores.
    pub rotation: DMatrix<T>,
    pub means: Vec<DMatrix<T>>,
    pub n_iter: usize,
    pub converged: bool,
}

/// Nearest orthogonal matrix: `(W Wᵀ)^{-1/2} W`.
fn sym_decorrelate<T: Real>(w: &DMatrix<T>) -> Result<DMatrix<T>> {
    let d = svd(w)?;
    Ok(d.u * d.vt)
}

/// Group PCA followed by symmetric FastICA with a tanh contrast.
///
/// Non-convergence is reported through `converged`; the last iterate is
/// still returned.
pub fn group_ica_fit<T: Real>(ds: &MultiviewDataset<T>, params: &GroupIcaParams) -> Result<IcaResult<T>> {
    let pca = group_pca_fit_transform(ds, params.individual_ranks.as_deref(), params.n_components)?;
    let n = ds.n_samples();
    if n < 2 {
        return Err(MvError::TooFewSamples { needed: 2, got: n });
    }
    let c = params.n_components;
    let floor = pca.singular_values[0] * T::eps() * T::from_count(n);
    if pca.singular_values[c - 1] <= floor {
        return Err(MvError::Rank(format!("group scores have rank below {c}")));
    }
    let sqrt_dof = T::from_count(n - 1).sqrt();
    let mut z = pca.scores.clone();
    for (j, &s) in pca.singular_values.iter().enumerate() {
        z.column_mut(j).scale_mut(sqrt_dof / s);
    }

    let mut rng = seeded(params.seed);
    let mut w = sym_decorrelate(&gaussian_matrix::<T>(&mut rng, c, c, 1.0))?;
    let inv_n = T::one() / T::from_count(n);
    let mut converged = false;
    let mut n_iter = 0;
    while n_iter < params.max_iter {
        n_iter += 1;
        let y = &z * w.transpose();
        let g = y.map(|v| v.tanh());
        let gp_mean: Vec<T> = (0..c)
            .map(|j| g.column(j).iter().fold(T::zero(), |a, &t| a + T::one() - t * t) * inv_n)
            .collect();
        let mut next = g.tr_mul(&z) * inv_n;
        for i in 0..c {
            let row = w.row(i) * gp_mean[i];
            let mut r = next.row_mut(i);
            r -= row;
        }
        let next = sym_decorrelate(&next)?;
        let lim = (0..c)
            .map(|i| (next.row(i).dot(&w.row(i)).abs() - T::one()).abs())
            .fold(T::zero(), |a, b| a.max(b));
        w = next;
        if lim.as_f64() < params.tol {
            converged = true;
            break;
        }
    }
    if !w.iter().all(|v| v.is_finite()) {
        return Err(MvError::numerical("fastica", "non-finite unmixing matrix"));
    }
    let sources = &z * w.transpose();

    let widths = ds.widths();
    let total: usize = widths.iter().sum();
    let mut concat = DMatrix::zeros(n, total);
    let mut at = 0;
    let mut mixing = Vec::new();
    for (x, d) in ds.views().zip(&widths) {
        let (cx, _) = center_columns(x);
        mixing.push(lstsq(&sources, &cx)?.transpose());
        concat.columns_mut(at, *d).copy_from(&cx);
        at += d;
    }
    let unmixing = lstsq(&concat, &sources)?;
    Ok(IcaResult {
        unmixing,
        sources,
        mixing,
        rotation: w,
        means: pca.means,
        n_iter,
        converged,
    })
}
