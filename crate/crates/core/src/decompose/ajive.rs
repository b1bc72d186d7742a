//! Angle-based joint and individual variation explained, for two views.

use nalgebra::DMatrix;

use crate::dataset::MultiviewDataset;
use crate::error::{MvError, Result};
use crate::linalg::{center_columns, svd};
use crate::random::{gaussian_matrix, orthonormal_matrix, substream, Rng};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct AjiveParams {
    pub initial_ranks: Vec<usize>,
    pub n_resamples: usize,
    pub quantile: f64,
    pub seed: u64,
}

impl AjiveParams {
    pub fn new(initial_ranks: Vec<usize>) -> Self {
        Self {
            initial_ranks,
            n_resamples: 500,
            quantile: 0.95,
            seed: 0,
        }
    }

    pub fn n_resamples(mut self, n: usize) -> Self {
        self.n_resamples = n;
        self
    }

    pub fn quantile(mut self, q: f64) -> Self {
        self.quantile = q;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// Which of the two thresholds decided the joint rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BindingBound {
    Wedin,
    RandomDirection,
}

#[derive(Debug, Clone)]
pub struct AjiveResult<T: Real> {
    pub joint_rank: usize,
    /// `n × joint_rank`, orthonormal columns.
    pub common_scores: DMatrix<T>,
    pub joint: Vec<DMatrix<T>>,
    pub individual: Vec<DMatrix<T>>,
    pub residual: Vec<DMatrix<T>>,
    pub individual_ranks: Vec<usize>,
    pub means: Vec<DMatrix<T>>,
    /// Squared singular values of the stacked score bases, descending.
    pub stacked_sq_singular_values: Vec<f64>,
    pub wedin_threshold: f64,
    pub random_threshold: f64,
    pub binding: BindingBound,
}

/// Linear-interpolation quantile of unsorted samples.
fn quantile(samples: &mut [f64], q: f64) -> f64 {
    samples.sort_by(|a, b| a.partial_cmp(b).expect("finite samples"));
    let pos = q * (samples.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    samples[lo] + (pos - lo as f64) * (samples[hi] - samples[lo])
}

/// Random orthonormal columns (up to `r`) in the orthogonal complement of
/// the orthonormal basis `basis`.
fn complement_draw<T: Real>(rng: &mut Rng, basis: &DMatrix<T>, r: usize) -> Option<DMatrix<T>> {
    let dim = basis.nrows();
    let cols = r.min(dim - basis.ncols());
    if cols == 0 {
        return None;
    }
    let g: DMatrix<T> = gaussian_matrix(rng, dim, cols, 1.0);
    let p = &g - basis * basis.tr_mul(&g);
    Some(p.qr().q())
}

fn spectral_norm<T: Real>(m: &DMatrix<T>) -> Result<f64> {
    Ok(svd(m)?.s[0].as_f64())
}

struct ViewSignal<T: Real> {
    centered: DMatrix<T>,
    means: DMatrix<T>,
    u: DMatrix<T>,
    v: DMatrix<T>,
    resid: DMatrix<T>,
    sigma_r: f64,
    initial_energy: T,
}

fn view_signal<T: Real>(x: &DMatrix<T>, r: usize, view: usize) -> Result<ViewSignal<T>> {
    let (n, d) = x.shape();
    if r == 0 || r > n.min(d) {
        return Err(MvError::Rank(format!("initial rank {r} for view {view} must lie in 1..={}", n.min(d))));
    }
    let (centered, means) = center_columns(x);
    if centered.amax() == T::zero() {
        return Err(MvError::DegenerateInput(format!("view {view} has zero variance")));
    }
    let dec = svd(&centered)?;
    if r > dec.s.len() || dec.s[r - 1] <= dec.s[0] * T::eps() * T::from_count(n.max(d)) {
        return Err(MvError::Rank(format!("view {view} has numerical rank below {r}")));
    }
    let u = dec.u.columns(0, r).into_owned();
    let v = dec.vt.rows(0, r).transpose();
    let s = DMatrix::from_diagonal(&dec.s.rows(0, r).into_owned());
    let resid = &centered - &u * s * v.transpose();
    let initial_energy = dec.s.rows(0, r).iter().fold(T::zero(), |a, &x| a + x * x);
    Ok(ViewSignal {
        sigma_r: dec.s[r - 1].as_f64(),
        means: DMatrix::from_row_slice(1, means.len(), means.as_slice()),
        centered,
        u,
        v,
        resid,
        initial_energy,
    })
}

/// Splits each centered view into joint, individual and residual parts.
///
/// The joint rank counts squared singular values of the stacked score bases
/// above both the resampled Wedin threshold and the random-direction
/// threshold. Each threshold is the configured quantile of its samples, so a
/// higher quantile never yields a larger joint rank. Values within rounding
/// of the threshold count as exceeding it.
pub fn ajive_fit<T: Real>(ds: &MultiviewDataset<T>, params: &AjiveParams) -> Result<AjiveResult<T>> {
    ds.require_views(2)?;
    if params.initial_ranks.len() != 2 {
        return Err(MvError::BadParams(format!(
            "expected 2 initial ranks, got {}",
            params.initial_ranks.len()
        )));
    }
    if params.n_resamples == 0 || !(0.0..=1.0).contains(&params.quantile) {
        return Err(MvError::BadParams("n_resamples must be positive and quantile in [0, 1]".into()));
    }
    let n = ds.n_samples();
    let k = 2.0;
    let sig: Vec<ViewSignal<T>> = (0..2)
        .map(|v| view_signal(ds.view(v), params.initial_ranks[v], v))
        .collect::<Result<_>>()?;

    let mut wedin = Vec::with_capacity(params.n_resamples);
    let mut rand_dir = Vec::with_capacity(params.n_resamples);
    for b in 0..params.n_resamples {
        let mut rng = substream(params.seed, b as u64);
        let mut sum_sin2 = 0.0;
        for s in &sig {
            let r = s.u.ncols();
            let right = match complement_draw(&mut rng, &s.v, r) {
                Some(q) => spectral_norm(&(&s.resid * q))?,
                None => 0.0,
            };
            let left = match complement_draw(&mut rng, &s.u, r) {
                Some(q) => spectral_norm(&(s.resid.tr_mul(&q)))?,
                None => 0.0,
            };
            let sin = (right.max(left) / s.sigma_r).min(1.0);
            sum_sin2 += sin * sin;
        }
        wedin.push(k - sum_sin2);

        let mut rng = substream(params.seed, (params.n_resamples + b) as u64);
        let r1 = sig[0].u.ncols();
        let r2 = sig[1].u.ncols();
        let mut m = DMatrix::<T>::zeros(n, r1 + r2);
        m.columns_mut(0, r1).copy_from(&orthonormal_matrix::<T>(&mut rng, n, r1));
        m.columns_mut(r1, r2).copy_from(&orthonormal_matrix::<T>(&mut rng, n, r2));
        let s0 = spectral_norm(&m)?;
        rand_dir.push(s0 * s0);
    }
    let wedin_threshold = quantile(&mut wedin, params.quantile);
    let random_threshold = quantile(&mut rand_dir, params.quantile);
    let (threshold, binding) = if wedin_threshold >= random_threshold {
        (wedin_threshold, BindingBound::Wedin)
    } else {
        (random_threshold, BindingBound::RandomDirection)
    };

    let r1 = sig[0].u.ncols();
    let r2 = sig[1].u.ncols();
    let mut stacked = DMatrix::<T>::zeros(n, r1 + r2);
    stacked.columns_mut(0, r1).copy_from(&sig[0].u);
    stacked.columns_mut(r1, r2).copy_from(&sig[1].u);
    let dec = svd(&stacked)?;
    let sq: Vec<f64> = dec.s.iter().map(|s| s.as_f64() * s.as_f64()).collect();
    let slack = 64.0 * T::eps().as_f64() * k;
    let joint_rank = sq
        .iter()
        .take_while(|&&v| v > threshold - slack)
        .count()
        .min(r1.min(r2));
    let g = dec.u.columns(0, joint_rank).into_owned();

    let mut joint = Vec::new();
    let mut individual = Vec::new();
    let mut residual = Vec::new();
    let mut individual_ranks = Vec::new();
    for s in &sig {
        let j = &g * g.tr_mul(&s.centered);
        let rest = &s.centered - &j;
        let joint_energy = j.norm_squared();
        let target = s.initial_energy - joint_energy;
        let cap = s.u.ncols() - joint_rank;
        let (ind, rank) = if cap == 0 || target <= s.initial_energy * T::lit(1e-12) {
            (DMatrix::zeros(n, s.centered.ncols()), 0)
        } else {
            let rd = svd(&rest)?;
            let goal = target * T::lit(0.95);
            let mut acc = T::zero();
            let mut rank = 0;
            while rank < cap && rank < rd.s.len() && acc < goal {
                acc += rd.s[rank] * rd.s[rank];
                rank += 1;
            }
            let mut ind = DMatrix::zeros(n, s.centered.ncols());
            for c in 0..rank {
                ind += rd.u.column(c) * rd.vt.row(c) * rd.s[c];
            }
            (ind, rank)
        };
        residual.push(&rest - &ind);
        joint.push(j);
        individual.push(ind);
        individual_ranks.push(rank);
    }

    Ok(AjiveResult {
        joint_rank,
        common_scores: g,
        joint,
        individual,
        residual,
        individual_ranks,
        means: sig.iter().map(|s| s.means.clone()).collect(),
        stacked_sq_singular_values: sq,
        wedin_threshold,
        random_threshold,
        binding,
    })
}
