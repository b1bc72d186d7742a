use nalgebra::{DMatrix, DVector};

use crate::dataset::MultiviewDataset;
use crate::error::{MvError, Result};
use crate::estimator::{Fit, Transform};
use crate::linalg::{center_columns, fix_column_signs, lstsq, svd};
use crate::scalar::Real;

/// How many left singular vectors each view keeps before the joint SVD.
#[derive(Debug, Clone, PartialEq)]
pub enum GccaRanks<T: Real> {
    /// Smallest rank whose cumulative squared singular values reach this
    /// fraction of the total.
    VarianceFraction(T),
    Explicit(Vec<usize>),
}

/// Generalized CCA: per-view SVD compression followed by an SVD of the
/// stacked per-view bases.
///
/// The per-view stage is independent across views ([`gcca_view_basis`]);
/// [`gcca_joint_from_bases`] combines the results.
#[derive(Debug, Clone)]
pub struct Gcca<T: Real> {
    pub n_components: usize,
    pub ranks: GccaRanks<T>,
}

impl<T: Real> Gcca<T> {
    pub fn new(n_components: usize) -> Self {
        Self {
            n_components,
            ranks: GccaRanks::VarianceFraction(T::lit(0.999)),
        }
    }

    pub fn ranks(mut self, ranks: GccaRanks<T>) -> Self {
        self.ranks = ranks;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GccaModel<T: Real> {
    /// Per-view orthonormal bases `U_v`, `n × r_v`.
    pub bases: Vec<DMatrix<T>>,
    pub ranks: Vec<usize>,
    /// Joint projection with orthonormal columns, `n × r`.
    pub joint: DMatrix<T>,
    /// Leading singular values of the stacked bases.
    pub singular_values: DVector<T>,
    /// Least-squares maps from each centered view onto `joint`, `d_v × r`.
    pub projections: Vec<DMatrix<T>>,
    pub means: Vec<DVector<T>>,
}

impl<T: Real> Transform<T> for GccaModel<T> {
    type Output = Vec<DMatrix<T>>;

    fn transform(&self, ds: &MultiviewDataset<T>) -> Result<Vec<DMatrix<T>>> {
        let widths: Vec<usize> = self.projections.iter().map(|p| p.nrows()).collect();
        ds.require_widths(&widths)?;
        Ok(ds
            .views()
            .zip(self.projections.iter().zip(&self.means))
            .map(|(x, (p, mean))| {
                let mut xc = x.clone();
                for (j, mut col) in xc.column_iter_mut().enumerate() {
                    col.add_scalar_mut(-mean[j]);
                }
                xc * p
            })
            .collect())
    }
}

/// Per-view stage: centers the view and keeps its leading left singular vectors.
///
/// `explicit_rank` overrides the variance-fraction rule.
pub fn gcca_view_basis<T: Real>(
    x: &DMatrix<T>,
    fraction: T,
    explicit_rank: Option<usize>,
) -> Result<(DMatrix<T>, DVector<T>)> {
    let (xc, mean) = center_columns(x);
    let dec = svd(&xc)?;
    let energy: Vec<T> = dec.s.iter().map(|&s| s * s).collect();
    let total = energy.iter().fold(T::zero(), |a, &b| a + b);
    if total <= T::zero() {
        return Err(MvError::numerical("gcca", "view has zero variance"));
    }
    let rank = match explicit_rank {
        Some(r) => {
            let numeric = dec.rank(T::eps() * T::from_count(x.nrows().max(x.ncols()) * 10));
            if r == 0 || r > numeric {
                return Err(MvError::Rank(format!(
                    "explicit rank {r} exceeds the view's numerical rank {numeric}"
                )));
            }
            r
        }
        None => {
            let mut acc = T::zero();
            let mut r = energy.len();
            for (i, e) in energy.iter().enumerate() {
                acc += *e;
                if acc >= fraction * total {
                    r = i + 1;
                    break;
                }
            }
            r
        }
    };
    Ok((dec.u.columns(0, rank).into_owned(), mean))
}

/// Joint stage: top-`r` left singular vectors of `[U_1 … U_k]`.
pub fn gcca_joint_from_bases<T: Real>(bases: &[DMatrix<T>], r: usize) -> Result<(DMatrix<T>, DVector<T>)> {
    let n = bases[0].nrows();
    let width: usize = bases.iter().map(|b| b.ncols()).sum();
    if r == 0 || r > width.min(n) {
        return Err(MvError::Rank(format!(
            "n_components {r} must lie in [1, {}]",
            width.min(n)
        )));
    }
    let mut stacked = DMatrix::zeros(n, width);
    let mut offset = 0;
    for b in bases {
        stacked.columns_mut(offset, b.ncols()).copy_from(b);
        offset += b.ncols();
    }
    let dec = svd(&stacked)?;
    let mut g = dec.u.columns(0, r).into_owned();
    fix_column_signs(&mut g);
    Ok((g, dec.s.rows(0, r).into_owned()))
}

impl<T: Real> Fit<T> for Gcca<T> {
    type Model = GccaModel<T>;

    fn fit(&self, ds: &MultiviewDataset<T>) -> Result<GccaModel<T>> {
        ds.require_min_views(2)?;
        let k = ds.n_views();
        let (fraction, explicit) = match &self.ranks {
            GccaRanks::VarianceFraction(f) => {
                if !(*f > T::zero() && *f <= T::one()) {
                    return Err(MvError::BadParams("variance fraction must lie in (0, 1]".into()));
                }
                (*f, None)
            }
            GccaRanks::Explicit(r) => {
                if r.len() != k {
                    return Err(MvError::BadParams(format!("{} ranks for {k} views", r.len())));
                }
                (T::one(), Some(r.clone()))
            }
        };
        let per_view: Vec<(DMatrix<T>, DVector<T>)> = ds
            .views()
            .enumerate()
            .map(|(v, x)| gcca_view_basis(x, fraction, explicit.as_ref().map(|r| r[v])))
            .collect::<Result<_>>()?;
        let (bases, means): (Vec<_>, Vec<_>) = per_view.into_iter().unzip();
        let (joint, singular_values) = gcca_joint_from_bases(&bases, self.n_components)?;
        let projections = ds
            .views()
            .map(|x| lstsq(&center_columns(x).0, &joint))
            .collect::<Result<Vec<_>>>()?;
        Ok(GccaModel {
            ranks: bases.iter().map(|b| b.ncols()).collect(),
            bases,
            joint,
            singular_values,
            projections,
            means,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::validate_views;
    use crate::linalg::max_principal_angle;
    use crate::random::{gaussian_matrix, seeded};

    #[test]
    fn joint_is_orthonormal() {
        let mut rng = seeded(30);
        let views: Vec<DMatrix<f64>> = (0..3).map(|_| gaussian_matrix(&mut rng, 50, 4, 1.0)).collect();
        let ds = validate_views(views, None, 1).unwrap();
        let m = Gcca::new(3).fit(&ds).unwrap();
        let gram = m.joint.tr_mul(&m.joint);
        assert!((gram - DMatrix::identity(3, 3)).amax() < 1e-8);
    }

    #[test]
    fn identical_views_recover_view_basis() {
        let mut rng = seeded(31);
        let x: DMatrix<f64> = gaussian_matrix(&mut rng, 40, 5, 1.0);
        let ds = validate_views(vec![x.clone(), x.clone(), x.clone()], None, 1).unwrap();
        // per-view rank equal to r; with larger ranks the stacked spectrum is flat
        let m = Gcca::new(2).ranks(GccaRanks::Explicit(vec![2, 2, 2])).fit(&ds).unwrap();
        let top = svd(&center_columns(&x).0).unwrap().u.columns(0, 2).into_owned();
        assert!(max_principal_angle(&m.joint, &top).unwrap() < 1e-8);
    }

    #[test]
    fn per_view_stage_is_order_independent() {
        let mut rng = seeded(32);
        let views: Vec<DMatrix<f64>> = (0..3).map(|_| gaussian_matrix(&mut rng, 30, 4, 1.0)).collect();
        let forward: Vec<DMatrix<f64>> = views
            .iter()
            .map(|x| gcca_view_basis(x, 0.999, None).unwrap().0)
            .collect();
        let mut backward: Vec<DMatrix<f64>> = views
            .iter()
            .rev()
            .map(|x| gcca_view_basis(x, 0.999, None).unwrap().0)
            .collect();
        backward.reverse();
        let a = gcca_joint_from_bases(&forward, 3).unwrap();
        let b = gcca_joint_from_bases(&backward, 3).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn variance_fraction_picks_smallest_rank() {
        // rank-2 data padded with a tiny third direction
        let mut rng = seeded(33);
        let z: DMatrix<f64> = gaussian_matrix(&mut rng, 100, 2, 1.0);
        let a: DMatrix<f64> = gaussian_matrix(&mut rng, 2, 6, 1.0);
        let x = &z * a + gaussian_matrix::<f64>(&mut rng, 100, 6, 1e-4);
        let (u, _) = gcca_view_basis(&x, 0.999, None).unwrap();
        assert_eq!(u.ncols(), 2);
        assert!(matches!(gcca_view_basis(&x, 0.999, Some(7)), Err(MvError::Rank(_))));
    }
}
