use nalgebra::{DMatrix, DVector};

use crate::dataset::MultiviewDataset;
use crate::error::{MvError, Result};
use crate::linalg::{fix_column_signs, pairwise_sq_dists, sym_eigen_by_magnitude};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Distance {
    #[default]
    Euclidean,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OmnibusResult<T: Real> {
    /// One `n × d_embed` block per view.
    pub embeddings: Vec<DMatrix<T>>,
    /// Signed eigenvalues used, ordered by magnitude.
    pub eigenvalues: DVector<T>,
}

/// `kn × kn` omnibus matrix: distance matrices on the diagonal, pairwise
/// averages `(A_v + A_u) / 2` off the diagonal.
pub fn omnibus_matrix<T: Real>(ds: &MultiviewDataset<T>, distance: Distance) -> DMatrix<T> {
    let n = ds.n_samples();
    let k = ds.n_views();
    let blocks: Vec<DMatrix<T>> = ds
        .views()
        .map(|x| match distance {
            Distance::Euclidean => pairwise_sq_dists(x).map(|d| d.sqrt()),
        })
        .collect();
    let half = T::lit(0.5);
    let mut m = DMatrix::zeros(k * n, k * n);
    for v in 0..k {
        for u in 0..k {
            let block = if u == v {
                blocks[v].clone()
            } else {
                (&blocks[v] + &blocks[u]) * half
            };
            m.view_mut((v * n, u * n), (n, n)).copy_from(&block);
        }
    }
    m
}

/// Joint spectral embedding of all views through the omnibus matrix.
///
/// Rows are eigenvectors scaled by `sqrt(|λ|)` for the `d_embed` eigenvalues
/// of largest magnitude, sliced back into one block per view.
pub fn omnibus_fit_transform<T: Real>(
    ds: &MultiviewDataset<T>,
    n_components: usize,
    distance: Distance,
) -> Result<OmnibusResult<T>> {
    ds.require_min_views(2)?;
    let n = ds.n_samples();
    if n < 3 {
        return Err(MvError::TooFewSamples { needed: 3, got: n });
    }
    let k = ds.n_views();
    if n_components == 0 || n_components > k * n {
        return Err(MvError::Rank(format!(
            "n_components {n_components} must lie in [1, {}]",
            k * n
        )));
    }
    let m = omnibus_matrix(ds, distance);
    let (vals, vecs) = sym_eigen_by_magnitude(&m);
    if vals.iter().any(|v| !v.is_finite()) {
        return Err(MvError::numerical("omnibus", "non-finite eigenvalues"));
    }
    let mut z = vecs.columns(0, n_components).into_owned();
    for j in 0..n_components {
        z.column_mut(j).scale_mut(vals[j].abs().sqrt());
    }
    fix_column_signs(&mut z);
    let embeddings = (0..k).map(|v| z.rows(v * n, n).into_owned()).collect();
    Ok(OmnibusResult {
        embeddings,
        eigenvalues: vals.rows(0, n_components).into_owned(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::validate_views;
    use crate::random::{gaussian_matrix, seeded};

    #[test]
    fn matrix_is_exactly_symmetric() {
        let mut rng = seeded(50);
        let views: Vec<DMatrix<f64>> = (0..3).map(|_| gaussian_matrix(&mut rng, 6, 2, 1.0)).collect();
        let ds = validate_views(views, None, 1).unwrap();
        let m = omnibus_matrix(&ds, Distance::Euclidean);
        assert_eq!((&m - m.transpose()).amax(), 0.0);
    }

    #[test]
    fn identical_views_share_embedding() {
        let mut rng = seeded(51);
        let x: DMatrix<f64> = gaussian_matrix(&mut rng, 12, 3, 1.0);
        let ds = validate_views(vec![x.clone(), x], None, 1).unwrap();
        let out = omnibus_fit_transform(&ds, 2, Distance::Euclidean).unwrap();
        assert!((&out.embeddings[0] - &out.embeddings[1]).amax() < 1e-8);
    }
}
