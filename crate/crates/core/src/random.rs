//! Seeded random draws. All randomness in the crate flows through here so a
//! fixed seed reproduces every result bit for bit.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::scalar::Real;

pub type Rng = ChaCha8Rng;

pub fn seeded(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream for a sub-task, keyed by `(seed, index)`.
pub fn substream(seed: u64, index: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn standard_normal(rng: &mut Rng) -> f64 {
    StandardNormal.sample(rng)
}

/// `rows × cols` matrix of i.i.d. normal entries with the given standard deviation.
pub fn gaussian_matrix<T: Real>(rng: &mut Rng, rows: usize, cols: usize, std: f64) -> DMatrix<T> {
    // filled row by row so the draw order does not depend on storage layout
    let mut out = DMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            out[(i, j)] = T::lit(std * standard_normal(rng));
        }
    }
    out
}

/// `rows × cols` matrix with orthonormal columns (QR of a Gaussian draw).
pub fn orthonormal_matrix<T: Real>(rng: &mut Rng, rows: usize, cols: usize) -> DMatrix<T> {
    assert!(cols <= rows, "cannot draw {cols} orthonormal columns in dimension {rows}");
    let g: DMatrix<T> = gaussian_matrix(rng, rows, cols, 1.0);
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    // sign-correct so the draw is Haar distributed
    for j in 0..cols {
        if r[(j, j)] < T::zero() {
            q.column_mut(j).neg_mut();
        }
    }
    q
}
