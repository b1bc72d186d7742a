//! Joint embeddings: the CCA family, multiview MDS and omnibus embedding.

mod cca;
mod gcca;
mod kernel;
mod kmcca;
mod mcca;
mod mvmds;
mod omnibus;

pub use cca::{Cca, CcaModel};
pub use gcca::{gcca_joint_from_bases, gcca_view_basis, Gcca, GccaModel, GccaRanks};
pub use kernel::{center_gram, Kernel, KernelSpec};
pub use kmcca::{Kmcca, KmccaModel};
pub use mcca::Mcca;
pub use mvmds::{classical_mds, mvmds_fit_transform, MvmdsResult};
pub use omnibus::{omnibus_fit_transform, omnibus_matrix, Distance, OmnibusResult};

use nalgebra::DMatrix;

use crate::scalar::Real;

/// Mean Pearson correlation of column `j` across every pair of score matrices.
pub(crate) fn mean_pairwise_correlation<T: Real>(scores: &[DMatrix<T>], j: usize) -> T {
    let mut acc = T::zero();
    let mut pairs = 0usize;
    for a in 0..scores.len() {
        for b in (a + 1)..scores.len() {
            acc += pearson(&scores[a].column(j), &scores[b].column(j));
            pairs += 1;
        }
    }
    acc / T::from_count(pairs.max(1))
}

pub(crate) fn pearson<T: Real>(
    a: &nalgebra::DVectorView<'_, T>,
    b: &nalgebra::DVectorView<'_, T>,
) -> T {
    let n = T::from_count(a.len());
    let ma = a.sum() / n;
    let mb = b.sum() / n;
    let mut sab = T::zero();
    let mut saa = T::zero();
    let mut sbb = T::zero();
    for (&x, &y) in a.iter().zip(b.iter()) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
    }
    if saa <= T::zero() || sbb <= T::zero() {
        return T::zero();
    }
    sab / (saa * sbb).sqrt()
}
