//! Joint and individual variation (AJIVE), group PCA and group ICA.

mod ajive;
mod group;

pub use ajive::{ajive_fit, AjiveParams, AjiveResult, BindingBound};
pub use group::{group_ica_fit, group_pca_fit_transform, GroupIcaParams, GroupPcaResult, IcaResult};
