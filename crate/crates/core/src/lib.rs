//! Multiview learning toolkit.
//!
//! Every estimator consumes a [`MultiviewDataset`]: an ordered list of views
//! (sample × feature matrices) whose rows refer to the same samples. Views may
//! differ in width. Estimators are generic over the scalar type through
//! [`Real`]; the `*F64` aliases below cover the common case.
//!
//! Modules:
//! - [`dataset`], [`estimator`], [`metrics`]: data model, lifecycle, evaluation
//! - [`compose`]: view generation and merging
//! - [`embed`]: CCA, multiview CCA, kernel multiview CCA, GCCA, MVMDS, omnibus
//! - [`cluster`]: co-EM k-means variants, co-trained and co-regularized spectral
//! - [`semisup`]: co-training classification and regression
//! - [`decompose`]: AJIVE, group PCA and group ICA
//! - [`datasets`]: synthetic generator and on-disk format

pub mod cluster;
pub mod compose;
pub mod dataset;
pub mod datasets;
pub mod decompose;
pub mod embed;
pub mod error;
pub mod estimator;
pub mod linalg;
pub mod metrics;
pub mod random;
pub mod scalar;
pub mod semisup;

pub use dataset::{
    center_scale, invert_center_scale, is_unlabeled, validate_views, MultiviewDataset, ViewMatrix,
    ViewScaling, UNLABELED,
};
pub use error::{MvError, Result};
pub use estimator::{Estimator, Fit, FitState, FitStatus, Predict, Transform};
pub use metrics::{accuracy, adjusted_rand_index, amari_distance, rmse};
pub use scalar::Real;

pub type MultiviewDatasetF64 = MultiviewDataset<f64>;
pub type MultiviewDatasetF32 = MultiviewDataset<f32>;
pub type ViewMatrixF64 = ViewMatrix<f64>;
pub type ViewMatrixF32 = ViewMatrix<f32>;

pub type CcaF64 = embed::Cca<f64>;
pub type CcaModelF64 = embed::CcaModel<f64>;
pub type MccaF64 = embed::Mcca<f64>;
pub type KmccaF64 = embed::Kmcca<f64>;
pub type KmccaModelF64 = embed::KmccaModel<f64>;
pub type GccaF64 = embed::Gcca<f64>;
pub type GccaModelF64 = embed::GccaModel<f64>;
pub type ClusterParamsF64 = cluster::ClusterParams<f64>;
pub type ClusterResultF64 = cluster::ClusterResult<f64>;
pub type AffinityParamsF64 = cluster::AffinityParams<f64>;
pub type CoRegModelF64 = semisup::CoRegModel<f64>;
pub type LogisticRegressionF64 = semisup::LogisticRegression<f64>;
pub type AjiveResultF64 = decompose::AjiveResult<f64>;
pub type IcaResultF64 = decompose::IcaResult<f64>;

pub type CcaF32 = embed::Cca<f32>;
pub type CcaModelF32 = embed::CcaModel<f32>;
pub type ClusterParamsF32 = cluster::ClusterParams<f32>;
pub type ClusterResultF32 = cluster::ClusterResult<f32>;
