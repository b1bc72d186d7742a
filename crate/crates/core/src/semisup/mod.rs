//! Two-view co-training for classification and regression.
//!
//! Unlabeled samples carry [`crate::UNLABELED`] in the dataset's label vector.

mod coreg;
mod cotrain;
mod learners;

pub use coreg::{cotrain_regressor_fit, CoRegModel, CoRegParams, CoRegRound};
pub use cotrain::{combine_probabilities, cotrain_classifier_fit, CoTrainModel, CoTrainParams, CoTrainRound};
pub use learners::{KnnRegressor, LogisticRegression, ProbabilisticClassifier, Regressor};
