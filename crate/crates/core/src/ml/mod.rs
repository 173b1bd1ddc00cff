//! Statistical learners used by the feature groups and the harnesses.

pub mod cv;
pub mod discriminant;
pub mod forest;
pub mod kendall;
pub mod ols;

pub use cv::kfold;
pub use discriminant::{lda_qda_mda_mmce, Lda, LevelMmce, Mda, Qda};
pub use forest::{forest_predict, forest_train, ForestModel};
pub use kendall::kendall_tau;
pub use ols::{ols_fit, LinearFit};
