//! Regression learners, voting ensemble, grid search and evaluation.

pub mod cv;
pub mod forest;
pub mod hgb;
pub mod metrics;
pub mod mlp;
pub mod model;
pub mod tree;
pub mod voting;

use thiserror::Error;

use crate::dataset::Dataset;

pub use cv::{grid_search_cv, kfold_indices, tune, Candidate, GridResult, GridSpec, TuningReport};
pub use forest::{ForestParams, RandomForest};
pub use hgb::{HgbParams, HistGradientBoosting};
pub use metrics::{evaluate, r2_score, rmse, Evaluation};
pub use mlp::{Activation, Mlp, MlpParams};
pub use model::TrainedModel;
pub use tree::{RegressionTree, TreeParams};
pub use voting::{EnsembleParams, Members, VotingEnsemble, VotingWeights};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LearnerError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("expected {expected} features, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("training set is empty")]
    EmptyTrain,
    #[error("{0}")]
    InvalidInput(String),
    #[error("{path}: {reason}")]
    Io { path: String, reason: String },
}

pub trait Regressor: Sync {
    fn n_features(&self) -> usize;

    fn predict_unchecked(&self, x: &[f64]) -> f64;

    fn predict_rows_unchecked(&self, rows: &[Vec<f64>]) -> Vec<f64> {
        rows.iter().map(|r| self.predict_unchecked(r)).collect()
    }

    fn predict(&self, x: &[f64]) -> Result<f64, LearnerError> {
        check_dim(self.n_features(), x.len())?;
        Ok(self.predict_unchecked(x))
    }

    fn predict_rows(&self, rows: &[Vec<f64>]) -> Result<Vec<f64>, LearnerError> {
        for r in rows {
            check_dim(self.n_features(), r.len())?;
        }
        Ok(self.predict_rows_unchecked(rows))
    }
}

fn check_dim(expected: usize, got: usize) -> Result<(), LearnerError> {
    if expected != got {
        return Err(LearnerError::DimensionMismatch { expected, got });
    }
    Ok(())
}

pub(crate) fn check_train(train: &Dataset) -> Result<(), LearnerError> {
    if train.is_empty() || train.dim() == 0 {
        return Err(LearnerError::EmptyTrain);
    }
    if let Some(r) = train.rows.iter().find(|r| r.len() != train.dim()) {
        return Err(LearnerError::DimensionMismatch { expected: train.dim(), got: r.len() });
    }
    Ok(())
}

/// Stable per-purpose seed derived from a master seed.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
