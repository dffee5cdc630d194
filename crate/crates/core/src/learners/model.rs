//! Persisted model: the ensemble plus everything inference needs to
//! reproduce the training feature space.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::voting::{EnsembleParams, VotingEnsemble};
use super::{LearnerError, Regressor};
use crate::dataset::{ScalerParams, Variant};

pub const MODEL_FORMAT: &str = "testlab-model v1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedModel {
    pub format: String,
    pub manifest_hash: String,
    pub variant: Variant,
    pub feature_names: Vec<String>,
    pub scaler: ScalerParams,
    pub params: EnsembleParams,
    pub seed: u64,
    pub ensemble: VotingEnsemble,
}

impl TrainedModel {
    pub fn new(
        manifest_hash: String,
        variant: Variant,
        scaler: ScalerParams,
        params: EnsembleParams,
        seed: u64,
        ensemble: VotingEnsemble,
    ) -> Result<Self, LearnerError> {
        if scaler.feature_names.len() != ensemble.n_features {
            return Err(LearnerError::DimensionMismatch { expected: ensemble.n_features, got: scaler.feature_names.len() });
        }
        Ok(TrainedModel {
            format: MODEL_FORMAT.to_string(),
            manifest_hash,
            variant,
            feature_names: scaler.feature_names.clone(),
            scaler,
            params,
            seed,
            ensemble,
        })
    }

    /// Prediction for a row already standardized with `scaler`.
    pub fn predict_scaled(&self, row: &[f64]) -> Result<f64, LearnerError> {
        self.ensemble.predict(row)
    }

    /// Prediction for raw metric values in `feature_names` order.
    pub fn predict_raw(&self, row: &[f64]) -> Result<f64, LearnerError> {
        if row.len() != self.feature_names.len() {
            return Err(LearnerError::DimensionMismatch { expected: self.feature_names.len(), got: row.len() });
        }
        self.ensemble.predict(&self.scaler.transform(row))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("model serializes")
    }

    pub fn from_json(text: &str, origin: &str) -> Result<Self, LearnerError> {
        let m: TrainedModel = serde_json::from_str(text)
            .map_err(|e| LearnerError::Io { path: origin.to_string(), reason: format!("invalid model file: {e}") })?;
        if m.format != MODEL_FORMAT {
            return Err(LearnerError::Io {
                path: origin.to_string(),
                reason: format!("unsupported model format `{}` (expected `{MODEL_FORMAT}`)", m.format),
            });
        }
        Ok(m)
    }

    pub fn save(&self, path: &Path) -> Result<(), LearnerError> {
        std::fs::write(path, self.to_json())
            .map_err(|e| LearnerError::Io { path: path.display().to_string(), reason: e.to_string() })
    }

    pub fn load(path: &Path) -> Result<Self, LearnerError> {
        let origin = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|e| LearnerError::Io { path: origin.clone(), reason: e.to_string() })?;
        Self::from_json(&text, &origin)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::Dataset;
    use crate::learners::{ForestParams, HgbParams, MlpParams, VotingWeights};

    #[test]
    fn json_round_trip_preserves_predictions() {
        let rows: Vec<Vec<f64>> = (0..80).map(|i| vec![(i as f64 * 0.37).sin(), (i % 7) as f64 / 7.0]).collect();
        let y = rows.iter().map(|r| 0.5 + 0.3 * r[0] * r[1]).collect();
        let ds = Dataset::from_xy(rows, y);
        let params = EnsembleParams {
            weights: VotingWeights::default(),
            hgb: HgbParams { max_iter: 15, ..HgbParams::default() },
            forest: ForestParams { n_estimators: 6, ..ForestParams::default() },
            mlp: MlpParams { hidden: vec![8, 4], epochs: 3, ..MlpParams::default() },
        };
        let ens = VotingEnsemble::fit(&ds, &params, 11).unwrap();
        let scaler = ScalerParams::fit(&ds.feature_names, &ds.rows);
        let m = TrainedModel::new("h".into(), Variant::DS1, scaler, params, 11, ens).unwrap();
        let back = TrainedModel::from_json(&m.to_json(), "mem").unwrap();
        assert_eq!(back, m);
        for r in &ds.rows {
            assert_eq!(back.predict_raw(r).unwrap(), m.predict_raw(r).unwrap());
        }
        assert!(TrainedModel::from_json("{}", "mem").is_err());
    }
}
