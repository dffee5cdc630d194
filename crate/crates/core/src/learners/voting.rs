use serde::{Deserialize, Serialize};

use super::forest::{ForestParams, RandomForest};
use super::hgb::{HgbParams, HistGradientBoosting};
use super::mlp::{Mlp, MlpParams};
use super::{derive_seed, LearnerError, Regressor};
use crate::dataset::Dataset;

/// Weight positions: linear, support-vector, decision tree, boosting, forest, perceptron.
pub const POSITIONS: [&str; 6] = ["linear", "svr", "dtr", "hgbr", "rfr", "mlpr"];

pub const HGB: usize = 3;
pub const FOREST: usize = 4;
pub const MLP: usize = 5;

/// Default weights: boosting 2/6, forest 3/6, perceptron 1/6.
pub const DEFAULT_WEIGHTS: [f64; 6] = [0.0, 0.0, 0.0, 2.0 / 6.0, 3.0 / 6.0, 1.0 / 6.0];

/// Searched weight vectors that do not involve the linear, support-vector or single-tree models.
pub const WEIGHT_CANDIDATES: [[f64; 6]; 3] = [
    [0.0, 0.0, 0.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0],
    [0.0, 0.0, 0.0, 3.0 / 6.0, 2.0 / 6.0, 1.0 / 6.0],
    [0.0, 0.0, 0.0, 2.0 / 6.0, 3.0 / 6.0, 1.0 / 6.0],
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VotingWeights(pub [f64; 6]);

impl VotingWeights {
    /// Validates and normalizes to unit sum.
    pub fn new(raw: [f64; 6]) -> Result<Self, LearnerError> {
        if raw.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(LearnerError::InvalidParams("voting weights must be finite and non-negative".into()));
        }
        if raw[..3].iter().any(|&w| w != 0.0) {
            return Err(LearnerError::InvalidParams(
                "the linear, support-vector and single-tree positions must have weight 0".into(),
            ));
        }
        let sum: f64 = raw.iter().sum();
        if sum <= 0.0 {
            return Err(LearnerError::InvalidParams("voting weights sum to zero".into()));
        }
        Ok(VotingWeights(if sum == 1.0 { raw } else { raw.map(|w| w / sum) }))
    }

    pub fn uses(&self, position: usize) -> bool {
        self.0[position] > 0.0
    }

    pub fn combine(&self, preds: &[f64; 6]) -> f64 {
        let mut acc = 0.0;
        for (w, p) in self.0.iter().zip(preds) {
            if *w > 0.0 {
                acc += w * p;
            }
        }
        acc
    }
}

impl Default for VotingWeights {
    fn default() -> Self {
        VotingWeights(DEFAULT_WEIGHTS)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[derive(Default)]
pub struct EnsembleParams {
    pub weights: VotingWeights,
    pub hgb: HgbParams,
    pub forest: ForestParams,
    pub mlp: MlpParams,
}


/// Fitted base models; absent members were not needed.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Members {
    pub hgb: Option<HistGradientBoosting>,
    pub forest: Option<RandomForest>,
    pub mlp: Option<Mlp>,
}

impl Members {
    /// Fits the members whose flag is set. Each gets its own seed stream.
    pub fn fit(train: &Dataset, params: &EnsembleParams, seed: u64, which: [bool; 6]) -> Result<Self, LearnerError> {
        Ok(Members {
            hgb: which[HGB].then(|| HistGradientBoosting::fit(train, &params.hgb)).transpose()?,
            forest: which[FOREST].then(|| RandomForest::fit(train, &params.forest, derive_seed(seed, 1))).transpose()?,
            mlp: which[MLP].then(|| Mlp::fit(train, &params.mlp, derive_seed(seed, 2))).transpose()?,
        })
    }

    pub fn fit_all(train: &Dataset, params: &EnsembleParams, seed: u64) -> Result<Self, LearnerError> {
        Self::fit(train, params, seed, [false, false, false, true, true, true])
    }

    pub fn get(&self, position: usize) -> Option<&dyn Regressor> {
        match position {
            HGB => self.hgb.as_ref().map(|m| m as &dyn Regressor),
            FOREST => self.forest.as_ref().map(|m| m as &dyn Regressor),
            MLP => self.mlp.as_ref().map(|m| m as &dyn Regressor),
            _ => None,
        }
    }

    /// Predictions of every present member, per position.
    pub fn predict_rows(&self, rows: &[Vec<f64>]) -> [Option<Vec<f64>>; 6] {
        std::array::from_fn(|p| self.get(p).map(|m| m.predict_rows_unchecked(rows)))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VotingEnsemble {
    pub n_features: usize,
    pub weights: VotingWeights,
    pub members: Members,
}

impl VotingEnsemble {
    pub fn fit(train: &Dataset, params: &EnsembleParams, seed: u64) -> Result<Self, LearnerError> {
        let which = std::array::from_fn(|p| params.weights.uses(p));
        let members = Members::fit(train, params, seed, which)?;
        Ok(VotingEnsemble { n_features: train.dim(), weights: params.weights, members })
    }

    pub fn from_members(n_features: usize, members: Members, weights: VotingWeights) -> Result<Self, LearnerError> {
        for p in 0..6 {
            if weights.uses(p) && members.get(p).is_none() {
                return Err(LearnerError::InvalidParams(format!("weight on `{}` but that model is not fitted", POSITIONS[p])));
            }
        }
        Ok(VotingEnsemble { n_features, weights, members })
    }
}

impl Regressor for VotingEnsemble {
    fn n_features(&self) -> usize {
        self.n_features
    }

    fn predict_unchecked(&self, x: &[f64]) -> f64 {
        let preds = std::array::from_fn(|p| {
            if self.weights.uses(p) {
                self.members.get(p).map_or(0.0, |m| m.predict_unchecked(x))
            } else {
                0.0
            }
        });
        self.weights.combine(&preds)
    }

    fn predict_rows_unchecked(&self, rows: &[Vec<f64>]) -> Vec<f64> {
        let per: [Option<Vec<f64>>; 6] = std::array::from_fn(|p| {
            if self.weights.uses(p) {
                self.members.get(p).map(|m| m.predict_rows_unchecked(rows))
            } else {
                None
            }
        });
        (0..rows.len())
            .map(|i| self.weights.combine(&std::array::from_fn(|p| per[p].as_ref().map_or(0.0, |v| v[i]))))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn small_params(weights: [f64; 6]) -> EnsembleParams {
        EnsembleParams {
            weights: VotingWeights::new(weights).unwrap(),
            hgb: HgbParams { max_iter: 20, ..HgbParams::default() },
            forest: ForestParams { n_estimators: 10, ..ForestParams::default() },
            mlp: MlpParams { hidden: vec![8], epochs: 5, ..MlpParams::default() },
        }
    }

    fn data() -> Dataset {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let rows: Vec<Vec<f64>> = (0..120).map(|_| vec![rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0)]).collect();
        let y = rows.iter().map(|r| r[0] * r[1]).collect();
        Dataset::from_xy(rows, y)
    }

    #[test]
    fn weighted_mean_example() {
        let w = VotingWeights::new(DEFAULT_WEIGHTS).unwrap();
        let v = w.combine(&[9.0, 9.0, 9.0, 0.6, 0.3, 0.6]);
        assert!((v - 0.45).abs() < 1e-12);
    }

    #[test]
    fn weights_validation() {
        assert!(VotingWeights::new([0.1, 0.0, 0.0, 0.3, 0.3, 0.3]).is_err());
        assert!(VotingWeights::new([0.0; 6]).is_err());
        assert!(VotingWeights::new([0.0, 0.0, 0.0, -1.0, 1.0, 1.0]).is_err());
        let w = VotingWeights::new([0.0, 0.0, 0.0, 2.0, 3.0, 1.0]).unwrap();
        assert!((w.0.iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn single_member_is_identity() {
        let ds = data();
        let e = VotingEnsemble::fit(&ds, &small_params([0.0, 0.0, 0.0, 0.0, 1.0, 0.0]), 3).unwrap();
        let forest = e.members.forest.as_ref().unwrap();
        for r in &ds.rows {
            assert_eq!(e.predict(r).unwrap(), forest.predict(r).unwrap());
        }
        assert!(e.members.hgb.is_none() && e.members.mlp.is_none());
    }

    #[test]
    fn batch_matches_single() {
        let ds = data();
        let e = VotingEnsemble::fit(&ds, &small_params(DEFAULT_WEIGHTS), 3).unwrap();
        let batch = e.predict_rows(&ds.rows).unwrap();
        for (r, b) in ds.rows.iter().zip(batch) {
            assert!((e.predict(r).unwrap() - b).abs() < 1e-12);
        }
    }

    #[test]
    fn missing_member_rejected() {
        let r = VotingEnsemble::from_members(2, Members::default(), VotingWeights::default());
        assert!(matches!(r, Err(LearnerError::InvalidParams(_))));
    }
}
