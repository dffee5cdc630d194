use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::tree::{RegressionTree, TreeNodes, TreeParams};
use super::{check_train, LearnerError, Regressor};
use crate::dataset::Dataset;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestParams {
    pub n_estimators: usize,
    pub max_depth: usize,
    pub min_samples_split: usize,
    pub min_samples_leaf: usize,
    /// Features tried per split; `None` means `ceil(d / 3)`.
    pub max_features: Option<usize>,
    pub bootstrap: bool,
}

impl Default for ForestParams {
    fn default() -> Self {
        ForestParams {
            n_estimators: 150,
            max_depth: 28,
            min_samples_split: 2,
            min_samples_leaf: 1,
            max_features: None,
            bootstrap: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomForest {
    pub n_features: usize,
    pub tree_seeds: Vec<u64>,
    pub trees: Vec<TreeNodes>,
}

impl RandomForest {
    pub fn fit(train: &Dataset, params: &ForestParams, seed: u64) -> Result<Self, LearnerError> {
        check_train(train)?;
        if params.n_estimators == 0 {
            return Err(LearnerError::InvalidParams("n_estimators must be positive".into()));
        }
        let (n, d) = (train.len(), train.dim());
        let tree_params = TreeParams {
            max_depth: params.max_depth,
            min_samples_split: params.min_samples_split,
            min_samples_leaf: params.min_samples_leaf,
            max_features: Some(params.max_features.unwrap_or(d.div_ceil(3)).clamp(1, d)),
        };
        let mut master = ChaCha8Rng::seed_from_u64(seed);
        let tree_seeds: Vec<u64> = (0..params.n_estimators).map(|_| master.next_u64()).collect();
        let trees = tree_seeds
            .par_iter()
            .map(|&s| {
                let mut rng = ChaCha8Rng::seed_from_u64(s);
                let mut idx: Vec<usize> =
                    if params.bootstrap { (0..n).map(|_| rng.gen_range(0..n)).collect() } else { (0..n).collect() };
                RegressionTree::fit_indices(&train.rows, &train.targets, &mut idx, &tree_params, Some(&mut rng)).nodes
            })
            .collect();
        Ok(RandomForest { n_features: d, tree_seeds, trees })
    }

    pub fn tree_predictions(&self, x: &[f64]) -> Vec<f64> {
        self.trees.iter().map(|t| t.predict(x)).collect()
    }
}

impl Regressor for RandomForest {
    fn n_features(&self) -> usize {
        self.n_features
    }

    fn predict_unchecked(&self, x: &[f64]) -> f64 {
        self.trees.iter().map(|t| t.predict(x)).sum::<f64>() / self.trees.len() as f64
    }
}
