//! k-fold grid search and the hyperparameter grid file.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::forest::{ForestParams, RandomForest};
use super::hgb::{HgbParams, HistGradientBoosting};
use super::metrics::rmse;
use super::mlp::{Activation, Mlp, MlpParams};
use super::tree::{RegressionTree, TreeParams};
use super::voting::{EnsembleParams, Members, VotingWeights, WEIGHT_CANDIDATES};
use super::{derive_seed, LearnerError, Regressor};
use crate::dataset::Dataset;

/// Shuffled k-fold partition; fold sizes differ by at most one.
pub fn kfold_indices(n: usize, folds: usize, seed: u64) -> Vec<Vec<usize>> {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let (base, extra) = (n / folds, n % folds);
    let mut out = Vec::with_capacity(folds);
    let mut start = 0;
    for f in 0..folds {
        let len = base + usize::from(f < extra);
        out.push(idx[start..start + len].to_vec());
        start += len;
    }
    out
}

fn complement(n: usize, fold: &[usize]) -> Vec<usize> {
    let mut held = vec![false; n];
    for &i in fold {
        held[i] = true;
    }
    (0..n).filter(|&i| !held[i]).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum Candidate {
    Dtr(TreeParams),
    Rfr(ForestParams),
    Hgbr(HgbParams),
    Mlpr(MlpParams),
}

impl Candidate {
    pub fn fit(&self, train: &Dataset, seed: u64) -> Result<Box<dyn Regressor>, LearnerError> {
        Ok(match self {
            Candidate::Dtr(p) => Box::new(RegressionTree::fit(train, p)?),
            Candidate::Rfr(p) => Box::new(RandomForest::fit(train, p, seed)?),
            Candidate::Hgbr(p) => Box::new(HistGradientBoosting::fit(train, p)?),
            Candidate::Mlpr(p) => Box::new(Mlp::fit(train, p, seed)?),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvRow {
    pub candidate: Candidate,
    pub fold_rmse: Vec<f64>,
    pub mean_rmse: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridResult {
    pub best: usize,
    pub rows: Vec<CvRow>,
}

impl GridResult {
    pub fn best_candidate(&self) -> &Candidate {
        &self.rows[self.best].candidate
    }
}

/// Exhaustive search minimizing mean held-out RMSE; ties keep the earlier candidate.
pub fn grid_search_cv(grid: &[Candidate], train: &Dataset, folds: usize, seed: u64) -> Result<GridResult, LearnerError> {
    if grid.is_empty() {
        return Err(LearnerError::InvalidParams("empty grid".into()));
    }
    if folds < 2 || folds > train.len() {
        return Err(LearnerError::InvalidParams(format!("{folds} folds for {} rows", train.len())));
    }
    let parts = kfold_indices(train.len(), folds, seed);
    let mut rows = Vec::with_capacity(grid.len());
    for cand in grid {
        let mut fold_rmse = Vec::with_capacity(folds);
        for (f, held) in parts.iter().enumerate() {
            let fit_on = train.subset(&complement(train.len(), held));
            let test = train.subset(held);
            let model = cand.fit(&fit_on, derive_seed(seed, 100 + f as u64))?;
            fold_rmse.push(rmse(&model.predict_rows_unchecked(&test.rows), &test.targets));
        }
        let mean_rmse = fold_rmse.iter().sum::<f64>() / folds as f64;
        log::debug!("cv {cand:?}: rmse {mean_rmse}");
        rows.push(CvRow { candidate: cand.clone(), fold_rmse, mean_rmse });
    }
    let mut best = 0;
    for (i, r) in rows.iter().enumerate() {
        if r.mean_rmse < rows[best].mean_rmse {
            best = i;
        }
    }
    Ok(GridResult { best, rows })
}

/// Picks voting weights by held-out RMSE of out-of-fold member predictions.
pub fn select_weights(
    train: &Dataset,
    params: &EnsembleParams,
    candidates: &[VotingWeights],
    folds: usize,
    seed: u64,
) -> Result<(usize, Vec<f64>), LearnerError> {
    if candidates.is_empty() {
        return Err(LearnerError::InvalidParams("no weight candidates".into()));
    }
    if folds < 2 || folds > train.len() {
        return Err(LearnerError::InvalidParams(format!("{folds} folds for {} rows", train.len())));
    }
    let which: [bool; 6] = std::array::from_fn(|p| candidates.iter().any(|w| w.uses(p)));
    let parts = kfold_indices(train.len(), folds, seed);
    let mut scores = vec![0.0; candidates.len()];
    for (f, held) in parts.iter().enumerate() {
        let fit_on = train.subset(&complement(train.len(), held));
        let test = train.subset(held);
        let members = Members::fit(&fit_on, params, derive_seed(seed, 200 + f as u64), which)?;
        let per = members.predict_rows(&test.rows);
        for (c, w) in candidates.iter().enumerate() {
            let preds: Vec<f64> = (0..test.len())
                .map(|i| w.combine(&std::array::from_fn(|p| per[p].as_ref().map_or(0.0, |v| v[i]))))
                .collect();
            scores[c] += rmse(&preds, &test.targets) / folds as f64;
        }
    }
    let mut best = 0;
    for c in 1..scores.len() {
        if scores[c] < scores[best] {
            best = c;
        }
    }
    Ok((best, scores))
}

fn five() -> usize {
    5
}

fn mse_criterion() -> Vec<String> {
    vec!["mse".into()]
}

fn squared_loss() -> Vec<String> {
    vec!["least_squares".into()]
}

fn constant_rate() -> Vec<String> {
    vec!["constant".into()]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DtrGrid {
    #[serde(default = "mse_criterion")]
    pub criterion: Vec<String>,
    pub max_depth: Vec<usize>,
    pub min_samples_split: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RfrGrid {
    pub n_estimators: Vec<usize>,
    #[serde(default = "mse_criterion")]
    pub criterion: Vec<String>,
    pub max_depth: Vec<usize>,
    pub min_samples_split: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HgbrGrid {
    #[serde(default = "squared_loss")]
    pub loss: Vec<String>,
    pub max_depth: Vec<usize>,
    pub min_samples_leaf: Vec<usize>,
    pub max_iter: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MlprGrid {
    pub hidden_layer_sizes: Vec<Vec<usize>>,
    pub activation: Vec<Activation>,
    #[serde(default = "constant_rate")]
    pub learning_rate: Vec<String>,
    pub epochs: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VorGrid {
    pub weights: Vec<[f64; 6]>,
}

/// Hyperparameter grid, with field names following scikit-learn.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    #[serde(default = "five")]
    pub folds: usize,
    pub dtr: Option<DtrGrid>,
    pub rfr: Option<RfrGrid>,
    pub hgbr: Option<HgbrGrid>,
    pub mlpr: Option<MlprGrid>,
    pub vor: Option<VorGrid>,
}

fn stepped(start: usize, stop: usize, step: usize) -> Vec<usize> {
    (start..stop).step_by(step).collect()
}

fn check_member(what: &str, v: usize, allowed: &[usize]) -> Result<(), LearnerError> {
    if allowed.contains(&v) {
        Ok(())
    } else {
        Err(LearnerError::InvalidParams(format!("{what} = {v} is outside the searchable grid {allowed:?}")))
    }
}

fn check_squared(what: &str, v: &str, accepted: &[&str]) -> Result<(), LearnerError> {
    if accepted.contains(&v) {
        Ok(())
    } else {
        Err(LearnerError::InvalidParams(format!("{what} `{v}` is not supported; only squared error is implemented")))
    }
}

fn product<A: Clone, B: Clone>(a: &[A], b: &[B]) -> Vec<(A, B)> {
    a.iter().flat_map(|x| b.iter().map(move |y| (x.clone(), y.clone()))).collect()
}

impl GridSpec {
    /// The full search space, restricted to squared-error options.
    pub fn full() -> Self {
        GridSpec {
            folds: 5,
            dtr: Some(DtrGrid {
                criterion: mse_criterion(),
                max_depth: stepped(3, 50, 5),
                min_samples_split: stepped(2, 30, 2),
            }),
            rfr: Some(RfrGrid {
                n_estimators: stepped(50, 200, 50),
                criterion: mse_criterion(),
                max_depth: stepped(3, 50, 5),
                min_samples_split: stepped(2, 30, 2),
            }),
            hgbr: Some(HgbrGrid {
                loss: squared_loss(),
                max_depth: stepped(3, 50, 5),
                min_samples_leaf: stepped(5, 50, 10),
                max_iter: stepped(100, 600, 100),
            }),
            mlpr: Some(MlprGrid {
                hidden_layer_sizes: vec![vec![256, 100], vec![512, 256, 100]],
                activation: vec![Activation::Logistic, Activation::Tanh, Activation::Relu],
                learning_rate: vec!["constant".into(), "adaptive".into()],
                epochs: stepped(100, 500, 50),
            }),
            vor: Some(VorGrid { weights: WEIGHT_CANDIDATES.to_vec() }),
        }
    }

    /// One candidate per family: the default values.
    pub fn best() -> Self {
        GridSpec {
            folds: 5,
            dtr: None,
            rfr: Some(RfrGrid {
                n_estimators: vec![150],
                criterion: mse_criterion(),
                max_depth: vec![28],
                min_samples_split: vec![2],
            }),
            hgbr: Some(HgbrGrid { loss: squared_loss(), max_depth: vec![18], min_samples_leaf: vec![15], max_iter: vec![500] }),
            mlpr: Some(MlprGrid {
                hidden_layer_sizes: vec![vec![512, 256, 100]],
                activation: vec![Activation::Tanh],
                learning_rate: constant_rate(),
                epochs: vec![100],
            }),
            vor: Some(VorGrid { weights: vec![super::voting::DEFAULT_WEIGHTS] }),
        }
    }

    pub fn dtr_candidates(&self) -> Result<Vec<Candidate>, LearnerError> {
        let Some(g) = &self.dtr else { return Ok(Vec::new()) };
        let depths = stepped(3, 50, 5);
        let splits = stepped(2, 30, 2);
        let mut out = Vec::new();
        for c in &g.criterion {
            check_squared("criterion", c, &["mse", "squared_error"])?;
            for (d, s) in product(&g.max_depth, &g.min_samples_split) {
                check_member("dtr max_depth", d, &depths)?;
                check_member("dtr min_samples_split", s, &splits)?;
                out.push(Candidate::Dtr(TreeParams { max_depth: d, min_samples_split: s, ..TreeParams::default() }));
            }
        }
        Ok(out)
    }

    pub fn rfr_candidates(&self) -> Result<Vec<Candidate>, LearnerError> {
        let Some(g) = &self.rfr else { return Ok(Vec::new()) };
        let mut out = Vec::new();
        for c in &g.criterion {
            check_squared("criterion", c, &["mse", "squared_error"])?;
            for &n in &g.n_estimators {
                check_member("rfr n_estimators", n, &stepped(50, 200, 50))?;
                for (d, s) in product(&g.max_depth, &g.min_samples_split) {
                    check_member("rfr max_depth", d, &stepped(3, 50, 5))?;
                    check_member("rfr min_samples_split", s, &stepped(2, 30, 2))?;
                    out.push(Candidate::Rfr(ForestParams {
                        n_estimators: n,
                        max_depth: d,
                        min_samples_split: s,
                        ..ForestParams::default()
                    }));
                }
            }
        }
        Ok(out)
    }

    pub fn hgbr_candidates(&self) -> Result<Vec<Candidate>, LearnerError> {
        let Some(g) = &self.hgbr else { return Ok(Vec::new()) };
        let mut out = Vec::new();
        for l in &g.loss {
            check_squared("loss", l, &["least_squares", "squared_error"])?;
            for &d in &g.max_depth {
                check_member("hgbr max_depth", d, &stepped(3, 50, 5))?;
                for (leaf, iters) in product(&g.min_samples_leaf, &g.max_iter) {
                    check_member("hgbr min_samples_leaf", leaf, &stepped(5, 50, 10))?;
                    check_member("hgbr max_iter", iters, &stepped(100, 600, 100))?;
                    out.push(Candidate::Hgbr(HgbParams {
                        max_depth: d,
                        min_samples_leaf: leaf,
                        max_iter: iters,
                        ..HgbParams::default()
                    }));
                }
            }
        }
        Ok(out)
    }

    pub fn mlpr_candidates(&self) -> Result<Vec<Candidate>, LearnerError> {
        let Some(g) = &self.mlpr else { return Ok(Vec::new()) };
        let mut out = Vec::new();
        for h in &g.hidden_layer_sizes {
            if h != &[256, 100] && h != &[512, 256, 100] {
                return Err(LearnerError::InvalidParams(format!("hidden_layer_sizes {h:?} is outside the searchable grid")));
            }
            for &a in &g.activation {
                for rate in &g.learning_rate {
                    if rate != "constant" && rate != "adaptive" {
                        return Err(LearnerError::InvalidParams(format!("learning_rate `{rate}` is not supported")));
                    }
                    for &e in &g.epochs {
                        check_member("mlpr epochs", e, &stepped(100, 500, 50))?;
                        out.push(Candidate::Mlpr(MlpParams {
                            hidden: h.clone(),
                            activation: a,
                            epochs: e,
                            ..MlpParams::default()
                        }));
                    }
                }
            }
        }
        let mut unique: Vec<Candidate> = Vec::with_capacity(out.len());
        for c in out {
            if !unique.contains(&c) {
                unique.push(c);
            }
        }
        Ok(unique)
    }

    pub fn weight_candidates(&self) -> Result<Vec<VotingWeights>, LearnerError> {
        match &self.vor {
            None => Ok(vec![VotingWeights::default()]),
            Some(g) => g.weights.iter().map(|w| VotingWeights::new(*w)).collect(),
        }
    }

    pub fn parse(text: &str) -> Result<Self, LearnerError> {
        let spec: GridSpec = serde_json::from_str(text).map_err(|e| LearnerError::InvalidParams(format!("grid file: {e}")))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), LearnerError> {
        if self.folds < 2 {
            return Err(LearnerError::InvalidParams("folds must be at least 2".into()));
        }
        self.dtr_candidates()?;
        self.rfr_candidates()?;
        self.hgbr_candidates()?;
        self.mlpr_candidates()?;
        self.weight_candidates()?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TuningReport {
    pub families: Vec<(String, GridResult)>,
    pub weight_scores: Option<Vec<(VotingWeights, f64)>>,
}

impl TuningReport {
    /// One row per evaluated candidate; weight vectors appear under `vor`.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["family", "candidate", "mean_rmse", "fold_rmse", "selected"]).expect("in-memory write");
        for (family, result) in &self.families {
            for (i, row) in result.rows.iter().enumerate() {
                let folds: Vec<String> = row.fold_rmse.iter().map(f64::to_string).collect();
                let cand = serde_json::to_string(&row.candidate).expect("candidate serializes");
                let selected = if i == result.best { "yes" } else { "" };
                w.write_record([family.as_str(), &cand, &row.mean_rmse.to_string(), &folds.join(" "), selected])
                    .expect("in-memory write");
            }
        }
        if let Some(scores) = &self.weight_scores {
            let best = scores.iter().enumerate().min_by(|a, b| a.1 .1.total_cmp(&b.1 .1)).map(|(i, _)| i);
            for (i, (weights, score)) in scores.iter().enumerate() {
                let cand = serde_json::to_string(&weights.0).expect("weights serialize");
                let selected = if Some(i) == best { "yes" } else { "" };
                w.write_record(["vor", &cand, &score.to_string(), "", selected]).expect("in-memory write");
            }
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }
}

/// Chooses ensemble parameters: grid search per family with more than one
/// candidate, then the voting weights when several are offered.
pub fn tune(train: &Dataset, spec: &GridSpec, seed: u64) -> Result<(EnsembleParams, TuningReport), LearnerError> {
    spec.validate()?;
    let mut params = EnsembleParams::default();
    let mut families = Vec::new();
    let groups = [
        ("dtr", spec.dtr_candidates()?),
        ("rfr", spec.rfr_candidates()?),
        ("hgbr", spec.hgbr_candidates()?),
        ("mlpr", spec.mlpr_candidates()?),
    ];
    for (name, cands) in groups {
        let chosen = match cands.len() {
            0 => continue,
            1 => cands[0].clone(),
            _ => {
                let r = grid_search_cv(&cands, train, spec.folds, derive_seed(seed, 10))?;
                let best = r.best_candidate().clone();
                families.push((name.to_string(), r));
                best
            }
        };
        match chosen {
            Candidate::Dtr(_) => {}
            Candidate::Rfr(p) => params.forest = p,
            Candidate::Hgbr(p) => params.hgb = p,
            Candidate::Mlpr(p) => params.mlp = p,
        }
    }
    let weights = spec.weight_candidates()?;
    let mut weight_scores = None;
    params.weights = if weights.len() == 1 {
        weights[0]
    } else {
        let (best, scores) = select_weights(train, &params, &weights, spec.folds, derive_seed(seed, 11))?;
        weight_scores = Some(weights.iter().copied().zip(scores).collect());
        weights[best]
    };
    Ok((params, TuningReport { families, weight_scores }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn folds_partition_rows() {
        for (n, k) in [(10, 3), (17, 5), (5, 5), (100, 7)] {
            let parts = kfold_indices(n, k, 1);
            let sizes: Vec<usize> = parts.iter().map(Vec::len).collect();
            assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
            let mut all: Vec<usize> = parts.concat();
            all.sort_unstable();
            assert_eq!(all, (0..n).collect::<Vec<_>>());
        }
    }

    fn depth_data(seed: u64) -> Dataset {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rows: Vec<Vec<f64>> = (0..200).map(|_| vec![rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0)]).collect();
        let y = rows.iter().map(|r| ((r[0] * 8.0).floor() % 2.0) + 0.01 * rng.gen_range(-1.0..1.0)).collect();
        Dataset::from_xy(rows, y)
    }

    #[test]
    fn single_candidate_wins() {
        let c = vec![Candidate::Dtr(TreeParams::default())];
        let r = grid_search_cv(&c, &depth_data(0), 5, 0).unwrap();
        assert_eq!(r.best, 0);
        assert_eq!(r.rows[0].fold_rmse.len(), 5);
    }

    #[test]
    fn planted_depth_is_recovered() {
        let grid: Vec<Candidate> = [1, 8]
            .iter()
            .map(|&d| Candidate::Dtr(TreeParams { max_depth: d, min_samples_split: 2, ..TreeParams::default() }))
            .collect();
        let hits = (0..10).filter(|&s| grid_search_cv(&grid, &depth_data(s), 5, s).unwrap().best == 1).count();
        assert!(hits >= 9);
    }

    #[test]
    fn ties_keep_grid_order() {
        let ds = Dataset::from_xy((0..20).map(|i| vec![i as f64]).collect(), vec![0.5; 20]);
        let grid = vec![Candidate::Dtr(TreeParams::default()), Candidate::Dtr(TreeParams { max_depth: 3, ..TreeParams::default() })];
        assert_eq!(grid_search_cv(&grid, &ds, 4, 0).unwrap().best, 0);
    }

    #[test]
    fn unsupported_criterion_is_invalid() {
        let mut g = GridSpec::best();
        g.rfr.as_mut().unwrap().criterion = vec!["mae".into()];
        assert!(matches!(g.validate(), Err(LearnerError::InvalidParams(_))));
        let mut g = GridSpec::best();
        g.rfr.as_mut().unwrap().max_depth = vec![7];
        assert!(matches!(g.validate(), Err(LearnerError::InvalidParams(_))));
    }

    #[test]
    fn full_grid_sizes() {
        let g = GridSpec::full();
        assert_eq!(g.dtr_candidates().unwrap().len(), 10 * 14);
        assert_eq!(g.rfr_candidates().unwrap().len(), 3 * 10 * 14);
        assert_eq!(g.hgbr_candidates().unwrap().len(), 10 * 5 * 5);
        assert_eq!(g.mlpr_candidates().unwrap().len(), 2 * 3 * 8);
        let best = GridSpec::best();
        assert_eq!(best.rfr_candidates().unwrap(), vec![Candidate::Rfr(ForestParams::default())]);
        assert_eq!(best.hgbr_candidates().unwrap(), vec![Candidate::Hgbr(HgbParams::default())]);
        assert_eq!(best.mlpr_candidates().unwrap(), vec![Candidate::Mlpr(MlpParams::default())]);
    }

    #[test]
    fn grid_json_round_trip() {
        let g = GridSpec::full();
        let text = serde_json::to_string(&g).unwrap();
        assert_eq!(GridSpec::parse(&text).unwrap(), g);
        assert!(GridSpec::parse("{\"folds\": 5, \"bogus\": 1}").is_err());
    }
}
