//! Histogram gradient boosting for squared loss.
//!
//! Features are discretized into at most 256 quantile bins. Trees grow
//! best-first on gradient histograms; a child's histogram is the parent's
//! minus its smaller sibling's.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::tree::TreeNodes;
use super::{check_train, LearnerError, Regressor};
use crate::dataset::Dataset;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HgbParams {
    pub max_iter: usize,
    pub learning_rate: f64,
    pub max_depth: usize,
    pub min_samples_leaf: usize,
    pub max_leaf_nodes: usize,
    pub max_bins: usize,
    pub l2_regularization: f64,
}

impl Default for HgbParams {
    fn default() -> Self {
        HgbParams {
            max_iter: 500,
            learning_rate: 0.1,
            max_depth: 18,
            min_samples_leaf: 15,
            max_leaf_nodes: 31,
            max_bins: 256,
            l2_regularization: 0.0,
        }
    }
}

/// Per-feature bin edges; value `x` falls in bin `#{edges < x}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Binner {
    pub edges: Vec<Vec<f64>>,
}

impl Binner {
    pub fn fit(rows: &[Vec<f64>], max_bins: usize) -> Self {
        let d = rows.first().map_or(0, Vec::len);
        let edges = (0..d)
            .map(|j| {
                let mut v: Vec<f64> = rows.iter().map(|r| r[j]).collect();
                v.sort_by(f64::total_cmp);
                let mut distinct = v.clone();
                distinct.dedup();
                let mut e: Vec<f64> = if distinct.len() <= max_bins {
                    distinct.windows(2).map(|w| w[0] + (w[1] - w[0]) / 2.0).collect()
                } else {
                    let n = v.len();
                    (1..max_bins)
                        .map(|i| {
                            let k = (i * n / max_bins).max(1);
                            v[k - 1] + (v[k] - v[k - 1]) / 2.0
                        })
                        .collect()
                };
                e.dedup();
                e
            })
            .collect();
        Binner { edges }
    }

    pub fn bin(&self, feature: usize, x: f64) -> u8 {
        self.edges[feature].partition_point(|&e| e < x) as u8
    }

    pub fn n_bins(&self, feature: usize) -> usize {
        self.edges[feature].len() + 1
    }

    /// Column-major binned matrix.
    pub fn transform(&self, rows: &[Vec<f64>]) -> Vec<Vec<u8>> {
        (0..self.edges.len()).map(|j| rows.iter().map(|r| self.bin(j, r[j])).collect()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistGradientBoosting {
    pub n_features: usize,
    pub init: f64,
    pub learning_rate: f64,
    pub trees: Vec<TreeNodes>,
    /// Half mean squared training error after the init and after each iteration.
    #[serde(default)]
    pub train_loss: Vec<f64>,
}

#[derive(Clone, Copy, Default)]
struct Bin {
    g: f64,
    n: u32,
}

type Histogram = Vec<Vec<Bin>>;

struct SplitInfo {
    feature: usize,
    bin: usize,
    gain: f64,
}

struct Open {
    node: usize,
    rows: Vec<u32>,
    hist: Histogram,
    depth: usize,
    split: Option<SplitInfo>,
}

struct Grower<'a> {
    bins: &'a [Vec<u8>],
    binner: &'a Binner,
    grad: &'a [f64],
    params: &'a HgbParams,
}

impl Grower<'_> {
    fn histogram(&self, rows: &[u32]) -> Histogram {
        (0..self.bins.len())
            .into_par_iter()
            .map(|j| {
                let col = &self.bins[j];
                let mut h = vec![Bin::default(); self.binner.n_bins(j)];
                for &r in rows {
                    let b = &mut h[col[r as usize] as usize];
                    b.g += self.grad[r as usize];
                    b.n += 1;
                }
                h
            })
            .collect()
    }

    fn best_split(&self, hist: &Histogram, sum_g: f64, n: usize, depth: usize) -> Option<SplitInfo> {
        let min_leaf = self.params.min_samples_leaf.max(1);
        if depth >= self.params.max_depth || n < 2 * min_leaf {
            return None;
        }
        let lambda = self.params.l2_regularization;
        let parent = sum_g * sum_g / (n as f64 + lambda);
        let mut best: Option<SplitInfo> = None;
        for (j, h) in hist.iter().enumerate() {
            let (mut gl, mut nl) = (0.0, 0usize);
            for (b, bin) in h.iter().enumerate().take(h.len() - 1) {
                gl += bin.g;
                nl += bin.n as usize;
                let nr = n - nl;
                if nl < min_leaf {
                    continue;
                }
                if nr < min_leaf {
                    break;
                }
                let gr = sum_g - gl;
                let gain = gl * gl / (nl as f64 + lambda) + gr * gr / (nr as f64 + lambda) - parent;
                if gain > 0.0 && best.as_ref().is_none_or(|s| gain > s.gain) {
                    best = Some(SplitInfo { feature: j, bin: b, gain });
                }
            }
        }
        best
    }

    fn leaf_value(&self, sum_g: f64, n: usize) -> f64 {
        -sum_g / (n as f64 + self.params.l2_regularization)
    }

    fn open(&self, nodes: &mut TreeNodes, rows: Vec<u32>, hist: Histogram, depth: usize) -> Open {
        let sum_g: f64 = hist.first().map_or(0.0, |h| h.iter().map(|b| b.g).sum());
        let n = rows.len();
        let node = nodes.push_leaf(self.leaf_value(sum_g, n));
        let split = self.best_split(&hist, sum_g, n, depth);
        Open { node, rows, hist, depth, split }
    }

    /// Grows one tree and returns it with the rows of each leaf.
    fn grow(&self, n_rows: usize) -> (TreeNodes, Vec<(usize, Vec<u32>)>) {
        let mut nodes = TreeNodes::default();
        let rows: Vec<u32> = (0..n_rows as u32).collect();
        let hist = self.histogram(&rows);
        let mut open = vec![self.open(&mut nodes, rows, hist, 0)];
        let mut n_leaves = 1;
        while n_leaves < self.params.max_leaf_nodes.max(2) {
            let pick = open
                .iter()
                .enumerate()
                .filter_map(|(i, o)| o.split.as_ref().map(|s| (i, s.gain, o.node)))
                .max_by(|a, b| a.1.total_cmp(&b.1).then(b.2.cmp(&a.2)));
            let Some((i, _, _)) = pick else { break };
            let parent = open.swap_remove(i);
            let split = parent.split.as_ref().expect("picked a splittable node");
            let col = &self.bins[split.feature];
            let (left_rows, right_rows): (Vec<u32>, Vec<u32>) =
                parent.rows.iter().partition(|&&r| col[r as usize] as usize <= split.bin);
            let (small, large_is_left) =
                if left_rows.len() <= right_rows.len() { (&left_rows, false) } else { (&right_rows, true) };
            let small_hist = self.histogram(small);
            let large_hist: Histogram = parent
                .hist
                .iter()
                .zip(&small_hist)
                .map(|(p, s)| p.iter().zip(s).map(|(a, b)| Bin { g: a.g - b.g, n: a.n - b.n }).collect())
                .collect();
            let (left_hist, right_hist) = if large_is_left { (large_hist, small_hist) } else { (small_hist, large_hist) };
            let threshold = self.binner.edges[split.feature][split.bin];
            let l = self.open(&mut nodes, left_rows, left_hist, parent.depth + 1);
            let r = self.open(&mut nodes, right_rows, right_hist, parent.depth + 1);
            nodes.set_split(parent.node, split.feature, threshold, l.node, r.node);
            n_leaves += 1;
            open.push(l);
            open.push(r);
        }
        let leaves = open.into_iter().map(|o| (o.node, o.rows)).collect();
        (nodes, leaves)
    }
}

fn half_mse(pred: &[f64], y: &[f64]) -> f64 {
    0.5 * pred.iter().zip(y).map(|(p, t)| (p - t) * (p - t)).sum::<f64>() / y.len() as f64
}

impl HistGradientBoosting {
    pub fn fit(train: &Dataset, params: &HgbParams) -> Result<Self, LearnerError> {
        check_train(train)?;
        if params.max_bins < 2 || params.max_bins > 256 {
            return Err(LearnerError::InvalidParams(format!("max_bins {} must lie in 2..=256", params.max_bins)));
        }
        if !(params.learning_rate > 0.0) {
            return Err(LearnerError::InvalidParams("learning_rate must be positive".into()));
        }
        let y = &train.targets;
        let n = y.len();
        let binner = Binner::fit(&train.rows, params.max_bins);
        let bins = binner.transform(&train.rows);
        let init = y.iter().sum::<f64>() / n as f64;
        let mut pred = vec![init; n];
        let mut grad = vec![0.0; n];
        let mut trees = Vec::with_capacity(params.max_iter);
        let mut train_loss = vec![half_mse(&pred, y)];
        for _ in 0..params.max_iter {
            for i in 0..n {
                grad[i] = pred[i] - y[i];
            }
            let grower = Grower { bins: &bins, binner: &binner, grad: &grad, params };
            let (nodes, leaves) = grower.grow(n);
            for (leaf, rows) in &leaves {
                let step = params.learning_rate * nodes.value[*leaf];
                for &r in rows {
                    pred[r as usize] += step;
                }
            }
            trees.push(nodes);
            train_loss.push(half_mse(&pred, y));
        }
        Ok(HistGradientBoosting { n_features: train.dim(), init, learning_rate: params.learning_rate, trees, train_loss })
    }
}

impl Regressor for HistGradientBoosting {
    fn n_features(&self) -> usize {
        self.n_features
    }

    fn predict_unchecked(&self, x: &[f64]) -> f64 {
        let mut p = self.init;
        for t in &self.trees {
            p += self.learning_rate * t.predict(x);
        }
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn data(n: usize, seed: u64) -> Dataset {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rows: Vec<Vec<f64>> = (0..n).map(|_| (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
        let y = rows.iter().map(|r| (3.0 * r[0]).sin() + r[1] * r[2]).collect();
        Dataset::from_xy(rows, y)
    }

    #[test]
    fn binning_is_monotone_and_bounded() {
        let ds = data(3000, 1);
        let b = Binner::fit(&ds.rows, 256);
        for j in 0..4 {
            assert!(b.n_bins(j) <= 256);
            assert!(b.edges[j].windows(2).all(|w| w[0] < w[1]));
        }
        let xs = [-2.0, -0.5, -0.1, 0.0, 0.3, 0.9, 5.0];
        assert!(xs.windows(2).all(|w| b.bin(0, w[0]) <= b.bin(0, w[1])));
        let few = Binner::fit(&[vec![1.0], vec![3.0], vec![3.0]], 256);
        assert_eq!(few.edges[0], vec![2.0]);
    }

    #[test]
    fn loss_never_increases() {
        let ds = data(400, 2);
        let m = HistGradientBoosting::fit(&ds, &HgbParams { max_iter: 60, ..HgbParams::default() }).unwrap();
        assert_eq!(m.train_loss.len(), 61);
        assert!(m.train_loss.windows(2).all(|w| w[1] <= w[0]));
        assert!(m.train_loss[60] < 0.3 * m.train_loss[0]);
    }

    #[test]
    fn training_predictions_match_inference() {
        let ds = data(300, 3);
        let m = HistGradientBoosting::fit(&ds, &HgbParams { max_iter: 20, ..HgbParams::default() }).unwrap();
        let pred: Vec<f64> = ds.rows.iter().map(|r| m.predict(r).unwrap()).collect();
        assert!((half_mse(&pred, &ds.targets) - m.train_loss[20]).abs() < 1e-12);
    }

    #[test]
    fn constant_target() {
        let ds = Dataset::from_xy(data(50, 4).rows, vec![0.7; 50]);
        let m = HistGradientBoosting::fit(&ds, &HgbParams { max_iter: 10, ..HgbParams::default() }).unwrap();
        assert!((m.predict(&[0.0; 4]).unwrap() - 0.7).abs() < 1e-12);
    }

    #[test]
    fn leaf_limits() {
        let ds = data(500, 5);
        let p = HgbParams { max_iter: 5, max_leaf_nodes: 8, min_samples_leaf: 20, max_depth: 3, ..HgbParams::default() };
        let m = HistGradientBoosting::fit(&ds, &p).unwrap();
        for t in &m.trees {
            assert!(t.n_leaves() <= 8);
            assert!(t.depth() <= 3);
        }
    }
}
