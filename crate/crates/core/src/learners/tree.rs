//! CART regression tree with exact split search.

use rand::seq::index::sample;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{check_train, LearnerError, Regressor};
use crate::dataset::Dataset;

/// Flat node arrays; `left[i] == 0` marks a leaf since the root is never a child.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TreeNodes {
    pub feature: Vec<u32>,
    pub threshold: Vec<f64>,
    pub left: Vec<u32>,
    pub right: Vec<u32>,
    pub value: Vec<f64>,
}

impl TreeNodes {
    pub fn push_leaf(&mut self, value: f64) -> usize {
        self.feature.push(0);
        self.threshold.push(0.0);
        self.left.push(0);
        self.right.push(0);
        self.value.push(value);
        self.value.len() - 1
    }

    pub fn set_split(&mut self, node: usize, feature: usize, threshold: f64, left: usize, right: usize) {
        self.feature[node] = feature as u32;
        self.threshold[node] = threshold;
        self.left[node] = left as u32;
        self.right[node] = right as u32;
    }

    pub fn len(&self) -> usize {
        self.value.len()
    }

    pub fn is_empty(&self) -> bool {
        self.value.is_empty()
    }

    pub fn is_leaf(&self, node: usize) -> bool {
        self.left[node] == 0
    }

    pub fn leaf_of(&self, x: &[f64]) -> usize {
        let mut i = 0;
        while !self.is_leaf(i) {
            i = if x[self.feature[i] as usize] <= self.threshold[i] { self.left[i] } else { self.right[i] } as usize;
        }
        i
    }

    pub fn predict(&self, x: &[f64]) -> f64 {
        self.value[self.leaf_of(x)]
    }

    pub fn depth(&self) -> usize {
        fn go(t: &TreeNodes, i: usize) -> usize {
            if t.is_leaf(i) {
                0
            } else {
                1 + go(t, t.left[i] as usize).max(go(t, t.right[i] as usize))
            }
        }
        if self.is_empty() {
            0
        } else {
            go(self, 0)
        }
    }

    pub fn n_leaves(&self) -> usize {
        (0..self.len()).filter(|&i| self.is_leaf(i)).count()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeParams {
    pub max_depth: usize,
    pub min_samples_split: usize,
    pub min_samples_leaf: usize,
    /// Features examined per split; `None` examines all.
    pub max_features: Option<usize>,
}

impl Default for TreeParams {
    fn default() -> Self {
        TreeParams { max_depth: 8, min_samples_split: 28, min_samples_leaf: 1, max_features: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionTree {
    pub n_features: usize,
    pub nodes: TreeNodes,
}

struct Builder<'a> {
    rows: &'a [Vec<f64>],
    y: &'a [f64],
    params: &'a TreeParams,
    rng: Option<&'a mut ChaCha8Rng>,
    nodes: TreeNodes,
    pairs: Vec<(f64, f64)>,
}

struct Split {
    feature: usize,
    threshold: f64,
    score: f64,
}

impl Builder<'_> {
    fn grow(&mut self, idx: &mut [usize], depth: usize) -> usize {
        let n = idx.len();
        let first = self.y[idx[0]];
        let pure = idx.iter().all(|&i| self.y[i] == first);
        let mean = if pure { first } else { idx.iter().map(|&i| self.y[i]).sum::<f64>() / n as f64 };
        let node = self.nodes.push_leaf(mean);
        if pure || depth >= self.params.max_depth || n < self.params.min_samples_split || n < 2 * self.params.min_samples_leaf {
            return node;
        }
        let Some(split) = self.best_split(idx) else { return node };
        let mid = partition(idx, |i| self.rows[i][split.feature] <= split.threshold);
        let (l, r) = idx.split_at_mut(mid);
        let left = self.grow(l, depth + 1);
        let right = self.grow(r, depth + 1);
        self.nodes.set_split(node, split.feature, split.threshold, left, right);
        node
    }

    fn candidate_features(&mut self) -> Vec<usize> {
        let d = self.rows[0].len();
        match (self.params.max_features, self.rng.as_deref_mut()) {
            (Some(m), Some(rng)) if m < d => {
                let mut f = sample(rng, d, m).into_vec();
                f.sort_unstable();
                f
            }
            _ => (0..d).collect(),
        }
    }

    fn best_split(&mut self, idx: &[usize]) -> Option<Split> {
        let min_leaf = self.params.min_samples_leaf.max(1);
        let n = idx.len();
        let mut best: Option<Split> = None;
        for f in self.candidate_features() {
            self.pairs.clear();
            self.pairs.extend(idx.iter().map(|&i| (self.rows[i][f], self.y[i])));
            self.pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
            let total: f64 = self.pairs.iter().map(|p| p.1).sum();
            let mut left_sum = 0.0;
            for p in 0..n - 1 {
                left_sum += self.pairs[p].1;
                let nl = p + 1;
                let (lo, hi) = (self.pairs[p].0, self.pairs[p + 1].0);
                if nl < min_leaf || n - nl < min_leaf || lo == hi {
                    continue;
                }
                let right_sum = total - left_sum;
                let score = left_sum * left_sum / nl as f64 + right_sum * right_sum / (n - nl) as f64;
                if best.as_ref().is_none_or(|b| score > b.score) {
                    let mut threshold = lo + (hi - lo) / 2.0;
                    if threshold >= hi {
                        threshold = lo;
                    }
                    best = Some(Split { feature: f, threshold, score });
                }
            }
        }
        best
    }
}

/// Stable in-place partition; returns the number of rows sent left.
fn partition(idx: &mut [usize], goes_left: impl Fn(usize) -> bool) -> usize {
    let (l, r): (Vec<usize>, Vec<usize>) = idx.iter().partition(|&&i| goes_left(i));
    let mid = l.len();
    idx[..mid].copy_from_slice(&l);
    idx[mid..].copy_from_slice(&r);
    mid
}

impl RegressionTree {
    pub fn fit(train: &Dataset, params: &TreeParams) -> Result<Self, LearnerError> {
        check_train(train)?;
        let mut idx: Vec<usize> = (0..train.len()).collect();
        Ok(Self::fit_indices(&train.rows, &train.targets, &mut idx, params, None))
    }

    /// Fits on `idx` (which may repeat rows); `rng` drives feature subsampling.
    pub fn fit_indices(
        rows: &[Vec<f64>],
        y: &[f64],
        idx: &mut [usize],
        params: &TreeParams,
        rng: Option<&mut ChaCha8Rng>,
    ) -> Self {
        let mut b = Builder { rows, y, params, rng, nodes: TreeNodes::default(), pairs: Vec::with_capacity(idx.len()) };
        b.grow(idx, 0);
        RegressionTree { n_features: rows[0].len(), nodes: b.nodes }
    }
}

impl Regressor for RegressionTree {
    fn n_features(&self) -> usize {
        self.n_features
    }

    fn predict_unchecked(&self, x: &[f64]) -> f64 {
        self.nodes.predict(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn step_data() -> Dataset {
        let rows: Vec<Vec<f64>> = (0..20).map(|i| vec![i as f64]).collect();
        let y = (0..20).map(|i| if i < 8 { 1.0 } else { 5.0 }).collect();
        Dataset::from_xy(rows, y)
    }

    #[test]
    fn step_function_exact() {
        let params = TreeParams { max_depth: 1, min_samples_split: 2, ..TreeParams::default() };
        let t = RegressionTree::fit(&step_data(), &params).unwrap();
        assert_eq!(t.nodes.len(), 3);
        assert_eq!(t.nodes.threshold[0], 7.5);
        for i in 0..20 {
            assert_eq!(t.predict(&[i as f64]).unwrap(), if i < 8 { 1.0 } else { 5.0 });
        }
    }

    #[test]
    fn constant_target_gives_root_only() {
        let ds = Dataset::from_xy((0..10).map(|i| vec![i as f64]).collect(), vec![0.3; 10]);
        let t = RegressionTree::fit(&ds, &TreeParams::default()).unwrap();
        assert_eq!(t.nodes.len(), 1);
        assert_eq!(t.predict(&[100.0]).unwrap(), 0.3);
    }

    #[test]
    fn depth_zero_is_mean() {
        let params = TreeParams { max_depth: 0, ..TreeParams::default() };
        let t = RegressionTree::fit(&step_data(), &params).unwrap();
        assert_eq!(t.predict(&[3.0]).unwrap(), (8.0 + 60.0) / 20.0);
    }

    #[test]
    fn tie_break_prefers_lowest_feature() {
        let rows: Vec<Vec<f64>> = (0..10).map(|i| vec![i as f64, i as f64]).collect();
        let y = (0..10).map(|i| if i < 5 { 0.0 } else { 1.0 }).collect();
        let t = RegressionTree::fit(&Dataset::from_xy(rows, y), &TreeParams { min_samples_split: 2, ..TreeParams::default() }).unwrap();
        assert_eq!(t.nodes.feature[0], 0);
    }

    #[test]
    fn respects_limits() {
        let rows: Vec<Vec<f64>> = (0..200).map(|i| vec![(i * 37 % 101) as f64, (i * 11 % 7) as f64]).collect();
        let y = rows.iter().map(|r| r[0].sin() + r[1]).collect();
        let ds = Dataset::from_xy(rows, y);
        let p = TreeParams { max_depth: 4, min_samples_split: 2, min_samples_leaf: 7, max_features: None };
        let t = RegressionTree::fit(&ds, &p).unwrap();
        assert!(t.nodes.depth() <= 4);
        let mut counts = vec![0usize; t.nodes.len()];
        for r in &ds.rows {
            counts[t.nodes.leaf_of(r)] += 1;
        }
        for i in 0..t.nodes.len() {
            if t.nodes.is_leaf(i) {
                assert!(counts[i] >= 7);
            }
        }
    }

    #[test]
    fn row_order_does_not_change_structure() {
        let rows: Vec<Vec<f64>> = (0..60).map(|i| vec![(i * 7 % 60) as f64, ((i * 13) % 60) as f64 * 0.5]).collect();
        let y: Vec<f64> = rows.iter().map(|r| (r[0] * 0.1).sin() + r[1] * r[1] * 0.001).collect();
        let p = TreeParams { max_depth: 6, min_samples_split: 2, ..TreeParams::default() };
        let a = RegressionTree::fit(&Dataset::from_xy(rows.clone(), y.clone()), &p).unwrap();
        let rev_rows: Vec<Vec<f64>> = rows.iter().rev().cloned().collect();
        let rev_y: Vec<f64> = y.iter().rev().cloned().collect();
        let b = RegressionTree::fit(&Dataset::from_xy(rev_rows, rev_y), &p).unwrap();
        assert_eq!(a.nodes.feature, b.nodes.feature);
        assert_eq!(a.nodes.threshold, b.nodes.threshold);
        assert_eq!(a.nodes.left, b.nodes.left);
    }
}
