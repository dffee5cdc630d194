//! Labeled datasets and the preprocessing pipeline.

pub mod io;
pub mod lof;
pub mod pipeline;
pub mod scaler;
pub mod variant;

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::metrics::FeatureTable;
use crate::testability::LabelRow;

pub use lof::{lof_scores, remove_outliers};
pub use pipeline::{prepare, DropReport, PrepareConfig, Prepared};
pub use scaler::ScalerParams;
pub use variant::{select_variant_columns, Variant};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DatasetError {
    #[error("required metric `{0}` is missing")]
    MissingMetric(String),
    #[error("unknown dataset variant `{0}` (expected DS1 to DS5)")]
    UnknownVariant(String),
    #[error("LOF needs more rows than neighbors (k = {k}, n = {n})")]
    InvalidNeighbors { k: usize, n: usize },
    #[error("train fraction {0} must lie strictly between 0 and 1")]
    InvalidFraction(f64),
    #[error("dataset is empty after {0}")]
    Empty(&'static str),
    #[error("{origin}: {reason}")]
    Format { origin: String, reason: String },
    #[error("{path}: {reason}")]
    Io { path: String, reason: String },
}

/// Row-major feature matrix with targets.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Dataset {
    pub feature_names: Vec<String>,
    pub class_ids: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub targets: Vec<f64>,
}

impl Dataset {
    pub fn new(feature_names: Vec<String>, class_ids: Vec<String>, rows: Vec<Vec<f64>>, targets: Vec<f64>) -> Self {
        debug_assert_eq!(rows.len(), targets.len());
        debug_assert_eq!(rows.len(), class_ids.len());
        Dataset { feature_names, class_ids, rows, targets }
    }

    /// Unnamed dataset with ids `r0, r1, ...` and features `x0, x1, ...`.
    pub fn from_xy(rows: Vec<Vec<f64>>, targets: Vec<f64>) -> Self {
        let d = rows.first().map_or(0, Vec::len);
        let ids = (0..rows.len()).map(|i| format!("r{i}")).collect();
        Dataset::new((0..d).map(|j| format!("x{j}")).collect(), ids, rows, targets)
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.feature_names.len()
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r[j]).collect()
    }

    pub fn feature_index(&self, name: &str) -> Option<usize> {
        self.feature_names.iter().position(|n| n == name)
    }

    pub fn subset(&self, indices: &[usize]) -> Dataset {
        Dataset {
            feature_names: self.feature_names.clone(),
            class_ids: indices.iter().map(|&i| self.class_ids[i].clone()).collect(),
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
            targets: indices.iter().map(|&i| self.targets[i]).collect(),
        }
    }

    pub fn select_columns(&self, columns: &[usize]) -> Dataset {
        Dataset {
            feature_names: columns.iter().map(|&j| self.feature_names[j].clone()).collect(),
            class_ids: self.class_ids.clone(),
            rows: self.rows.iter().map(|r| columns.iter().map(|&j| r[j]).collect()).collect(),
            targets: self.targets.clone(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct JoinReport {
    pub features_without_label: Vec<String>,
    pub labels_without_features: Vec<String>,
}

/// Inner join on class id, in feature-table order.
pub fn join(features: &FeatureTable, labels: &[LabelRow]) -> (Dataset, JoinReport) {
    let by_id: HashMap<&str, f64> = labels.iter().map(|l| (l.class_id.as_str(), l.testability)).collect();
    let mut ds = Dataset { feature_names: features.names.clone(), ..Dataset::default() };
    let mut report = JoinReport::default();
    for row in &features.rows {
        match by_id.get(row.class_id.as_str()) {
            Some(&t) => {
                ds.class_ids.push(row.class_id.clone());
                ds.rows.push(row.values());
                ds.targets.push(t);
            }
            None => report.features_without_label.push(row.class_id.clone()),
        }
    }
    let known: std::collections::HashSet<&str> = features.rows.iter().map(|r| r.class_id.as_str()).collect();
    report.labels_without_features =
        labels.iter().filter(|l| !known.contains(l.class_id.as_str())).map(|l| l.class_id.clone()).collect();
    (ds, report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum TrivialKind {
    /// Fewer than five lines of code.
    Simple,
    /// Only accessors or mutators, plus at least one attribute.
    Data,
}

pub const TRIVIAL_METRICS: [&str; 4] = ["CSLOC", "CSNOMNAMM", "CSNOIA", "CSNOSA"];

pub fn classify_trivial(loc: f64, nomnamm: f64, noia: f64, nosa: f64) -> Option<TrivialKind> {
    if loc < 5.0 {
        Some(TrivialKind::Simple)
    } else if nomnamm == 0.0 && noia + nosa > 0.0 {
        Some(TrivialKind::Data)
    } else {
        None
    }
}

/// Drops simple and data classes; returns the kept dataset and the removed ids.
pub fn filter_trivial_classes(ds: &Dataset) -> Result<(Dataset, Vec<(String, TrivialKind)>), DatasetError> {
    let mut cols = [0usize; 4];
    for (c, name) in cols.iter_mut().zip(TRIVIAL_METRICS) {
        *c = ds.feature_index(name).ok_or_else(|| DatasetError::MissingMetric(name.to_string()))?;
    }
    let mut keep = Vec::new();
    let mut removed = Vec::new();
    for (i, r) in ds.rows.iter().enumerate() {
        match classify_trivial(r[cols[0]], r[cols[1]], r[cols[2]], r[cols[3]]) {
            Some(kind) => removed.push((ds.class_ids[i].clone(), kind)),
            None => keep.push(i),
        }
    }
    Ok((ds.subset(&keep), removed))
}

/// Seeded shuffle; the first `floor(n * fraction)` rows train.
pub fn split(ds: &Dataset, train_fraction: f64, seed: u64) -> Result<(Dataset, Dataset), DatasetError> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(DatasetError::InvalidFraction(train_fraction));
    }
    let (train, test) = split_indices(ds.len(), train_fraction, seed);
    Ok((ds.subset(&train), ds.subset(&test)))
}

pub fn split_indices(n: usize, train_fraction: f64, seed: u64) -> (Vec<usize>, Vec<usize>) {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let cut = (n as f64 * train_fraction).floor() as usize;
    let test = idx.split_off(cut);
    (idx, test)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::FeatureVector;

    fn table() -> FeatureTable {
        let names: Vec<String> = TRIVIAL_METRICS.iter().map(|s| s.to_string()).collect();
        let row = |id: &str, v: [f64; 4]| FeatureVector {
            class_id: id.into(),
            entries: names.iter().cloned().zip(v).collect(),
        };
        FeatureTable {
            names: names.clone(),
            rows: vec![
                row("Tiny", [3.0, 1.0, 0.0, 0.0]),
                row("Bean", [20.0, 0.0, 2.0, 0.0]),
                row("Real", [50.0, 4.0, 1.0, 0.0]),
                row("NoLabel", [50.0, 4.0, 1.0, 0.0]),
            ],
        }
    }

    fn labels() -> Vec<LabelRow> {
        ["Tiny", "Bean", "Real", "Ghost"]
            .iter()
            .map(|id| LabelRow { class_id: id.to_string(), t_q: 0.5, t_e: 1.0, testability: 0.5 })
            .collect()
    }

    #[test]
    fn join_reports_unmatched() {
        let (ds, rep) = join(&table(), &labels());
        assert_eq!(ds.class_ids, ["Tiny", "Bean", "Real"]);
        assert_eq!(rep.features_without_label, ["NoLabel"]);
        assert_eq!(rep.labels_without_features, ["Ghost"]);
    }

    #[test]
    fn trivial_filter() {
        let (ds, _) = join(&table(), &labels());
        let (kept, removed) = filter_trivial_classes(&ds).unwrap();
        assert_eq!(kept.class_ids, ["Real"]);
        assert_eq!(removed, [("Tiny".to_string(), TrivialKind::Simple), ("Bean".to_string(), TrivialKind::Data)]);
        let bare = Dataset::from_xy(vec![vec![1.0]], vec![0.0]);
        assert_eq!(filter_trivial_classes(&bare).unwrap_err(), DatasetError::MissingMetric("CSLOC".into()));
    }

    #[test]
    fn split_sizes_and_determinism() {
        let ds = Dataset::from_xy((0..100).map(|i| vec![i as f64]).collect(), vec![0.0; 100]);
        let (tr, te) = split(&ds, 0.7, 42).unwrap();
        assert_eq!((tr.len(), te.len()), (70, 30));
        let (tr2, _) = split(&ds, 0.7, 42).unwrap();
        assert_eq!(tr, tr2);
        let mut all: Vec<String> = tr.class_ids.iter().chain(&te.class_ids).cloned().collect();
        all.sort();
        all.dedup();
        assert_eq!(all.len(), 100);
        let small = Dataset::from_xy((0..10).map(|i| vec![i as f64]).collect(), vec![0.0; 10]);
        let (a, b) = split(&small, 1.0 - 1e-9, 1).unwrap();
        assert_eq!((a.len(), b.len()), (9, 1));
        assert!(split(&small, 1.0, 1).is_err());
    }
}
