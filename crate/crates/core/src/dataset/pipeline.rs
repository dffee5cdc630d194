use std::fmt::Write as _;

use super::lof::remove_outliers;
use super::scaler::ScalerParams;
use super::variant::{static_columns, top_correlated, Variant, DS2_FEATURES};
use super::{filter_trivial_classes, join, split, Dataset, DatasetError, TrivialKind};
use crate::metrics::{FeatureTable, Manifest};
use crate::testability::LabelRow;

#[derive(Debug, Clone, PartialEq)]
pub struct PrepareConfig {
    pub variant: Variant,
    pub train_fraction: f64,
    pub seed: u64,
    pub lof_k: usize,
    pub lof_threshold: f64,
}

impl Default for PrepareConfig {
    fn default() -> Self {
        PrepareConfig { variant: Variant::DS1, train_fraction: 0.7, seed: 42, lof_k: 20, lof_threshold: 1.5 }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct DropReport {
    pub features_without_label: Vec<String>,
    pub labels_without_features: Vec<String>,
    pub trivial: Vec<(String, TrivialKind)>,
    pub outliers: Vec<(String, f64)>,
}

impl DropReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let mut section = |title: &str, lines: Vec<String>| {
            let _ = writeln!(s, "[{title}] {}", lines.len());
            for l in lines {
                let _ = writeln!(s, "{l}");
            }
        };
        section("features without label", self.features_without_label.clone());
        section("labels without features", self.labels_without_features.clone());
        section(
            "trivial classes",
            self.trivial.iter().map(|(id, k)| format!("{id}\t{}", if *k == TrivialKind::Simple { "simple" } else { "data" })).collect(),
        );
        section("training outliers", self.outliers.iter().map(|(id, lof)| format!("{id}\tlof={lof}")).collect());
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Prepared {
    pub variant: Variant,
    /// Standardized training rows.
    pub train: Dataset,
    /// Standardized test rows.
    pub test: Dataset,
    pub scaler: ScalerParams,
    pub report: DropReport,
}

/// Join, drop trivial classes, split, drop training outliers, pick the
/// variant columns and standardize with statistics of the training rows.
pub fn prepare(
    features: &FeatureTable,
    labels: &[LabelRow],
    manifest: &Manifest,
    config: &PrepareConfig,
) -> Result<Prepared, DatasetError> {
    let (joined, join_report) = join(features, labels);
    if joined.is_empty() {
        return Err(DatasetError::Empty("joining features with labels"));
    }
    let (kept, trivial) = filter_trivial_classes(&joined)?;
    if kept.is_empty() {
        return Err(DatasetError::Empty("removing trivial classes"));
    }
    let (train, test) = split(&kept, config.train_fraction, config.seed)?;
    let base = static_columns(&train.feature_names, config.variant, manifest)?;
    let (train, test) = (train.select_columns(&base), test.select_columns(&base));
    let (train, outliers) = remove_outliers(&train, config.lof_k, config.lof_threshold)?;
    let (train, test) = if config.variant == Variant::DS2 {
        let cols = top_correlated(&train, DS2_FEATURES);
        (train.select_columns(&cols), test.select_columns(&cols))
    } else {
        (train, test)
    };
    let scaler = ScalerParams::fit(&train.feature_names, &train.rows);
    let scale = |ds: Dataset| Dataset { rows: scaler.transform_rows(&ds.rows), ..ds };
    Ok(Prepared {
        variant: config.variant,
        train: scale(train),
        test: scale(test),
        scaler: scaler.clone(),
        report: DropReport {
            features_without_label: join_report.features_without_label,
            labels_without_features: join_report.labels_without_features,
            trivial,
            outliers,
        },
    })
}
