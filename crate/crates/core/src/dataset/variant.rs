use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{Dataset, DatasetError};
use crate::metrics::{Manifest, MetricBlock, MetricKind};
use crate::stats::pearson_r;

pub const DS2_FEATURES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Variant {
    /// Every metric.
    DS1,
    /// The 20 metrics most correlated with the target on the training rows.
    DS2,
    /// Without the package context block.
    DS3,
    /// Without the context and lexical blocks.
    DS4,
    /// Without derived metrics.
    DS5,
}

impl FromStr for Variant {
    type Err = DatasetError;
    fn from_str(s: &str) -> Result<Self, DatasetError> {
        match s.to_ascii_uppercase().as_str() {
            "DS1" => Ok(Variant::DS1),
            "DS2" => Ok(Variant::DS2),
            "DS3" => Ok(Variant::DS3),
            "DS4" => Ok(Variant::DS4),
            "DS5" => Ok(Variant::DS5),
            _ => Err(DatasetError::UnknownVariant(s.to_string())),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Columns kept by the block and kind rules; DS1 and DS2 keep all of them.
pub fn static_columns(names: &[String], variant: Variant, manifest: &Manifest) -> Result<Vec<usize>, DatasetError> {
    let mut keep = Vec::new();
    for (j, name) in names.iter().enumerate() {
        let e = manifest.entry(name).ok_or_else(|| DatasetError::MissingMetric(name.clone()))?;
        let dropped = match variant {
            Variant::DS1 | Variant::DS2 => false,
            Variant::DS3 => e.block == MetricBlock::Context,
            Variant::DS4 => e.block != MetricBlock::Class,
            Variant::DS5 => e.kind == MetricKind::Derived,
        };
        if !dropped {
            keep.push(j);
        }
    }
    Ok(keep)
}

/// Top `k` columns by absolute Pearson correlation with the target, kept in column order.
/// Constant columns score 0; ties go to the earlier column.
pub fn top_correlated(ds: &Dataset, k: usize) -> Vec<usize> {
    let mut scored: Vec<(usize, f64)> =
        (0..ds.dim()).map(|j| (j, pearson_r(&ds.column(j), &ds.targets).map_or(0.0, f64::abs))).collect();
    scored.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    let mut chosen: Vec<usize> = scored.into_iter().take(k).map(|(j, _)| j).collect();
    chosen.sort_unstable();
    chosen
}

/// Column indices of `train` that form the variant.
pub fn select_variant_columns(train: &Dataset, variant: Variant, manifest: &Manifest) -> Result<Vec<usize>, DatasetError> {
    let base = static_columns(&train.feature_names, variant, manifest)?;
    if variant != Variant::DS2 {
        return Ok(base);
    }
    let picked = top_correlated(&train.select_columns(&base), DS2_FEATURES);
    Ok(picked.into_iter().map(|j| base[j]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn full() -> (Dataset, Manifest) {
        let m = Manifest::default();
        let n = 30;
        let rows: Vec<Vec<f64>> =
            (0..n).map(|i| (0..m.len()).map(|j| ((i * (j + 3)) % 17) as f64 + (j % 5) as f64 * i as f64).collect()).collect();
        let targets = (0..n).map(|i| i as f64 / n as f64).collect();
        let mut ds = Dataset::from_xy(rows, targets);
        ds.feature_names = m.names();
        (ds, m)
    }

    #[test]
    fn ds1_is_identity() {
        let (ds, m) = full();
        assert_eq!(select_variant_columns(&ds, Variant::DS1, &m).unwrap(), (0..m.len()).collect::<Vec<_>>());
    }

    #[test]
    fn ds3_drops_context() {
        let (ds, m) = full();
        let cols = select_variant_columns(&ds, Variant::DS3, &m).unwrap();
        assert!(cols.iter().all(|&j| !ds.feature_names[j].starts_with("PK")));
        assert_eq!(cols.len(), m.len() - 51);
    }

    #[test]
    fn ds4_keeps_class_block_only() {
        let (ds, m) = full();
        let cols = select_variant_columns(&ds, Variant::DS4, &m).unwrap();
        assert_eq!(cols.len(), 131);
    }

    #[test]
    fn ds5_drops_derived() {
        let (ds, m) = full();
        let cols = select_variant_columns(&ds, Variant::DS5, &m).unwrap();
        assert!(cols.iter().all(|&j| m.entries[j].kind == MetricKind::Base));
        assert_eq!(cols.len(), 64);
    }

    #[test]
    fn ds2_has_twenty() {
        let (ds, m) = full();
        assert_eq!(select_variant_columns(&ds, Variant::DS2, &m).unwrap().len(), 20);
    }

    #[test]
    fn correlation_ranking() {
        let rows: Vec<Vec<f64>> = (0..10).map(|i| vec![1.0, (i % 3) as f64, i as f64]).collect();
        let ds = Dataset::from_xy(rows, (0..10).map(|i| i as f64).collect());
        assert_eq!(top_correlated(&ds, 1), vec![2]);
        assert_eq!(top_correlated(&ds, 2), vec![1, 2]);
    }

    #[test]
    fn parse_variant() {
        assert_eq!("ds3".parse::<Variant>().unwrap(), Variant::DS3);
        assert!(matches!("DS9".parse::<Variant>(), Err(DatasetError::UnknownVariant(_))));
    }
}
