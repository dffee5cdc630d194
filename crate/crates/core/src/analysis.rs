//! Permutation feature importance and metric/testability correlations.

use std::fmt::Write as _;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::dataset::Dataset;
use crate::learners::{derive_seed, r2_score, LearnerError, Regressor};
use crate::stats::{mean, pearson, quantile_sorted, variance};

pub const DEFAULT_REPEATS: usize = 100;
pub const DEFAULT_TOP: usize = 15;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Model(#[from] LearnerError),
    #[error("test targets are constant; R² is undefined")]
    ConstantTarget,
    #[error("{path}: {reason}")]
    Io { path: String, reason: String },
}

/// Drops in R² per feature and repeat, against one shared baseline.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Importances {
    pub feature_names: Vec<String>,
    pub baseline_r2: f64,
    pub samples: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedFeature {
    pub feature: String,
    pub index: usize,
    pub mean: f64,
    pub sd: f64,
}

/// Shuffles one test column at a time and records `baseline - shuffled` R².
/// Feature `f` draws its permutations from its own seeded stream.
pub fn permutation_importance<M: Regressor + ?Sized>(
    model: &M,
    test: &Dataset,
    repeats: usize,
    seed: u64,
) -> Result<Importances, AnalysisError> {
    let baseline_preds = model.predict_rows(&test.rows)?;
    let baseline_r2 = r2_score(&baseline_preds, &test.targets).ok_or(AnalysisError::ConstantTarget)?;
    let samples = (0..test.dim())
        .into_par_iter()
        .map(|f| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, f as u64));
            let mut column = test.column(f);
            let mut rows = test.rows.clone();
            (0..repeats)
                .map(|_| {
                    column.shuffle(&mut rng);
                    for (row, &v) in rows.iter_mut().zip(&column) {
                        row[f] = v;
                    }
                    let preds = model.predict_rows_unchecked(&rows);
                    baseline_r2 - r2_score(&preds, &test.targets).expect("targets checked above")
                })
                .collect()
        })
        .collect();
    Ok(Importances { feature_names: test.feature_names.clone(), baseline_r2, samples })
}

impl Importances {
    pub fn is_empty(&self) -> bool {
        self.feature_names.is_empty() || self.samples.iter().all(Vec::is_empty)
    }

    /// Features by descending mean drop; equal means order by name.
    pub fn ranking(&self) -> Vec<RankedFeature> {
        let mut ranked: Vec<RankedFeature> = self
            .feature_names
            .iter()
            .zip(&self.samples)
            .enumerate()
            .filter(|(_, (_, s))| !s.is_empty())
            .map(|(index, (name, s))| RankedFeature {
                feature: name.clone(),
                index,
                mean: mean(s),
                sd: if s.len() > 1 { variance(s, 1).sqrt() } else { 0.0 },
            })
            .collect();
        ranked.sort_by(|a, b| b.mean.total_cmp(&a.mean).then_with(|| a.feature.cmp(&b.feature)));
        ranked
    }

    pub fn top(&self, k: usize) -> Vec<RankedFeature> {
        let mut r = self.ranking();
        r.truncate(k);
        r
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Correlation {
    pub feature: String,
    /// `None` when the feature is constant.
    pub r: Option<f64>,
    pub p_value: Option<f64>,
}

/// Pearson correlation of every feature with the target.
pub fn correlations(ds: &Dataset) -> Vec<Correlation> {
    (0..ds.dim())
        .map(|f| {
            let (r, p_value) = match pearson(&ds.column(f), &ds.targets) {
                Ok((r, p)) => (Some(r), Some(p)),
                Err(_) => (None, None),
            };
            Correlation { feature: ds.feature_names[f].clone(), r, p_value }
        })
        .collect()
}

/// Rendered report files, in write order.
#[derive(Debug, Clone, PartialEq)]
pub struct ImportanceReport {
    pub files: Vec<(String, String)>,
    pub warnings: Vec<String>,
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(String::new, |v| v.to_string())
}

fn min_max(values: &[f64]) -> Vec<f64> {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    values.iter().map(|v| if hi > lo { (v - lo) / (hi - lo) } else { 0.0 }).collect()
}

/// Least-squares line `y = slope * x + intercept`; `None` for constant `x`.
fn fit_line(x: &[f64], y: &[f64]) -> Option<(f64, f64)> {
    let (mx, my) = (mean(x), mean(y));
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}

struct BoxStats {
    min: f64,
    q1: f64,
    median: f64,
    q3: f64,
    max: f64,
}

fn box_stats(samples: &[f64]) -> BoxStats {
    let mut s = samples.to_vec();
    s.sort_by(f64::total_cmp);
    BoxStats {
        min: s[0],
        q1: quantile_sorted(&s, 0.25),
        median: quantile_sorted(&s, 0.5),
        q3: quantile_sorted(&s, 0.75),
        max: s[s.len() - 1],
    }
}

/// Builds the top-`top` importance table, raw samples, correlation table,
/// min-max normalized scatter data from `data`, and a box-plot SVG.
pub fn importance_report(
    importances: &Importances,
    correlations: &[Correlation],
    data: &Dataset,
    top: usize,
) -> ImportanceReport {
    let mut warnings = Vec::new();
    let ranked = importances.top(top);
    if ranked.is_empty() {
        warnings.push("no feature importances to report".to_string());
    }
    let corr_of = |name: &str| correlations.iter().find(|c| c.feature == name);

    let mut table = String::from("rank,feature,mean,sd,min,q1,median,q3,max,r,p_value\n");
    let mut raw = String::from("feature,repeat,drop\n");
    let mut corr = String::from("feature,r,p_value,slope,intercept\n");
    let mut scatter = String::from("feature,class_id,normalized_value,target\n");
    let mut boxes = Vec::new();
    for (rank, f) in ranked.iter().enumerate() {
        let samples = &importances.samples[f.index];
        let b = box_stats(samples);
        let c = corr_of(&f.feature);
        let _ = writeln!(
            table,
            "{},{},{},{},{},{},{},{},{},{},{}",
            rank + 1,
            f.feature,
            f.mean,
            f.sd,
            b.min,
            b.q1,
            b.median,
            b.q3,
            b.max,
            opt(c.and_then(|c| c.r)),
            opt(c.and_then(|c| c.p_value))
        );
        for (i, v) in samples.iter().enumerate() {
            let _ = writeln!(raw, "{},{},{}", f.feature, i, v);
        }
        match data.feature_index(&f.feature) {
            Some(col) => {
                let normalized = min_max(&data.column(col));
                let line = fit_line(&normalized, &data.targets);
                let _ = writeln!(
                    corr,
                    "{},{},{},{},{}",
                    f.feature,
                    opt(c.and_then(|c| c.r)),
                    opt(c.and_then(|c| c.p_value)),
                    opt(line.map(|l| l.0)),
                    opt(line.map(|l| l.1))
                );
                for ((id, x), y) in data.class_ids.iter().zip(&normalized).zip(&data.targets) {
                    let _ = writeln!(scatter, "{},{},{},{}", f.feature, id, x, y);
                }
            }
            None => warnings.push(format!("feature `{}` is not in the scatter dataset", f.feature)),
        }
        boxes.push((f.feature.clone(), b));
    }
    let files = vec![
        ("importance.csv".to_string(), table),
        ("importance_samples.csv".to_string(), raw),
        ("correlation.csv".to_string(), corr),
        ("scatter.csv".to_string(), scatter),
        ("importance.svg".to_string(), render_boxes(&boxes, importances.baseline_r2)),
    ];
    ImportanceReport { files, warnings }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn render_boxes(boxes: &[(String, BoxStats)], baseline: f64) -> String {
    const LABEL_W: f64 = 180.0;
    const PLOT_W: f64 = 560.0;
    const ROW_H: f64 = 24.0;
    const TOP: f64 = 30.0;
    let height = TOP + ROW_H * boxes.len() as f64 + 40.0;
    let width = LABEL_W + PLOT_W + 30.0;
    let lo = boxes.iter().map(|(_, b)| b.min).fold(0.0, f64::min);
    let mut hi = boxes.iter().map(|(_, b)| b.max).fold(0.0, f64::max);
    if hi <= lo {
        hi = lo + 1.0;
    }
    let x = |v: f64| LABEL_W + (v - lo) / (hi - lo) * PLOT_W;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<rect width="{width}" height="{height}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{LABEL_W}" y="18">Permutation importance (R² drop, baseline {baseline:.4})</text>"#
    );
    for (i, (name, b)) in boxes.iter().enumerate() {
        let cy = TOP + ROW_H * i as f64 + ROW_H / 2.0;
        let (y0, y1) = (cy - ROW_H * 0.3, cy + ROW_H * 0.3);
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#, LABEL_W - 6.0, cy + 4.0, xml_escape(name));
        let _ = writeln!(s, r#"<line x1="{:.2}" y1="{cy:.2}" x2="{:.2}" y2="{cy:.2}" stroke="black"/>"#, x(b.min), x(b.max));
        let _ = writeln!(
            s,
            r##"<rect x="{:.2}" y="{y0:.2}" width="{:.2}" height="{:.2}" fill="#9ecae1" stroke="black"/>"##,
            x(b.q1),
            (x(b.q3) - x(b.q1)).max(0.5),
            y1 - y0
        );
        let _ = writeln!(s, r#"<line x1="{0:.2}" y1="{y0:.2}" x2="{0:.2}" y2="{y1:.2}" stroke="black" stroke-width="2"/>"#, x(b.median));
    }
    let axis_y = TOP + ROW_H * boxes.len() as f64 + 8.0;
    let _ = writeln!(s, r#"<line x1="{LABEL_W}" y1="{axis_y:.2}" x2="{:.2}" y2="{axis_y:.2}" stroke="black"/>"#, LABEL_W + PLOT_W);
    for t in 0..=4 {
        let v = lo + (hi - lo) * t as f64 / 4.0;
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{v:.3}</text>"#, x(v), axis_y + 16.0);
    }
    let zero = x(0.0);
    let _ = writeln!(s, r#"<line x1="{zero:.2}" y1="{TOP}" x2="{zero:.2}" y2="{axis_y:.2}" stroke="grey" stroke-dasharray="3,3"/>"#);
    s.push_str("</svg>\n");
    s
}

impl ImportanceReport {
    pub fn write(&self, dir: &Path) -> Result<(), AnalysisError> {
        let io = |p: &Path, e: std::io::Error| AnalysisError::Io { path: p.display().to_string(), reason: e.to_string() };
        std::fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
        for (name, content) in &self.files {
            let path = dir.join(name);
            std::fs::write(&path, content).map_err(|e| io(&path, e))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learners::{RegressionTree, TreeParams};

    fn step_tree() -> (RegressionTree, Dataset) {
        let rows: Vec<Vec<f64>> = (0..40).map(|i| vec![i as f64, 3.0, (i * 7 % 11) as f64]).collect();
        let y: Vec<f64> = (0..40).map(|i| if i < 20 { 0.0 } else { 1.0 }).collect();
        let ds = Dataset::from_xy(rows, y);
        let tree = RegressionTree::fit(&ds, &TreeParams { max_depth: 1, min_samples_split: 2, ..TreeParams::default() }).unwrap();
        (tree, ds)
    }

    #[test]
    fn perfect_tree_importances() {
        let (tree, ds) = step_tree();
        let imp = permutation_importance(&tree, &ds, 20, 5).unwrap();
        assert_eq!(imp.baseline_r2, 1.0);
        assert!(imp.samples[1].iter().all(|&d| d == 0.0));
        assert!(imp.samples[2].iter().all(|&d| d == 0.0));
        assert!(imp.samples[0].iter().all(|&d| d > 0.0));
        assert_eq!(imp.ranking()[0].feature, "x0");
    }

    #[test]
    fn reproducible_from_seed() {
        let (tree, ds) = step_tree();
        let a = permutation_importance(&tree, &ds, 10, 9).unwrap();
        let b = permutation_importance(&tree, &ds, 10, 9).unwrap();
        assert_eq!(a, b);
        let c = permutation_importance(&tree, &ds, 10, 10).unwrap();
        assert_ne!(a.samples[0], c.samples[0]);
    }

    #[test]
    fn ties_rank_by_name() {
        let imp = Importances {
            feature_names: vec!["b".into(), "a".into(), "c".into()],
            baseline_r2: 0.5,
            samples: vec![vec![0.1, 0.3], vec![0.2, 0.2], vec![0.5]],
        };
        let names: Vec<String> = imp.ranking().into_iter().map(|r| r.feature).collect();
        assert_eq!(names, ["c", "a", "b"]);
    }

    #[test]
    fn constant_target_is_rejected() {
        let (tree, mut ds) = step_tree();
        ds.targets = vec![0.5; ds.len()];
        assert!(matches!(permutation_importance(&tree, &ds, 3, 1), Err(AnalysisError::ConstantTarget)));
    }

    #[test]
    fn report_limits_rows() {
        let names: Vec<String> = (0..40).map(|i| format!("m{i:02}")).collect();
        let imp = Importances {
            feature_names: names.clone(),
            baseline_r2: 0.8,
            samples: (0..40).map(|i| vec![i as f64 * 0.01, i as f64 * 0.02]).collect(),
        };
        let rows: Vec<Vec<f64>> = (0..10).map(|r| (0..40).map(|c| (r * c) as f64).collect()).collect();
        let data = Dataset::new(names, (0..10).map(|i| format!("C{i}")).collect(), rows, (0..10).map(|i| i as f64 / 10.0).collect());
        let corr = correlations(&data);
        assert_eq!(corr[0].r, None);
        let report = importance_report(&imp, &corr, &data, 15);
        assert!(report.warnings.is_empty());
        let table = &report.files[0].1;
        assert_eq!(table.lines().count(), 16);
        assert!(table.lines().nth(1).unwrap().starts_with("1,m39,"));
        assert!(report.files[4].1.starts_with("<svg"));
    }

    #[test]
    fn empty_report_warns() {
        let imp = Importances { feature_names: vec![], baseline_r2: 0.0, samples: vec![] };
        let report = importance_report(&imp, &[], &Dataset::from_xy(vec![], vec![]), 15);
        assert_eq!(report.warnings.len(), 1);
        assert_eq!(report.files[0].1.lines().count(), 1);
    }
}
