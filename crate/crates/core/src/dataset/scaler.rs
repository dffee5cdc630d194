use serde::{Deserialize, Serialize};

/// Per-feature z-score parameters fitted on training rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalerParams {
    pub feature_names: Vec<String>,
    pub means: Vec<f64>,
    /// Population standard deviations; zero marks a degenerate feature.
    pub sds: Vec<f64>,
}

impl ScalerParams {
    pub fn fit(feature_names: &[String], rows: &[Vec<f64>]) -> Self {
        let d = feature_names.len();
        let n = rows.len() as f64;
        let mut means = vec![0.0; d];
        let mut sds = vec![0.0; d];
        if !rows.is_empty() {
            for j in 0..d {
                let m = rows.iter().map(|r| r[j]).sum::<f64>() / n;
                let var = rows.iter().map(|r| (r[j] - m) * (r[j] - m)).sum::<f64>() / n;
                means[j] = m;
                sds[j] = var.sqrt();
            }
        }
        ScalerParams { feature_names: feature_names.to_vec(), means, sds }
    }

    pub fn is_degenerate(&self, j: usize) -> bool {
        self.sds[j] == 0.0
    }

    pub fn transform(&self, row: &[f64]) -> Vec<f64> {
        row.iter()
            .enumerate()
            .map(|(j, &x)| if self.is_degenerate(j) { 0.0 } else { (x - self.means[j]) / self.sds[j] })
            .collect()
    }

    pub fn transform_rows(&self, rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
        rows.iter().map(|r| self.transform(r)).collect()
    }
}
