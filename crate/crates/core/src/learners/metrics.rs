use serde::{Deserialize, Serialize};

use super::LearnerError;
use crate::stats::median;

/// Regression scores. `r2` is `None` when the targets are constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub mae: f64,
    pub mse: f64,
    pub rmse: f64,
    pub mdae: f64,
    pub r2: Option<f64>,
}

pub fn evaluate(preds: &[f64], targets: &[f64]) -> Result<Evaluation, LearnerError> {
    if preds.len() != targets.len() {
        return Err(LearnerError::InvalidInput(format!("{} predictions for {} targets", preds.len(), targets.len())));
    }
    if targets.len() < 2 {
        return Err(LearnerError::InvalidInput("need at least two samples to evaluate".into()));
    }
    let n = targets.len() as f64;
    let abs: Vec<f64> = preds.iter().zip(targets).map(|(p, t)| (p - t).abs()).collect();
    let ss_res: f64 = preds.iter().zip(targets).map(|(p, t)| (p - t) * (p - t)).sum();
    let mean = targets.iter().sum::<f64>() / n;
    let ss_tot: f64 = targets.iter().map(|t| (t - mean) * (t - mean)).sum();
    let mse = ss_res / n;
    Ok(Evaluation {
        mae: abs.iter().sum::<f64>() / n,
        mse,
        rmse: mse.sqrt(),
        mdae: median(&abs),
        r2: (ss_tot > 0.0).then(|| 1.0 - ss_res / ss_tot),
    })
}

/// Coefficient of determination, `None` for constant targets.
pub fn r2_score(preds: &[f64], targets: &[f64]) -> Option<f64> {
    let n = targets.len() as f64;
    let mean = targets.iter().sum::<f64>() / n;
    let ss_tot: f64 = targets.iter().map(|t| (t - mean) * (t - mean)).sum();
    let ss_res: f64 = preds.iter().zip(targets).map(|(p, t)| (p - t) * (p - t)).sum();
    (ss_tot > 0.0).then(|| 1.0 - ss_res / ss_tot)
}

pub fn rmse(preds: &[f64], targets: &[f64]) -> f64 {
    (preds.iter().zip(targets).map(|(p, t)| (p - t) * (p - t)).sum::<f64>() / targets.len() as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_fit() {
        let t = [0.1, 0.5, 0.9];
        let e = evaluate(&t, &t).unwrap();
        assert_eq!((e.mae, e.mse, e.rmse, e.mdae, e.r2), (0.0, 0.0, 0.0, 0.0, Some(1.0)));
    }

    #[test]
    fn mean_prediction_has_zero_r2() {
        let t = [1.0, 2.0, 3.0, 6.0];
        assert_eq!(evaluate(&[3.0; 4], &t).unwrap().r2, Some(0.0));
    }

    #[test]
    fn hand_example() {
        let e = evaluate(&[0.0, 1.0], &[1.0, 1.0]).unwrap();
        assert_eq!((e.mae, e.mse, e.mdae), (0.5, 0.5, 0.5));
        assert!((e.rmse - 0.70710678).abs() < 1e-8);
        assert_eq!(e.r2, None);
    }

    #[test]
    fn input_checks() {
        assert!(evaluate(&[1.0], &[1.0]).is_err());
        assert!(evaluate(&[1.0, 2.0], &[1.0]).is_err());
    }
}
