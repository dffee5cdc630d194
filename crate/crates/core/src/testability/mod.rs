//! Coverage-based testability labels.
//!
//! `T = T_Q / T_E`, where `T_Q` is the mean coverage over the adequacy
//! criteria and `T_E = (1 + ω)^(⌈|τ| / NOM⌉ − 1)` is the test effort with
//! `ω = max(0, (t − 1) / |τ|)`. Generation time `t` is in minutes.

pub mod io;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use io::{label_records, labels_to_csv, parse_labels, read_coverage, read_labels, write_labels, ColumnMapping, LabelRow};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TestabilityError {
    #[error("{0}: no coverage criteria")]
    EmptyCriteria(String),
    #[error("{0}: suite size is zero")]
    ZeroSuite(String),
    #[error("{class_id}: runs disagree on the criteria set")]
    KeyMismatch { class_id: String },
    #[error("no records to aggregate")]
    EmptyComponent,
    #[error("{class_id}: {reason}")]
    InvalidRecord { class_id: String, reason: String },
    #[error("{origin}: line {line}, column `{column}`: {reason}")]
    Data { origin: String, line: usize, column: String, reason: String },
    #[error("{path}: {reason}")]
    Io { path: String, reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageRecord {
    pub class_id: String,
    /// Criterion name to coverage level in [0, 1].
    pub criteria: BTreeMap<String, f64>,
    /// Size of the minimized suite; may be fractional after averaging runs.
    pub suite_size: f64,
    pub nom: f64,
    /// Generation time in minutes.
    pub gen_time: f64,
}

impl CoverageRecord {
    pub fn validate(&self) -> Result<(), TestabilityError> {
        let bad = |reason: String| TestabilityError::InvalidRecord { class_id: self.class_id.clone(), reason };
        if self.criteria.is_empty() {
            return Err(TestabilityError::EmptyCriteria(self.class_id.clone()));
        }
        for (k, v) in &self.criteria {
            if !(0.0..=1.0).contains(v) {
                return Err(bad(format!("coverage `{k}` = {v} is outside [0, 1]")));
            }
        }
        if !(self.nom >= 1.0) {
            return Err(bad(format!("nom = {} must be at least 1", self.nom)));
        }
        if !(self.suite_size >= 0.0) || !self.suite_size.is_finite() {
            return Err(bad(format!("suite size {} must be a non-negative number", self.suite_size)));
        }
        if !(self.gen_time >= 0.0) || !self.gen_time.is_finite() {
            return Err(bad(format!("generation time {} must be a non-negative number", self.gen_time)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestabilityScore {
    pub t_q: f64,
    pub t_e: f64,
    pub t_p: f64,
    pub testability: f64,
}

/// Mean coverage level.
pub fn test_effectiveness(r: &CoverageRecord) -> Result<f64, TestabilityError> {
    if r.criteria.is_empty() {
        return Err(TestabilityError::EmptyCriteria(r.class_id.clone()));
    }
    Ok(r.criteria.values().sum::<f64>() / r.criteria.len() as f64)
}

/// Average time per influential test beyond the first minute, clamped at 0.
pub fn omega(r: &CoverageRecord) -> Result<f64, TestabilityError> {
    if r.suite_size == 0.0 {
        return Err(TestabilityError::ZeroSuite(r.class_id.clone()));
    }
    Ok(((r.gen_time - 1.0) / r.suite_size).max(0.0))
}

pub fn test_effort(r: &CoverageRecord) -> f64 {
    match omega(r) {
        Err(_) => 1.0,
        Ok(w) => {
            let exponent = (r.suite_size / r.nom).ceil() - 1.0;
            (1.0 + w).powf(exponent.max(0.0))
        }
    }
}

pub fn testability(r: &CoverageRecord) -> Result<TestabilityScore, TestabilityError> {
    let t_q = test_effectiveness(r)?;
    let t_e = test_effort(r);
    Ok(TestabilityScore { t_q, t_e, t_p: 1.0 / t_e, testability: (t_q / t_e).clamp(0.0, 1.0) })
}

/// Mean testability of the classes of a component.
pub fn component_testability(scores: &[TestabilityScore]) -> Result<f64, TestabilityError> {
    if scores.is_empty() {
        return Err(TestabilityError::EmptyComponent);
    }
    Ok(scores.iter().map(|s| s.testability).sum::<f64>() / scores.len() as f64)
}

/// Field-wise mean over repeated runs of one class.
pub fn average_runs(runs: &[CoverageRecord]) -> Result<CoverageRecord, TestabilityError> {
    let first = runs.first().ok_or(TestabilityError::EmptyComponent)?;
    if runs.len() == 1 {
        return Ok(first.clone());
    }
    let k = runs.len() as f64;
    for r in runs {
        if r.class_id != first.class_id || !r.criteria.keys().eq(first.criteria.keys()) {
            return Err(TestabilityError::KeyMismatch { class_id: first.class_id.clone() });
        }
    }
    let mean = |f: &dyn Fn(&CoverageRecord) -> f64| runs.iter().map(f).sum::<f64>() / k;
    let criteria = first.criteria.keys().map(|c| (c.clone(), mean(&|r| r.criteria[c]))).collect();
    Ok(CoverageRecord {
        class_id: first.class_id.clone(),
        criteria,
        suite_size: mean(&|r| r.suite_size),
        nom: mean(&|r| r.nom),
        gen_time: mean(&|r| r.gen_time),
    })
}
