//! Testability estimation for classes of an unseen project.
//!
//! Trivial classes (simple or data classes) score 1 without consulting the
//! model. Every other class is measured with the model's manifest, scaled
//! with the persisted training statistics, predicted and clamped to [0, 1].

use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::dataset::{classify_trivial, TrivialKind};
use crate::learners::{LearnerError, TrainedModel};
use crate::metrics::{extract_project, FeatureTable, FeatureVector, Manifest, MetricsError, ProjectIndex};

#[derive(Debug, Error)]
pub enum InferenceError {
    #[error("class `{0}` not found in the project")]
    ClassNotFound(String),
    #[error("model was trained with metric manifest {model} but the extractor uses {extractor}")]
    ManifestMismatch { model: String, extractor: String },
    #[error("metric `{metric}` required by the model is missing for class `{class_id}`")]
    MissingMetric { class_id: String, metric: String },
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    Model(#[from] LearnerError),
}

/// What estimation needs from a fitted model.
pub trait TestabilityModel: Sync {
    fn manifest_hash(&self) -> &str;
    fn feature_names(&self) -> &[String];
    /// Prediction for unscaled metric values in `feature_names` order.
    fn predict_raw(&self, row: &[f64]) -> Result<f64, LearnerError>;
}

impl TestabilityModel for TrainedModel {
    fn manifest_hash(&self) -> &str {
        &self.manifest_hash
    }

    fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    fn predict_raw(&self, row: &[f64]) -> Result<f64, LearnerError> {
        TrainedModel::predict_raw(self, row)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Estimate {
    pub class_id: String,
    pub testability: f64,
    /// Set when the class was scored 1 without the model.
    pub trivial: Option<TrivialKind>,
    /// Unclamped model output.
    pub raw: Option<f64>,
}

pub fn clamp_testability(raw: f64) -> f64 {
    raw.clamp(0.0, 1.0)
}

pub fn check_manifest<M: TestabilityModel + ?Sized>(model: &M, manifest: &Manifest) -> Result<(), InferenceError> {
    let extractor = manifest.hash();
    if model.manifest_hash() != extractor {
        return Err(InferenceError::ManifestMismatch { model: model.manifest_hash().to_string(), extractor });
    }
    Ok(())
}

fn metric(fv: &FeatureVector, name: &str) -> Result<f64, InferenceError> {
    fv.get(name).ok_or_else(|| InferenceError::MissingMetric { class_id: fv.class_id.clone(), metric: name.to_string() })
}

/// Scores one measured class.
pub fn estimate_from_features<M: TestabilityModel + ?Sized>(fv: &FeatureVector, model: &M) -> Result<Estimate, InferenceError> {
    let trivial = classify_trivial(
        metric(fv, "CSLOC")?,
        metric(fv, "CSNOMNAMM")?,
        metric(fv, "CSNOIA")?,
        metric(fv, "CSNOSA")?,
    );
    if trivial.is_some() {
        return Ok(Estimate { class_id: fv.class_id.clone(), testability: 1.0, trivial, raw: None });
    }
    let row = model.feature_names().iter().map(|n| metric(fv, n)).collect::<Result<Vec<f64>, _>>()?;
    let raw = model.predict_raw(&row)?;
    Ok(Estimate { class_id: fv.class_id.clone(), testability: clamp_testability(raw), trivial: None, raw: Some(raw) })
}

/// Measures the project and scores `class_id`.
pub fn estimate_testability<M: TestabilityModel + ?Sized>(
    class_id: &str,
    project_dir: &Path,
    model: &M,
    manifest: &Manifest,
) -> Result<Estimate, InferenceError> {
    check_manifest(model, manifest)?;
    let index = ProjectIndex::from_dir(project_dir)?;
    if index.get(class_id).is_none() {
        return Err(InferenceError::ClassNotFound(class_id.to_string()));
    }
    let table = extract_project(&index, manifest)?;
    let fv = table.get(class_id).ok_or_else(|| InferenceError::ClassNotFound(class_id.to_string()))?;
    estimate_from_features(fv, model)
}

/// Scores every class of an extracted table, in table order.
pub fn estimate_table<M: TestabilityModel + ?Sized>(table: &FeatureTable, model: &M) -> Result<Vec<Estimate>, InferenceError> {
    table.rows.par_iter().map(|fv| estimate_from_features(fv, model)).collect()
}

pub fn estimates_to_csv(estimates: &[Estimate]) -> String {
    let mut out = String::from("class_id,testability\n");
    for e in estimates {
        out.push_str(&format!("{},{}\n", e.class_id, e.testability));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Fixed {
        names: Vec<String>,
        value: f64,
    }

    impl TestabilityModel for Fixed {
        fn manifest_hash(&self) -> &str {
            "fixed"
        }
        fn feature_names(&self) -> &[String] {
            &self.names
        }
        fn predict_raw(&self, _: &[f64]) -> Result<f64, LearnerError> {
            Ok(self.value)
        }
    }

    struct Aborting;

    impl TestabilityModel for Aborting {
        fn manifest_hash(&self) -> &str {
            "abort"
        }
        fn feature_names(&self) -> &[String] {
            panic!("model consulted for a trivial class")
        }
        fn predict_raw(&self, _: &[f64]) -> Result<f64, LearnerError> {
            panic!("model consulted for a trivial class")
        }
    }

    fn fv(loc: f64, nomnamm: f64, noia: f64) -> FeatureVector {
        FeatureVector {
            class_id: "p.C".into(),
            entries: vec![
                ("CSLOC".into(), loc),
                ("CSNOMNAMM".into(), nomnamm),
                ("CSNOIA".into(), noia),
                ("CSNOSA".into(), 0.0),
            ],
        }
    }

    #[test]
    fn trivial_classes_skip_the_model() {
        let data = estimate_from_features(&fv(20.0, 0.0, 2.0), &Aborting).unwrap();
        assert_eq!((data.testability, data.trivial), (1.0, Some(TrivialKind::Data)));
        let simple = estimate_from_features(&fv(3.0, 1.0, 0.0), &Aborting).unwrap();
        assert_eq!((simple.testability, simple.trivial), (1.0, Some(TrivialKind::Simple)));
    }

    #[test]
    fn outputs_are_clamped() {
        let names = vec!["CSLOC".to_string()];
        for (raw, want) in [(-0.07, 0.0), (1.2, 1.0), (0.42, 0.42)] {
            let e = estimate_from_features(&fv(30.0, 2.0, 1.0), &Fixed { names: names.clone(), value: raw }).unwrap();
            assert_eq!(e.testability, want);
            assert_eq!(e.raw, Some(raw));
        }
    }

    #[test]
    fn missing_metric_is_reported() {
        let m = Fixed { names: vec!["CSXYZ".into()], value: 0.5 };
        assert!(matches!(estimate_from_features(&fv(30.0, 2.0, 1.0), &m), Err(InferenceError::MissingMetric { .. })));
    }

    #[test]
    fn manifest_mismatch() {
        let m = Fixed { names: vec![], value: 0.5 };
        assert!(matches!(check_manifest(&m, &Manifest::default()), Err(InferenceError::ManifestMismatch { .. })));
    }

    #[test]
    fn unknown_class() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("A.java"), "class A { int x; }").unwrap();
        struct Hash(String);
        impl TestabilityModel for Hash {
            fn manifest_hash(&self) -> &str {
                &self.0
            }
            fn feature_names(&self) -> &[String] {
                &[]
            }
            fn predict_raw(&self, _: &[f64]) -> Result<f64, LearnerError> {
                Ok(0.5)
            }
        }
        let manifest = Manifest::default();
        let model = Hash(manifest.hash());
        let r = estimate_testability("B", dir.path(), &model, &manifest);
        assert!(matches!(r, Err(InferenceError::ClassNotFound(_))));
        let a = estimate_testability("A", dir.path(), &model, &manifest).unwrap();
        assert_eq!(a.testability, 1.0);
    }
}
