//! Bundled sample project and an end-to-end run over it with synthetic coverage.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::dataset::io::write_prepared;
use crate::dataset::{prepare, DatasetError, PrepareConfig, Variant};
use crate::inference::{estimate_table, estimates_to_csv, InferenceError};
use crate::learners::{
    derive_seed, evaluate, EnsembleParams, Evaluation, ForestParams, HgbParams, LearnerError, MlpParams, Regressor,
    TrainedModel, VotingEnsemble, VotingWeights,
};
use crate::metrics::{extract_project, FeatureTable, Manifest, MetricsError, ProjectIndex};
use crate::testability::{label_records, labels_to_csv, read_coverage, ColumnMapping, TestabilityError};

/// `(relative path, source)` of every file in the sample project.
pub const DEMO_SOURCES: &[(&str, &str)] = &[
    ("Bootstrap.java", include_str!("../fixtures/demo/Bootstrap.java")),
    ("shop/app/AuditLog.java", include_str!("../fixtures/demo/shop/app/AuditLog.java")),
    ("shop/app/CommandParser.java", include_str!("../fixtures/demo/shop/app/CommandParser.java")),
    ("shop/app/Event.java", include_str!("../fixtures/demo/shop/app/Event.java")),
    ("shop/app/EventBus.java", include_str!("../fixtures/demo/shop/app/EventBus.java")),
    ("shop/app/Listener.java", include_str!("../fixtures/demo/shop/app/Listener.java")),
    ("shop/app/Main.java", include_str!("../fixtures/demo/shop/app/Main.java")),
    ("shop/app/Report.java", include_str!("../fixtures/demo/shop/app/Report.java")),
    ("shop/app/Retry.java", include_str!("../fixtures/demo/shop/app/Retry.java")),
    ("shop/app/Scheduler.java", include_str!("../fixtures/demo/shop/app/Scheduler.java")),
    ("shop/app/Version.java", include_str!("../fixtures/demo/shop/app/Version.java")),
    ("shop/model/Address.java", include_str!("../fixtures/demo/shop/model/Address.java")),
    ("shop/model/Customer.java", include_str!("../fixtures/demo/shop/model/Customer.java")),
    ("shop/model/Item.java", include_str!("../fixtures/demo/shop/model/Item.java")),
    ("shop/model/Money.java", include_str!("../fixtures/demo/shop/model/Money.java")),
    ("shop/model/Order.java", include_str!("../fixtures/demo/shop/model/Order.java")),
    ("shop/model/OrderLine.java", include_str!("../fixtures/demo/shop/model/OrderLine.java")),
    ("shop/model/Tag.java", include_str!("../fixtures/demo/shop/model/Tag.java")),
    ("shop/service/BulkDiscount.java", include_str!("../fixtures/demo/shop/service/BulkDiscount.java")),
    ("shop/service/CardPayment.java", include_str!("../fixtures/demo/shop/service/CardPayment.java")),
    ("shop/service/Checkout.java", include_str!("../fixtures/demo/shop/service/Checkout.java")),
    ("shop/service/CompositeDiscount.java", include_str!("../fixtures/demo/shop/service/CompositeDiscount.java")),
    ("shop/service/DiscountPolicy.java", include_str!("../fixtures/demo/shop/service/DiscountPolicy.java")),
    ("shop/service/Inventory.java", include_str!("../fixtures/demo/shop/service/Inventory.java")),
    ("shop/service/InvoicePrinter.java", include_str!("../fixtures/demo/shop/service/InvoicePrinter.java")),
    ("shop/service/PaymentGateway.java", include_str!("../fixtures/demo/shop/service/PaymentGateway.java")),
    ("shop/service/PercentDiscount.java", include_str!("../fixtures/demo/shop/service/PercentDiscount.java")),
    ("shop/service/PricingEngine.java", include_str!("../fixtures/demo/shop/service/PricingEngine.java")),
    ("shop/util/Graph.java", include_str!("../fixtures/demo/shop/util/Graph.java")),
    ("shop/util/Ids.java", include_str!("../fixtures/demo/shop/util/Ids.java")),
    ("shop/util/LruCache.java", include_str!("../fixtures/demo/shop/util/LruCache.java")),
    ("shop/util/MathUtil.java", include_str!("../fixtures/demo/shop/util/MathUtil.java")),
    ("shop/util/Matrix.java", include_str!("../fixtures/demo/shop/util/Matrix.java")),
    ("shop/util/Pair.java", include_str!("../fixtures/demo/shop/util/Pair.java")),
    ("shop/util/Sorting.java", include_str!("../fixtures/demo/shop/util/Sorting.java")),
    ("shop/util/Strings.java", include_str!("../fixtures/demo/shop/util/Strings.java")),
    ("shop/util/Tokenizer.java", include_str!("../fixtures/demo/shop/util/Tokenizer.java")),
    ("shop/util/Validator.java", include_str!("../fixtures/demo/shop/util/Validator.java")),
];

pub const DEMO_RUNS: usize = 5;
pub const DEMO_LOF_K: usize = 5;

#[derive(Debug, Error)]
pub enum DemoError {
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    Testability(#[from] TestabilityError),
    #[error(transparent)]
    Dataset(#[from] DatasetError),
    #[error(transparent)]
    Learner(#[from] LearnerError),
    #[error(transparent)]
    Inference(#[from] InferenceError),
    #[error("{path}: {reason}")]
    Io { path: String, reason: String },
}

pub fn demo_sources() -> Vec<(String, String)> {
    DEMO_SOURCES.iter().map(|(p, s)| (p.to_string(), s.to_string())).collect()
}

/// Writes the sample project under `dir`.
pub fn write_demo_project(dir: &Path) -> Result<(), DemoError> {
    for (rel, text) in DEMO_SOURCES {
        let path = dir.join(rel);
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent).map_err(|e| io_err(parent, e))?;
        }
        std::fs::write(&path, text).map_err(|e| io_err(&path, e))?;
    }
    Ok(())
}

fn io_err(path: &Path, e: std::io::Error) -> DemoError {
    DemoError::Io { path: path.display().to_string(), reason: e.to_string() }
}

/// Coverage runs that fall as size, coupling and response set grow.
pub fn synthetic_coverage(features: &FeatureTable, runs: usize, seed: u64) -> String {
    let mut out = String::from("class_id,run_id,statement,branch,mutation,suite_size,nom,gen_time_minutes\n");
    for (c, fv) in features.rows.iter().enumerate() {
        let get = |n: &str| fv.get(n).unwrap_or(0.0);
        let difficulty = 0.015 * get("CSNOST") + 0.04 * get("CSCBO") + 0.01 * get("CSRFC");
        let nom = get("CSNOM").max(1.0);
        for run in 0..runs {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, (c * runs + run) as u64));
            let statement = (1.0 / (1.0 + difficulty) + rng.gen_range(-0.05..0.05)).clamp(0.0, 1.0);
            let branch = (statement * rng.gen_range(0.8..1.0)).clamp(0.0, 1.0);
            let mutation = (statement * rng.gen_range(0.55..0.9)).clamp(0.0, 1.0);
            let suite = 1.0 + (nom * (1.0 + difficulty) * rng.gen_range(0.8..1.2)).round();
            let minutes = 1.0 + suite * rng.gen_range(0.02..0.08);
            let _ = writeln!(out, "{},{run},{statement},{branch},{mutation},{suite},{nom},{minutes}", fv.class_id);
        }
    }
    out
}

/// Small ensemble sized for a few dozen rows.
pub fn demo_params() -> EnsembleParams {
    EnsembleParams {
        weights: VotingWeights::default(),
        hgb: HgbParams { max_iter: 100, min_samples_leaf: 3, ..HgbParams::default() },
        forest: ForestParams { n_estimators: 50, ..ForestParams::default() },
        mlp: MlpParams { hidden: vec![64, 32], epochs: 100, batch_size: 16, ..MlpParams::default() },
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DemoSummary {
    pub classes: usize,
    pub trivial: usize,
    pub outliers: usize,
    pub train_rows: usize,
    pub test_rows: usize,
    pub evaluation: Evaluation,
    pub files: Vec<PathBuf>,
}

/// Runs extract, label, prepare, train, evaluate and predict over the
/// sample project, writing every artifact into `out`.
pub fn run_demo(out: &Path, seed: u64) -> Result<DemoSummary, DemoError> {
    std::fs::create_dir_all(out).map_err(|e| io_err(out, e))?;
    let mut files = Vec::new();
    let write = |files: &mut Vec<PathBuf>, name: &str, text: &str| -> Result<(), DemoError> {
        let path = out.join(name);
        std::fs::write(&path, text).map_err(|e| io_err(&path, e))?;
        files.push(path);
        Ok(())
    };

    let manifest = Manifest::default();
    let index = ProjectIndex::build(&demo_sources())?;
    let features = extract_project(&index, &manifest)?;
    write(&mut files, "features.csv", &features.to_csv())?;

    let coverage = synthetic_coverage(&features, DEMO_RUNS, seed);
    write(&mut files, "coverage.csv", &coverage)?;
    let records = read_coverage(&coverage, "coverage.csv", &ColumnMapping::default())?;
    let labels = label_records(&records)?;
    write(&mut files, "labels.csv", &labels_to_csv(&labels))?;

    let config = PrepareConfig { variant: Variant::DS1, seed, lof_k: DEMO_LOF_K, ..PrepareConfig::default() };
    let prepared = prepare(&features, &labels, &manifest, &config)?;
    write_prepared(out, &prepared, &manifest.hash())?;
    for name in ["dataset.csv", "scaler.json", "drop_report.txt"] {
        files.push(out.join(name));
    }

    let params = demo_params();
    let ensemble = VotingEnsemble::fit(&prepared.train, &params, seed)?;
    let model = TrainedModel::new(manifest.hash(), config.variant, prepared.scaler.clone(), params, seed, ensemble)?;
    let model_path = out.join("model.json");
    model.save(&model_path)?;
    files.push(model_path);

    let preds = model.ensemble.predict_rows(&prepared.test.rows)?;
    let evaluation = evaluate(&preds, &prepared.test.targets)?;
    write(&mut files, "eval.csv", &evaluation_csv(&evaluation))?;

    let estimates = estimate_table(&features, &model)?;
    write(&mut files, "predictions.csv", &estimates_to_csv(&estimates))?;

    Ok(DemoSummary {
        classes: features.rows.len(),
        trivial: prepared.report.trivial.len(),
        outliers: prepared.report.outliers.len(),
        train_rows: prepared.train.len(),
        test_rows: prepared.test.len(),
        evaluation,
        files,
    })
}

pub fn evaluation_csv(e: &Evaluation) -> String {
    let r2 = e.r2.map_or_else(String::new, |v| v.to_string());
    format!("metric,value\nmae,{}\nmse,{}\nrmse,{}\nmdae,{}\nr2,{}\n", e.mae, e.mse, e.rmse, e.mdae, r2)
}
