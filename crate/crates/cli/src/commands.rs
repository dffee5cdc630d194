use std::path::Path;

use anyhow::{bail, ensure, Context, Result};
use log::{info, warn};
use testlab_core::analysis::{correlations, importance_report, permutation_importance};
use testlab_core::dataset::io::{read_dataset, read_scaler, write_prepared};
use testlab_core::dataset::{prepare, Dataset, PrepareConfig, Variant};
use testlab_core::demo::{evaluation_csv, run_demo, write_demo_project};
use testlab_core::inference::{check_manifest, estimate_from_features, estimate_table, estimates_to_csv};
use testlab_core::learners::{evaluate, tune, GridSpec, Regressor, TrainedModel, VotingEnsemble};
use testlab_core::metrics::{extract_project, FeatureTable, Manifest, ProjectIndex};
use testlab_core::quality::assess_project;
use testlab_core::testability::{label_records, read_coverage, write_labels, ColumnMapping};

use crate::args::*;

pub struct RunContext {
    pub seed: u64,
    pub manifest: Manifest,
}

pub fn load_manifest(path: Option<&Path>) -> Result<Manifest> {
    match path {
        Some(p) => Manifest::load(p).with_context(|| format!("loading manifest {}", p.display())),
        None => Ok(Manifest::default()),
    }
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
    }
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

pub fn run(command: Command, ctx: &RunContext) -> Result<()> {
    match command {
        Command::Extract(a) => extract(a, ctx),
        Command::Label(a) => label(a),
        Command::Prepare(a) => prepare_cmd(a, ctx),
        Command::Train(a) => train(a, ctx),
        Command::Eval(a) => eval(a),
        Command::Predict(a) => predict(a, ctx),
        Command::Importance(a) => importance(a, ctx),
        Command::Quality(a) => quality(a),
        Command::Demo(a) => demo(a, ctx),
    }
}

fn extract(a: ExtractArgs, ctx: &RunContext) -> Result<()> {
    let index = ProjectIndex::from_dir(&a.project)?;
    let table = extract_project(&index, &ctx.manifest)?;
    write_text(&a.out, &table.to_csv())?;
    if let Some(p) = &a.manifest_out {
        write_text(p, &ctx.manifest.to_text())?;
    }
    info!("measured {} classes with {} metrics", table.rows.len(), table.names.len());
    Ok(())
}

fn label(a: LabelArgs) -> Result<()> {
    let mapping = match &a.mapping {
        Some(p) => ColumnMapping::parse(&read_text(p)?)?,
        None => ColumnMapping::default(),
    };
    let text = read_text(&a.coverage)?;
    let records = read_coverage(&text, &a.coverage.display().to_string(), &mapping)?;
    let rows = label_records(&records)?;
    write_labels(&a.out, &rows)?;
    info!("labelled {} classes from {} runs", rows.len(), records.len());
    Ok(())
}

fn prepare_cmd(a: PrepareArgs, ctx: &RunContext) -> Result<()> {
    let variant: Variant = a.variant.parse()?;
    let features = FeatureTable::read(&a.features)?;
    features.check_manifest(&ctx.manifest)?;
    let labels = testlab_core::testability::read_labels(&a.labels)?;
    let config = PrepareConfig {
        variant,
        train_fraction: a.train_fraction,
        seed: ctx.seed,
        lof_k: a.lof_k,
        lof_threshold: a.lof_threshold,
    };
    let prepared = prepare(&features, &labels, &ctx.manifest, &config)?;
    write_prepared(&a.out, &prepared, &ctx.manifest.hash())?;
    let r = &prepared.report;
    info!(
        "{} train / {} test rows; dropped {} trivial, {} outliers, {} unlabelled",
        prepared.train.len(),
        prepared.test.len(),
        r.trivial.len(),
        r.outliers.len(),
        r.features_without_label.len()
    );
    Ok(())
}

fn grid_spec(arg: &str) -> Result<GridSpec> {
    Ok(match arg {
        "full" => GridSpec::full(),
        "best" => GridSpec::best(),
        path => GridSpec::parse(&read_text(Path::new(path))?).with_context(|| format!("grid file {path}"))?,
    })
}

fn train(a: TrainArgs, ctx: &RunContext) -> Result<()> {
    let file = read_dataset(&a.dataset)?;
    let scaler_path = a.scaler.clone().unwrap_or_else(|| a.dataset.with_file_name("scaler.json"));
    let scaler = read_scaler(&scaler_path).with_context(|| "the scaler written by `prepare` is required (see --scaler)")?;
    ensure!(
        scaler.feature_names == file.train.feature_names,
        "scaler {} does not describe the columns of {}",
        scaler_path.display(),
        a.dataset.display()
    );
    let params = match &a.grid {
        Some(g) => {
            let spec = grid_spec(g)?;
            let (params, report) = tune(&file.train, &spec, ctx.seed)?;
            if let Some(p) = &a.tuning_report {
                write_text(p, &report.to_csv())?;
            }
            params
        }
        None => Default::default(),
    };
    let ensemble = VotingEnsemble::fit(&file.train, &params, ctx.seed)?;
    let model = TrainedModel::new(file.manifest_hash, file.variant, scaler, params, ctx.seed, ensemble)?;
    if let Some(parent) = a.out.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent)?;
    }
    model.save(&a.out)?;
    info!("trained on {} rows", file.train.len());
    Ok(())
}

fn load_model(path: &Path) -> Result<TrainedModel> {
    Ok(TrainedModel::load(path)?)
}

fn dataset_for_model(model: &TrainedModel, path: &Path, split: &str) -> Result<Dataset> {
    let file = read_dataset(path)?;
    ensure!(
        file.manifest_hash == model.manifest_hash,
        "dataset manifest {} differs from the model's {}",
        file.manifest_hash,
        model.manifest_hash
    );
    let ds = match split {
        "test" => file.test,
        "train" => file.train,
        other => bail!("unknown split `{other}` (expected `test` or `train`)"),
    };
    ensure!(ds.feature_names == model.feature_names, "dataset columns differ from the model's features");
    Ok(ds)
}

fn eval(a: EvalArgs) -> Result<()> {
    let model = load_model(&a.model)?;
    let ds = dataset_for_model(&model, &a.dataset, &a.split)?;
    let preds = model.ensemble.predict_rows(&ds.rows)?;
    let csv = evaluation_csv(&evaluate(&preds, &ds.targets)?);
    match &a.out {
        Some(p) => write_text(p, &csv)?,
        None => print!("{csv}"),
    }
    Ok(())
}

fn predict(a: PredictArgs, ctx: &RunContext) -> Result<()> {
    let model = load_model(&a.model)?;
    check_manifest(&model, &ctx.manifest)?;
    let index = ProjectIndex::from_dir(&a.project)?;
    let table = extract_project(&index, &ctx.manifest)?;
    let estimates = match &a.class {
        Some(id) => {
            let fv = table.get(id).with_context(|| format!("class `{id}` not found in {}", a.project.display()))?;
            vec![estimate_from_features(fv, &model)?]
        }
        None => estimate_table(&table, &model)?,
    };
    let csv = estimates_to_csv(&estimates);
    match &a.out {
        Some(p) => write_text(p, &csv)?,
        None => print!("{csv}"),
    }
    Ok(())
}

fn importance(a: ImportanceArgs, ctx: &RunContext) -> Result<()> {
    let model = load_model(&a.model)?;
    let ds = dataset_for_model(&model, &a.dataset, "test")?;
    let imp = permutation_importance(&model.ensemble, &ds, a.repeats, ctx.seed)?;
    let report = importance_report(&imp, &correlations(&ds), &ds, a.top);
    for w in &report.warnings {
        warn!("{w}");
    }
    report.write(&a.out)?;
    info!("baseline R² {:.4}; report written to {}", imp.baseline_r2, a.out.display());
    Ok(())
}

fn quality(a: QualityArgs) -> Result<()> {
    let index = ProjectIndex::from_dir(&a.project)?;
    let name = a
        .project
        .canonicalize()
        .ok()
        .and_then(|p| p.file_name().map(|n| n.to_string_lossy().into_owned()))
        .unwrap_or_else(|| a.project.display().to_string());
    let report = assess_project(&index, &name)?;
    write_text(&a.out, &report.to_csv())
}

fn demo(a: DemoArgs, ctx: &RunContext) -> Result<()> {
    let summary = run_demo(&a.out, ctx.seed)?;
    write_demo_project(&a.out.join("project"))?;
    let r2 = summary.evaluation.r2.map_or_else(|| "n/a".to_string(), |v| format!("{v:.4}"));
    println!(
        "demo: {} classes, {} trivial, {} outliers, {} train / {} test rows; test MAE {:.4}, R² {r2}",
        summary.classes, summary.trivial, summary.outliers, summary.train_rows, summary.test_rows, summary.evaluation.mae
    );
    let names: Vec<_> = summary.files.iter().filter_map(|f| f.file_name()).map(|n| n.to_string_lossy()).collect();
    println!("artifacts in {}: {}, project/", a.out.display(), names.join(", "));
    Ok(())
}
