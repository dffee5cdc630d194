//! `dataset.csv` and `scaler.json`.
//!
//! The dataset file opens with a `# testlab-dataset v1` line carrying the
//! variant and manifest hash, then `class_id, split, <features>, testability`.

use std::path::Path;

use super::pipeline::Prepared;
use super::scaler::ScalerParams;
use super::variant::Variant;
use super::{Dataset, DatasetError};

pub const DATASET_HEADER: &str = "# testlab-dataset v1";

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetFile {
    pub variant: Variant,
    pub manifest_hash: String,
    pub train: Dataset,
    pub test: Dataset,
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> DatasetError {
    DatasetError::Io { path: path.display().to_string(), reason: e.to_string() }
}

fn fmt_err(origin: &str, reason: impl Into<String>) -> DatasetError {
    DatasetError::Format { origin: origin.to_string(), reason: reason.into() }
}

pub fn dataset_to_csv(variant: Variant, manifest_hash: &str, train: &Dataset, test: &Dataset) -> String {
    let mut out = format!("{DATASET_HEADER} variant={variant} manifest={manifest_hash}\n");
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["class_id".to_string(), "split".to_string()];
    header.extend(train.feature_names.iter().cloned());
    header.push("testability".into());
    w.write_record(&header).expect("in-memory write");
    for (part, ds) in [("train", train), ("test", test)] {
        for i in 0..ds.len() {
            let mut rec = vec![ds.class_ids[i].clone(), part.to_string()];
            rec.extend(ds.rows[i].iter().map(|v| format!("{v}")));
            rec.push(format!("{}", ds.targets[i]));
            w.write_record(&rec).expect("in-memory write");
        }
    }
    out.push_str(std::str::from_utf8(&w.into_inner().expect("in-memory flush")).expect("utf-8 output"));
    out
}

pub fn parse_dataset(text: &str, origin: &str) -> Result<DatasetFile, DatasetError> {
    let (first, body) = text.split_once('\n').ok_or_else(|| fmt_err(origin, "file is empty"))?;
    let meta = first.strip_prefix(DATASET_HEADER).ok_or_else(|| fmt_err(origin, "missing `# testlab-dataset v1` header"))?;
    let mut variant = None;
    let mut manifest_hash = String::new();
    for kv in meta.split_whitespace() {
        match kv.split_once('=') {
            Some(("variant", v)) => variant = Some(v.parse::<Variant>()?),
            Some(("manifest", h)) => manifest_hash = h.to_string(),
            _ => return Err(fmt_err(origin, format!("unexpected header field `{kv}`"))),
        }
    }
    let variant = variant.ok_or_else(|| fmt_err(origin, "header lacks `variant=`"))?;

    let mut r = csv::Reader::from_reader(body.as_bytes());
    let header = r.headers().map_err(|e| fmt_err(origin, e.to_string()))?.clone();
    let cols: Vec<&str> = header.iter().collect();
    if cols.len() < 3 || cols[0] != "class_id" || cols[1] != "split" || cols[cols.len() - 1] != "testability" {
        return Err(fmt_err(origin, "columns must be class_id, split, <features>, testability"));
    }
    let names: Vec<String> = cols[2..cols.len() - 1].iter().map(|s| s.to_string()).collect();
    let empty = || Dataset { feature_names: names.clone(), ..Dataset::default() };
    let (mut train, mut test) = (empty(), empty());
    for (i, rec) in r.records().enumerate() {
        let line = i + 3;
        let rec = rec.map_err(|e| fmt_err(origin, format!("line {line}: {e}")))?;
        let mut values = Vec::with_capacity(cols.len() - 2);
        for (j, cell) in rec.iter().enumerate().skip(2) {
            let v: f64 = cell
                .parse()
                .ok()
                .filter(|v: &f64| v.is_finite())
                .ok_or_else(|| fmt_err(origin, format!("line {line}, column {}: `{cell}` is not a finite number", cols[j])))?;
            values.push(v);
        }
        let target = values.pop().expect("testability column");
        let part = match &rec[1] {
            "train" => &mut train,
            "test" => &mut test,
            other => return Err(fmt_err(origin, format!("line {line}: unknown split `{other}`"))),
        };
        part.class_ids.push(rec[0].to_string());
        part.rows.push(values);
        part.targets.push(target);
    }
    Ok(DatasetFile { variant, manifest_hash, train, test })
}

pub fn read_dataset(path: &Path) -> Result<DatasetFile, DatasetError> {
    let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    parse_dataset(&text, &path.display().to_string())
}

/// Writes `dataset.csv`, `scaler.json` and `drop_report.txt` into `dir`.
pub fn write_prepared(dir: &Path, prepared: &Prepared, manifest_hash: &str) -> Result<(), DatasetError> {
    std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let csv = dataset_to_csv(prepared.variant, manifest_hash, &prepared.train, &prepared.test);
    let ds_path = dir.join("dataset.csv");
    std::fs::write(&ds_path, csv).map_err(|e| io_err(&ds_path, e))?;
    write_scaler(&dir.join("scaler.json"), &prepared.scaler)?;
    let rep = dir.join("drop_report.txt");
    std::fs::write(&rep, prepared.report.to_text()).map_err(|e| io_err(&rep, e))
}

pub fn write_scaler(path: &Path, scaler: &ScalerParams) -> Result<(), DatasetError> {
    let json = serde_json::to_string_pretty(scaler).expect("scaler serializes");
    std::fs::write(path, json + "\n").map_err(|e| io_err(path, e))
}

pub fn read_scaler(path: &Path) -> Result<ScalerParams, DatasetError> {
    let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    serde_json::from_str(&text).map_err(|e| fmt_err(&path.display().to_string(), e.to_string()))
}
