//! `coverage.csv` ingestion and `labels.csv` output.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use super::{average_runs, testability, CoverageRecord, TestabilityError};

pub const CLASS_ID: &str = "class_id";
pub const RUN_ID: &str = "run_id";
pub const SUITE_SIZE: &str = "suite_size";
pub const NOM: &str = "nom";
pub const GEN_TIME: &str = "gen_time_minutes";

/// Renames report columns to the canonical names, e.g. `TARGET_CLASS = class_id`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ColumnMapping {
    renames: HashMap<String, String>,
}

impl ColumnMapping {
    pub fn parse(text: &str) -> Result<Self, TestabilityError> {
        let mut renames = HashMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (from, to) = line.split_once('=').ok_or_else(|| TestabilityError::Data {
                origin: "column mapping".into(),
                line: i + 1,
                column: line.to_string(),
                reason: "expected `source = target`".into(),
            })?;
            renames.insert(from.trim().to_string(), to.trim().to_string());
        }
        Ok(ColumnMapping { renames })
    }

    pub fn canonical<'a>(&'a self, column: &'a str) -> &'a str {
        self.renames.get(column).map(String::as_str).unwrap_or(column)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabelRow {
    pub class_id: String,
    pub t_q: f64,
    pub t_e: f64,
    pub testability: f64,
}

fn data_err(origin: &str, line: usize, column: &str, reason: impl Into<String>) -> TestabilityError {
    TestabilityError::Data { origin: origin.to_string(), line, column: column.to_string(), reason: reason.into() }
}

/// Parses one record per CSV row; rows of the same class are kept separate.
pub fn read_coverage(text: &str, origin: &str, mapping: &ColumnMapping) -> Result<Vec<CoverageRecord>, TestabilityError> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let raw = reader.headers().map_err(|e| data_err(origin, 1, "", e.to_string()))?.clone();
    let header: Vec<String> = raw.iter().map(|h| mapping.canonical(h).to_string()).collect();
    let position = |name: &str| header.iter().position(|h| h == name);
    let need = |name: &str| position(name).ok_or_else(|| data_err(origin, 1, name, "required column is missing"));
    let id_col = need(CLASS_ID)?;
    let suite_col = need(SUITE_SIZE)?;
    let nom_col = need(NOM)?;
    let time_col = need(GEN_TIME)?;
    let fixed = [CLASS_ID, RUN_ID, SUITE_SIZE, NOM, GEN_TIME];
    let criteria: Vec<(usize, &str)> =
        header.iter().enumerate().filter(|(_, h)| !fixed.contains(&h.as_str())).map(|(i, h)| (i, h.as_str())).collect();
    if criteria.is_empty() {
        return Err(data_err(origin, 1, "", "no coverage criterion columns"));
    }

    let mut out = Vec::new();
    for (row, rec) in reader.records().enumerate() {
        let line = row + 2;
        let rec = rec.map_err(|e| data_err(origin, line, "", e.to_string()))?;
        let number = |col: usize| -> Result<f64, TestabilityError> {
            let cell = rec.get(col).unwrap_or("");
            let v: f64 = cell.parse().map_err(|_| data_err(origin, line, &header[col], format!("`{cell}` is not a number")))?;
            if !v.is_finite() {
                return Err(data_err(origin, line, &header[col], "value is not finite"));
            }
            Ok(v)
        };
        let class_id = rec.get(id_col).unwrap_or("").to_string();
        if class_id.is_empty() {
            return Err(data_err(origin, line, CLASS_ID, "empty class id"));
        }
        let mut levels = BTreeMap::new();
        for &(col, name) in &criteria {
            let v = number(col)?;
            if !(0.0..=1.0).contains(&v) {
                return Err(data_err(origin, line, name, format!("coverage level {v} is outside [0, 1]")));
            }
            levels.insert(name.to_string(), v);
        }
        let suite_size = number(suite_col)?;
        if suite_size < 0.0 {
            return Err(data_err(origin, line, SUITE_SIZE, "suite size is negative"));
        }
        let nom = number(nom_col)?;
        if nom < 1.0 {
            return Err(data_err(origin, line, NOM, format!("method count {nom} is below 1")));
        }
        let gen_time = number(time_col)?;
        if gen_time < 0.0 {
            return Err(data_err(origin, line, GEN_TIME, "generation time is negative"));
        }
        out.push(CoverageRecord { class_id, criteria: levels, suite_size, nom, gen_time });
    }
    Ok(out)
}

/// Averages the runs of each class and scores it. Classes keep their first-seen order.
pub fn label_records(records: &[CoverageRecord]) -> Result<Vec<LabelRow>, TestabilityError> {
    let mut order: Vec<&str> = Vec::new();
    let mut groups: HashMap<&str, Vec<CoverageRecord>> = HashMap::new();
    for r in records {
        let g = groups.entry(r.class_id.as_str()).or_default();
        if g.is_empty() {
            order.push(&r.class_id);
        }
        g.push(r.clone());
    }
    order
        .into_iter()
        .map(|id| {
            let avg = average_runs(&groups[id])?;
            avg.validate()?;
            let s = testability(&avg)?;
            Ok(LabelRow { class_id: id.to_string(), t_q: s.t_q, t_e: s.t_e, testability: s.testability })
        })
        .collect()
}

pub fn labels_to_csv(rows: &[LabelRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([CLASS_ID, "t_q", "t_e", "testability"]).expect("in-memory write");
    for r in rows {
        w.write_record([r.class_id.clone(), format!("{}", r.t_q), format!("{}", r.t_e), format!("{}", r.testability)])
            .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 output")
}

pub fn write_labels(path: &Path, rows: &[LabelRow]) -> Result<(), TestabilityError> {
    std::fs::write(path, labels_to_csv(rows))
        .map_err(|e| TestabilityError::Io { path: path.display().to_string(), reason: e.to_string() })
}

pub fn parse_labels(text: &str, origin: &str) -> Result<Vec<LabelRow>, TestabilityError> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| data_err(origin, 1, "", e.to_string()))?.clone();
    let col = |name: &str| {
        header.iter().position(|h| h == name).ok_or_else(|| data_err(origin, 1, name, "required column is missing"))
    };
    let (id, tq, te, t) = (col(CLASS_ID)?, col("t_q")?, col("t_e")?, col("testability")?);
    let mut rows = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| data_err(origin, line, "", e.to_string()))?;
        let num = |c: usize| -> Result<f64, TestabilityError> {
            let cell = rec.get(c).unwrap_or("");
            cell.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| data_err(origin, line, &header[c], format!("`{cell}` is not a finite number")))
        };
        let testability = num(t)?;
        if !(0.0..=1.0).contains(&testability) {
            return Err(data_err(origin, line, "testability", "label is outside [0, 1]"));
        }
        rows.push(LabelRow { class_id: rec.get(id).unwrap_or("").to_string(), t_q: num(tq)?, t_e: num(te)?, testability });
    }
    Ok(rows)
}

pub fn read_labels(path: &Path) -> Result<Vec<LabelRow>, TestabilityError> {
    let origin = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| TestabilityError::Io { path: origin.clone(), reason: e.to_string() })?;
    parse_labels(&text, &origin)
}
