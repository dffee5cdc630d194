//! Feature-vector assembly and the `features.csv` table.

use std::collections::HashMap;
use std::path::Path;

use super::class::compute_all_class_metrics;
use super::index::ProjectIndex;
use super::lexical::{LexicalMetrics, LEXICAL_NAMES};
use super::manifest::Manifest;
use super::package::compute_package_context;
use super::MetricsError;

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub class_id: String,
    pub entries: Vec<(String, f64)>,
}

impl FeatureVector {
    pub fn get(&self, name: &str) -> Option<f64> {
        self.entries.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }

    pub fn values(&self) -> Vec<f64> {
        self.entries.iter().map(|(_, v)| *v).collect()
    }
}

pub fn lexical_block(m: &LexicalMetrics) -> Vec<(String, f64)> {
    LEXICAL_NAMES.iter().zip(m.values()).map(|(n, v)| (format!("CS{n}"), v as f64)).collect()
}

/// Concatenates the three blocks in manifest order.
pub fn assemble_feature_vector(
    class_id: &str,
    class_metrics: &[(String, f64)],
    package_context: &[(String, f64)],
    lexical: &[(String, f64)],
    manifest: &Manifest,
) -> Result<FeatureVector, MetricsError> {
    let lookup: HashMap<&str, f64> = class_metrics
        .iter()
        .chain(package_context)
        .chain(lexical)
        .map(|(n, v)| (n.as_str(), *v))
        .collect();
    let mut entries = Vec::with_capacity(manifest.len());
    for e in &manifest.entries {
        let v = *lookup
            .get(e.name.as_str())
            .ok_or_else(|| MetricsError::SchemaMismatch(format!("metric `{}` is not produced by the extractor", e.name)))?;
        if !v.is_finite() {
            return Err(MetricsError::SchemaMismatch(format!("metric `{}` of {class_id} is not finite", e.name)));
        }
        entries.push((e.name.clone(), v));
    }
    Ok(FeatureVector { class_id: class_id.to_string(), entries })
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct FeatureTable {
    pub names: Vec<String>,
    pub rows: Vec<FeatureVector>,
}

/// One vector per class of the project, in index order.
pub fn extract_project(index: &ProjectIndex, manifest: &Manifest) -> Result<FeatureTable, MetricsError> {
    let class_metrics = compute_all_class_metrics(index);
    let mut contexts: HashMap<&str, Vec<(String, f64)>> = HashMap::new();
    for (pkg, members) in index.packages() {
        contexts.insert(pkg, compute_package_context(index, &class_metrics, &members));
    }
    let mut rows = Vec::with_capacity(index.classes.len());
    for (c, info) in index.classes.iter().enumerate() {
        let lexical = lexical_block(&index.file_of(c).lexical);
        rows.push(assemble_feature_vector(
            &info.id,
            &class_metrics[c],
            &contexts[info.package.as_str()],
            &lexical,
            manifest,
        )?);
    }
    Ok(FeatureTable { names: manifest.names(), rows })
}

fn csv_err(path: &str, e: impl std::fmt::Display) -> MetricsError {
    MetricsError::Io { path: path.to_string(), reason: e.to_string() }
}

impl FeatureTable {
    pub fn get(&self, class_id: &str) -> Option<&FeatureVector> {
        self.rows.iter().find(|r| r.class_id == class_id)
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["class_id".to_string()];
        header.extend(self.names.iter().cloned());
        w.write_record(&header).expect("in-memory write");
        for r in &self.rows {
            let mut rec = vec![r.class_id.clone()];
            rec.extend(r.entries.iter().map(|(_, v)| format!("{v}")));
            w.write_record(&rec).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 output")
    }

    pub fn write(&self, path: &Path) -> Result<(), MetricsError> {
        std::fs::write(path, self.to_csv()).map_err(|e| csv_err(&path.display().to_string(), e))
    }

    pub fn parse_csv(text: &str, origin: &str) -> Result<Self, MetricsError> {
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let header = r.headers().map_err(|e| csv_err(origin, e))?.clone();
        if header.get(0) != Some("class_id") {
            return Err(MetricsError::SchemaMismatch(format!("{origin}: first column must be class_id")));
        }
        let names: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
        let mut rows = Vec::new();
        for (i, rec) in r.records().enumerate() {
            let rec = rec.map_err(|e| csv_err(origin, e))?;
            let mut entries = Vec::with_capacity(names.len());
            for (j, name) in names.iter().enumerate() {
                let cell = rec.get(j + 1).unwrap_or("");
                let v: f64 = cell.trim().parse().map_err(|_| {
                    MetricsError::SchemaMismatch(format!("{origin}: row {}, column {name}: `{cell}` is not a number", i + 2))
                })?;
                if !v.is_finite() {
                    return Err(MetricsError::SchemaMismatch(format!(
                        "{origin}: row {}, column {name}: value is not finite",
                        i + 2
                    )));
                }
                entries.push((name.clone(), v));
            }
            rows.push(FeatureVector { class_id: rec.get(0).unwrap_or("").to_string(), entries });
        }
        Ok(FeatureTable { names, rows })
    }

    pub fn read(path: &Path) -> Result<Self, MetricsError> {
        let origin = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|e| csv_err(&origin, e))?;
        Self::parse_csv(&text, &origin)
    }

    /// Checks that the columns equal the manifest names, in order.
    pub fn check_manifest(&self, manifest: &Manifest) -> Result<(), MetricsError> {
        let expected = manifest.names();
        if self.names != expected {
            let first = self.names.iter().zip(&expected).position(|(a, b)| a != b).unwrap_or(self.names.len().min(expected.len()));
            return Err(MetricsError::SchemaMismatch(format!(
                "feature columns differ from the manifest at position {first} ({} columns vs {} names)",
                self.names.len(),
                expected.len()
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn index(files: &[(&str, &str)]) -> ProjectIndex {
        let v: Vec<(String, String)> = files.iter().map(|(p, s)| (p.to_string(), s.to_string())).collect();
        ProjectIndex::build(&v).unwrap()
    }

    #[test]
    fn vectors_follow_manifest() {
        let p = index(&[("a/A.java", "package a; class A { int f() { return 1; } } class B {}")]);
        let m = Manifest::default();
        let t = extract_project(&p, &m).unwrap();
        assert_eq!(t.rows.len(), 2);
        for r in &t.rows {
            assert_eq!(r.entries.len(), m.len());
            let names: Vec<String> = r.entries.iter().map(|(n, _)| n.clone()).collect();
            assert_eq!(names, m.names());
        }
        let ctx = |r: &FeatureVector| -> Vec<f64> {
            r.entries.iter().filter(|(n, _)| n.starts_with("PK")).map(|(_, v)| *v).collect()
        };
        assert_eq!(ctx(&t.rows[0]), ctx(&t.rows[1]));
    }

    #[test]
    fn missing_metric_is_schema_mismatch() {
        let m = Manifest::default();
        let err = assemble_feature_vector("X", &[], &[], &[], &m).unwrap_err();
        assert!(matches!(err, MetricsError::SchemaMismatch(_)));
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let p = index(&[("A.java", "class A { int x; int f(int a) { if (a > 0) return x; return 0; } }")]);
        let m = Manifest::default();
        let t = extract_project(&p, &m).unwrap();
        let text = t.to_csv();
        let back = FeatureTable::parse_csv(&text, "mem").unwrap();
        assert_eq!(back, t);
        back.check_manifest(&m).unwrap();
    }

    #[test]
    fn deterministic() {
        let files = [("p/A.java", "package p; class A { B b; void f() { b.g(); } }"), ("p/B.java", "package p; class B { void g() {} }")];
        let m = Manifest::default();
        let a = extract_project(&index(&files), &m).unwrap().to_csv();
        let b = extract_project(&index(&files), &m).unwrap().to_csv();
        assert_eq!(a, b);
    }
}
