//! Versioned list of metric names that fixes the feature-vector layout.
//!
//! Text format: a `# testlab-manifest v1` header, optional `#` comment
//! lines, then one `NAME<TAB>block<TAB>kind` line per metric.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::class::CLASS_SCALARS;
use super::lexical::LEXICAL_NAMES;
use super::package::{package_distribution_names, PACKAGE_COUNTERS, PACKAGE_SUMS};
use super::submetrics::sub_metric_names;
use super::MetricsError;

pub const MANIFEST_HEADER: &str = "# testlab-manifest v1";

const QMOOD_NOTES: &[&str] = &[
    "# design-metric bindings for quality attributes:",
    "#   coupling = CSCBO, cohesion = 1 - CSLOCM / max(1, NOM*(NOM-1)/2), public = CSNOPLM,",
    "#   polymorphic = CSNMO, ancestors = CSDIT, inherited = CSNIM,",
    "#   design size = classes, hierarchies = classes with children and no project parent",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricBlock {
    Class,
    Context,
    Lexical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricKind {
    /// Measured directly.
    Base,
    /// Produced by the statistical operators over methods or classes.
    Derived,
}

impl fmt::Display for MetricBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MetricBlock::Class => "class",
            MetricBlock::Context => "context",
            MetricBlock::Lexical => "lexical",
        })
    }
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MetricKind::Base => "base",
            MetricKind::Derived => "derived",
        })
    }
}

impl FromStr for MetricBlock {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "class" => Ok(MetricBlock::Class),
            "context" => Ok(MetricBlock::Context),
            "lexical" => Ok(MetricBlock::Lexical),
            _ => Err(format!("unknown block `{s}`")),
        }
    }
}

impl FromStr for MetricKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "base" => Ok(MetricKind::Base),
            "derived" => Ok(MetricKind::Derived),
            _ => Err(format!("unknown kind `{s}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub name: String,
    pub block: MetricBlock,
    pub kind: MetricKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub entries: Vec<ManifestEntry>,
}

impl Default for Manifest {
    fn default() -> Self {
        let mut entries = Vec::new();
        let mut push = |name: String, block, kind| entries.push(ManifestEntry { name, block, kind });
        for s in CLASS_SCALARS {
            push(s.to_string(), MetricBlock::Class, MetricKind::Base);
        }
        for base in ["CC", "LOC", "NOST", "NOPARAM", "NESTING", "PATH", "KNOTS"] {
            for n in sub_metric_names(base) {
                push(n, MetricBlock::Class, MetricKind::Derived);
            }
        }
        for n in package_distribution_names() {
            push(n, MetricBlock::Context, MetricKind::Derived);
        }
        for s in PACKAGE_SUMS {
            push(format!("PK{s}"), MetricBlock::Context, MetricKind::Base);
        }
        for s in PACKAGE_COUNTERS {
            push(s.to_string(), MetricBlock::Context, MetricKind::Base);
        }
        for s in LEXICAL_NAMES {
            push(format!("CS{s}"), MetricBlock::Lexical, MetricKind::Base);
        }
        Manifest { entries }
    }
}

impl Manifest {
    pub fn names(&self) -> Vec<String> {
        self.entries.iter().map(|e| e.name.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entry(&self, name: &str) -> Option<&ManifestEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::from(MANIFEST_HEADER);
        s.push('\n');
        for line in QMOOD_NOTES {
            s.push_str(line);
            s.push('\n');
        }
        for e in &self.entries {
            s.push_str(&format!("{}\t{}\t{}\n", e.name, e.block, e.kind));
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self, MetricsError> {
        let mut lines = text.lines();
        match lines.next() {
            Some(h) if h.trim_end() == MANIFEST_HEADER => {}
            _ => return Err(MetricsError::Manifest(format!("missing `{MANIFEST_HEADER}` header"))),
        }
        let mut entries = Vec::new();
        let mut seen = HashSet::new();
        for (i, line) in lines.enumerate() {
            let line = line.trim_end();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parts: Vec<&str> = line.split('\t').collect();
            let lineno = i + 2;
            let [name, block, kind] = parts.as_slice() else {
                return Err(MetricsError::Manifest(format!("line {lineno}: expected 3 tab-separated fields")));
            };
            let block = block.parse().map_err(|e| MetricsError::Manifest(format!("line {lineno}: {e}")))?;
            let kind = kind.parse().map_err(|e| MetricsError::Manifest(format!("line {lineno}: {e}")))?;
            if !seen.insert(name.to_string()) {
                return Err(MetricsError::Manifest(format!("line {lineno}: duplicate metric `{name}`")));
            }
            entries.push(ManifestEntry { name: name.to_string(), block, kind });
        }
        Ok(Manifest { entries })
    }

    pub fn load(path: &std::path::Path) -> Result<Self, MetricsError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| MetricsError::Io { path: path.display().to_string(), reason: e.to_string() })?;
        Self::parse(&text)
    }

    /// SHA-256 over the ordered names, blocks and kinds.
    pub fn hash(&self) -> String {
        let mut h = Sha256::new();
        for e in &self.entries {
            h.update(format!("{}\t{}\t{}\n", e.name, e.block, e.kind).as_bytes());
        }
        hex::encode(h.finalize())
    }
}
