//! Static source metrics: lexical counters, method and class metrics,
//! derived sub-metrics, package context, and feature-vector assembly.

pub mod class;
pub mod extract;
pub mod index;
pub mod lexical;
pub mod manifest;
pub mod method;
pub mod package;
pub mod submetrics;

use thiserror::Error;

use crate::java::SourceError;

pub use class::{compute_all_class_metrics, compute_class_metrics, CLASS_SCALARS};
pub use extract::{assemble_feature_vector, extract_project, FeatureTable, FeatureVector};
pub use index::{ProjectFile, ProjectIndex};
pub use lexical::{compute_lexical_metrics, LexicalMetrics, LEXICAL_NAMES};
pub use manifest::{Manifest, ManifestEntry, MetricBlock, MetricKind};
pub use method::{compute_method_records, CcVariants, MethodRecord};
pub use package::compute_package_context;
pub use submetrics::derive_sub_metrics;

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("{path}: {reason}")]
    Io { path: String, reason: String },
    #[error("{path}: {error}")]
    Source { path: String, error: SourceError },
    #[error("schema mismatch: {0}")]
    SchemaMismatch(String),
    #[error("invalid manifest: {0}")]
    Manifest(String),
    #[error("class not found: {0}")]
    ClassNotFound(String),
}
