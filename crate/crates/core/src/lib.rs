//! Static metrics, coverage-based testability labels and ensemble regression
//! for Java classes.

pub mod analysis;
pub mod dataset;
pub mod demo;
pub mod inference;
pub mod java;
pub mod learners;
pub mod metrics;
pub mod quality;
pub mod stats;
pub mod testability;

pub use dataset::{Dataset, ScalerParams, TrivialKind, Variant};
pub use inference::{Estimate, TestabilityModel};
pub use learners::{EnsembleParams, Regressor, TrainedModel, VotingEnsemble, VotingWeights};
pub use metrics::{FeatureTable, FeatureVector, Manifest, ProjectIndex};
pub use quality::{DesignMetrics, ModuleGraph, QualityReport};
pub use testability::{CoverageRecord, LabelRow, TestabilityScore};
