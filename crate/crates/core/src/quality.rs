//! Design quality attributes: the QMOOD linear forms and dependency-graph
//! modularity.
//!
//! Design metrics come from the class metrics with the bindings recorded in
//! the metric manifest: coupling is CSCBO, cohesion is
//! `1 - CSLOCM / max(1, NOM*(NOM-1)/2)`, public methods CSNOPLM, polymorphic
//! methods CSNMO, ancestors CSDIT and inherited methods CSNIM, each averaged
//! over the classes in scope. Design size counts classes; hierarchies count
//! classes that have children but no parent inside the project.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::metrics::class::gather_facts;
use crate::metrics::{compute_all_class_metrics, ProjectIndex};

#[derive(Debug, Error, PartialEq)]
pub enum QualityError {
    #[error("dependency graph has no nodes or no modules")]
    EmptyGraph,
    #[error("node {node} is assigned to module {module} but only {modules} modules exist")]
    InvalidModule { node: usize, module: usize, modules: usize },
    #[error("edge ({from}, {to}) is invalid: {reason}")]
    InvalidEdge { from: usize, to: usize, reason: String },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct DesignMetrics {
    pub class_coupling: f64,
    pub cohesion_among_methods: f64,
    pub n_public_methods: f64,
    pub design_size_in_classes: f64,
    pub n_polymorphic_methods: f64,
    pub n_hierarchies: f64,
    pub avg_ancestors: f64,
    pub n_inherited_methods: f64,
}

pub fn reusability(d: &DesignMetrics) -> f64 {
    -0.25 * d.class_coupling + 0.25 * d.cohesion_among_methods + 0.5 * d.n_public_methods + 0.5 * d.design_size_in_classes
}

pub fn functionality(d: &DesignMetrics) -> f64 {
    0.12 * d.cohesion_among_methods
        + 0.22 * d.n_polymorphic_methods
        + 0.22 * d.n_public_methods
        + 0.22 * d.design_size_in_classes
        + 0.22 * d.n_hierarchies
}

pub fn extendibility(d: &DesignMetrics) -> f64 {
    0.5 * d.avg_ancestors - 0.5 * d.class_coupling + 0.5 * d.n_inherited_methods + 0.5 * d.n_polymorphic_methods
}

/// Directed weighted graph whose nodes are partitioned into modules.
/// Parallel edges add up.
#[derive(Debug, Clone, PartialEq)]
pub struct ModuleGraph {
    pub module_of: Vec<usize>,
    pub n_modules: usize,
    pub edges: Vec<(usize, usize, f64)>,
}

impl ModuleGraph {
    pub fn new(module_of: Vec<usize>, n_modules: usize, edges: Vec<(usize, usize, f64)>) -> Result<Self, QualityError> {
        if module_of.is_empty() || n_modules == 0 {
            return Err(QualityError::EmptyGraph);
        }
        if let Some((node, &module)) = module_of.iter().enumerate().find(|(_, &m)| m >= n_modules) {
            return Err(QualityError::InvalidModule { node, module, modules: n_modules });
        }
        let n = module_of.len();
        for &(from, to, w) in &edges {
            let reason = if from >= n || to >= n {
                Some(format!("endpoint outside 0..{n}"))
            } else if !(w.is_finite() && w >= 0.0) {
                Some(format!("weight {w} is not a finite non-negative number"))
            } else {
                None
            };
            if let Some(reason) = reason {
                return Err(QualityError::InvalidEdge { from, to, reason });
            }
        }
        Ok(ModuleGraph { module_of, n_modules, edges })
    }

    pub fn n_nodes(&self) -> usize {
        self.module_of.len()
    }

    /// Per-module terms `m * intra_c - Kin_c * Kout_c`, where `Kin_c` and
    /// `Kout_c` sum the in- and out-degrees of the module's nodes.
    fn module_terms(&self) -> Vec<f64> {
        let m = self.n_modules as f64;
        let mut intra = vec![0.0; self.n_modules];
        let mut k_in = vec![0.0; self.n_modules];
        let mut k_out = vec![0.0; self.n_modules];
        for &(i, j, w) in &self.edges {
            let (ci, cj) = (self.module_of[i], self.module_of[j]);
            k_out[ci] += w;
            k_in[cj] += w;
            if ci == cj {
                intra[ci] += w;
            }
        }
        (0..self.n_modules).map(|c| m * intra[c] - k_in[c] * k_out[c]).collect()
    }
}

/// `Q = (1/m) * sum_ij (A_ij - k_i^in * k_j^out / m) * delta(c_i, c_j)` with
/// `m` the number of modules, evaluated per module in linear time.
pub fn modularity(g: &ModuleGraph) -> Result<f64, QualityError> {
    if g.n_nodes() == 0 || g.n_modules == 0 {
        return Err(QualityError::EmptyGraph);
    }
    let m = g.n_modules as f64;
    Ok(g.module_terms().iter().sum::<f64>() / (m * m))
}

/// Each module's share of [`modularity`]; the shares sum to Q.
pub fn modularity_by_module(g: &ModuleGraph) -> Result<Vec<f64>, QualityError> {
    if g.n_nodes() == 0 || g.n_modules == 0 {
        return Err(QualityError::EmptyGraph);
    }
    let m2 = (g.n_modules * g.n_modules) as f64;
    Ok(g.module_terms().into_iter().map(|t| t / m2).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QualityRow {
    /// `project` or `package`.
    pub level: &'static str,
    pub name: String,
    pub design: DesignMetrics,
    pub reusability: f64,
    pub functionality: f64,
    pub extendibility: f64,
    pub modularity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QualityReport {
    pub rows: Vec<QualityRow>,
}

pub const DEFAULT_PACKAGE: &str = "(default)";

struct ClassDesign {
    coupling: f64,
    cohesion: f64,
    public: f64,
    polymorphic: f64,
    ancestors: f64,
    inherited: f64,
    hierarchy_root: bool,
}

fn class_designs(index: &ProjectIndex) -> Vec<ClassDesign> {
    compute_all_class_metrics(index)
        .into_iter()
        .enumerate()
        .map(|(c, metrics)| {
            let get = |name: &str| metrics.iter().find(|(n, _)| n == name).map_or(0.0, |(_, v)| *v);
            let nom = get("CSNOM");
            let pairs = (nom * (nom - 1.0) / 2.0).max(1.0);
            ClassDesign {
                coupling: get("CSCBO"),
                cohesion: 1.0 - get("CSLOCM") / pairs,
                public: get("CSNOPLM"),
                polymorphic: get("CSNMO"),
                ancestors: get("CSDIT"),
                inherited: get("CSNIM"),
                hierarchy_root: get("CSNOC") > 0.0 && index.parents(c).is_empty(),
            }
        })
        .collect()
}

fn aggregate(designs: &[ClassDesign], members: &[usize]) -> DesignMetrics {
    let n = members.len() as f64;
    let mean = |f: fn(&ClassDesign) -> f64| if members.is_empty() { 0.0 } else { members.iter().map(|&c| f(&designs[c])).sum::<f64>() / n };
    DesignMetrics {
        class_coupling: mean(|d| d.coupling),
        cohesion_among_methods: mean(|d| d.cohesion),
        n_public_methods: mean(|d| d.public),
        design_size_in_classes: n,
        n_polymorphic_methods: mean(|d| d.polymorphic),
        n_hierarchies: members.iter().filter(|&&c| designs[c].hierarchy_root).count() as f64,
        avg_ancestors: mean(|d| d.ancestors),
        n_inherited_methods: mean(|d| d.inherited),
    }
}

/// Class dependency graph with packages as modules. Package order follows
/// [`ProjectIndex::packages`].
pub fn dependency_graph(index: &ProjectIndex) -> Result<ModuleGraph, QualityError> {
    let packages = index.packages();
    let mut module_of = vec![0; index.classes.len()];
    for (p, members) in packages.values().enumerate() {
        for &c in members {
            module_of[c] = p;
        }
    }
    let edges: Vec<(usize, usize, f64)> = (0..index.classes.len())
        .into_par_iter()
        .flat_map_iter(|c| gather_facts(index, c).depends_on_project.into_iter().map(move |d| (c, d, 1.0)))
        .collect();
    ModuleGraph::new(module_of, packages.len(), edges)
}

fn row(level: &'static str, name: String, design: DesignMetrics, modularity: f64) -> QualityRow {
    QualityRow {
        level,
        name,
        reusability: reusability(&design),
        functionality: functionality(&design),
        extendibility: extendibility(&design),
        modularity,
        design,
    }
}

/// Attributes for the whole project followed by one row per package. A
/// package's modularity is its share of the project value.
pub fn assess_project(index: &ProjectIndex, project_name: &str) -> Result<QualityReport, QualityError> {
    let graph = dependency_graph(index)?;
    let designs = class_designs(index);
    let all: Vec<usize> = (0..index.classes.len()).collect();
    let mut rows = vec![row("project", project_name.to_string(), aggregate(&designs, &all), modularity(&graph)?)];
    let shares = modularity_by_module(&graph)?;
    let packages: BTreeMap<&str, Vec<usize>> = index.packages();
    for ((name, members), share) in packages.iter().zip(shares) {
        let name = if name.is_empty() { DEFAULT_PACKAGE.to_string() } else { name.to_string() };
        rows.push(row("package", name, aggregate(&designs, members), share));
    }
    Ok(QualityReport { rows })
}

impl QualityReport {
    pub const HEADER: &'static str = "level,name,reusability,functionality,extendibility,modularity,\
class_coupling,cohesion_among_methods,n_public_methods,design_size_in_classes,\
n_polymorphic_methods,n_hierarchies,avg_ancestors,n_inherited_methods";

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::HEADER);
        out.push('\n');
        for r in &self.rows {
            let d = &r.design;
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                r.level,
                r.name,
                r.reusability,
                r.functionality,
                r.extendibility,
                r.modularity,
                d.class_coupling,
                d.cohesion_among_methods,
                d.n_public_methods,
                d.design_size_in_classes,
                d.n_polymorphic_methods,
                d.n_hierarchies,
                d.avg_ancestors,
                d.n_inherited_methods
            );
        }
        out
    }
}
