//! Package-level context block, shared by every class of a package.

use std::collections::BTreeSet;

use super::index::ProjectIndex;
use super::submetrics::{five_stats, OPERATORS};
use crate::java::ast::TypeKind;

/// Class metrics summarised with the five operators across a package.
/// Each entry is `(package base, class metric)`.
pub const PACKAGE_DISTRIBUTIONS: [(&str, &str); 7] = [
    ("PKLOC", "CSLOC"),
    ("PKNOST", "CSNOST"),
    ("PKCC", "CC_Sum_All"),
    ("PKCCModified", "CCModified_Sum_All"),
    ("PKCCStrict", "CCStrict_Sum_All"),
    ("PKCCEssential", "CCEssential_Sum_All"),
    ("PKNESTING", "NESTING_Max_All"),
];

/// Class metrics summed across a package.
pub const PACKAGE_SUMS: [&str; 12] =
    ["NOSM", "NOSA", "NOIM", "NOIA", "NOM", "NOMNAMM", "NOCON", "NODM", "NOPM", "NOPRM", "NOPLM", "NOAMM"];

pub const PACKAGE_COUNTERS: [&str; 4] = ["PKNOCS", "PKNOFL", "PKNOI", "PKNOAC"];

pub fn package_distribution_names() -> Vec<String> {
    PACKAGE_DISTRIBUTIONS.iter().flat_map(|(b, _)| OPERATORS.iter().map(move |op| format!("{b}_{op}"))).collect()
}

pub fn package_metric_names() -> Vec<String> {
    let mut names = package_distribution_names();
    names.extend(PACKAGE_SUMS.iter().map(|s| format!("PK{s}")));
    names.extend(PACKAGE_COUNTERS.iter().map(|s| s.to_string()));
    names
}

fn lookup(metrics: &[(String, f64)], name: &str) -> f64 {
    metrics.iter().find(|(n, _)| n == name).map(|(_, v)| *v).unwrap_or(0.0)
}

/// Context block for the classes `members` of one package. `class_metrics`
/// is indexed like `index.classes`.
pub fn compute_package_context(
    index: &ProjectIndex,
    class_metrics: &[Vec<(String, f64)>],
    members: &[usize],
) -> Vec<(String, f64)> {
    let mut out = Vec::with_capacity(51);
    for (base, metric) in PACKAGE_DISTRIBUTIONS {
        let values: Vec<f64> = members.iter().map(|&c| lookup(&class_metrics[c], metric)).collect();
        for (op, v) in OPERATORS.iter().zip(five_stats(&values)) {
            out.push((format!("{base}_{op}"), v));
        }
    }
    for s in PACKAGE_SUMS {
        let cs = format!("CS{s}");
        out.push((format!("PK{s}"), members.iter().map(|&c| lookup(&class_metrics[c], &cs)).sum()));
    }
    let files: BTreeSet<usize> = members.iter().map(|&c| index.class(c).file).collect();
    let interfaces = members.iter().filter(|&&c| index.class(c).decl.kind == TypeKind::Interface).count();
    let abstract_classes = members
        .iter()
        .filter(|&&c| {
            let d = &index.class(c).decl;
            d.kind == TypeKind::Class && d.modifiers.is_abstract
        })
        .count();
    out.push(("PKNOCS".into(), members.len() as f64));
    out.push(("PKNOFL".into(), files.len() as f64));
    out.push(("PKNOI".into(), interfaces as f64));
    out.push(("PKNOAC".into(), abstract_classes as f64));
    out
}
