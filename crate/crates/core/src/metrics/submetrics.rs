//! Class-level statistics over method-level metrics.
//!
//! Each base metric is summarised by five operators, once over all methods
//! and once over non-accessor/mutator methods (`NAMM`). Names follow
//! `<Base>_<Op>_<Filter>`, e.g. `CC_Sum_NAMM`.

use super::method::MethodRecord;

pub const OPERATORS: [&str; 5] = ["Min", "Max", "Mean", "Sum", "SD"];
pub const FILTERS: [&str; 2] = ["All", "NAMM"];

/// The cyclomatic family; each variant gets its own 10 names.
pub const CC_BASES: [&str; 4] = ["CC", "CCModified", "CCStrict", "CCEssential"];

/// Base metrics that are derived per method. `NOPARAM` is the parameter
/// count; `NOP` is taken by the parent count.
pub const METHOD_BASES: [&str; 10] =
    ["CC", "CCModified", "CCStrict", "CCEssential", "LOC", "NOST", "NOPARAM", "NESTING", "PATH", "KNOTS"];

/// Min, max, mean, sum and population SD; all zero for an empty slice.
pub fn five_stats(values: &[f64]) -> [f64; 5] {
    if values.is_empty() {
        return [0.0; 5];
    }
    let n = values.len() as f64;
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = values.iter().sum();
    let mean = sum / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    [min, max, mean.clamp(min, max), sum, var.sqrt()]
}

pub fn base_value(r: &MethodRecord, base: &str) -> Option<f64> {
    Some(match base {
        "CC" => r.cc.cyclomatic,
        "CCModified" => r.cc.modified,
        "CCStrict" => r.cc.strict,
        "CCEssential" => r.cc.essential,
        "LOC" => r.loc,
        "NOST" => r.nost,
        "NOPARAM" => r.params,
        "NESTING" => r.nesting,
        "PATH" => r.paths,
        "KNOTS" => r.knots,
        _ => return None,
    } as f64)
}

/// Sub-metric names for one base. `CC` expands to the whole cyclomatic family.
pub fn sub_metric_names(base: &str) -> Vec<String> {
    let bases: Vec<&str> = if base == "CC" { CC_BASES.to_vec() } else { vec![base] };
    let mut out = Vec::new();
    for b in bases {
        for f in FILTERS {
            for op in OPERATORS {
                out.push(format!("{b}_{op}_{f}"));
            }
        }
    }
    out
}

/// Derives the sub-metrics of `base` over `records`. Returns `None` for an
/// unknown base.
pub fn derive_sub_metrics(records: &[MethodRecord], base: &str) -> Option<Vec<(String, f64)>> {
    if !METHOD_BASES.contains(&base) {
        return None;
    }
    let bases: Vec<&str> = if base == "CC" { CC_BASES.to_vec() } else { vec![base] };
    let mut out = Vec::new();
    for b in bases {
        let all: Vec<f64> = records.iter().map(|r| base_value(r, b)).collect::<Option<_>>()?;
        let namm: Vec<f64> =
            records.iter().zip(&all).filter(|(r, _)| !r.is_accessor_or_mutator).map(|(_, v)| *v).collect();
        for (f, values) in FILTERS.iter().zip([&all, &namm]) {
            for (op, v) in OPERATORS.iter().zip(five_stats(values)) {
                out.push((format!("{b}_{op}_{f}"), v));
            }
        }
    }
    Some(out)
}

/// All method-derived sub-metrics of a class, in manifest order.
pub fn all_sub_metrics(records: &[MethodRecord]) -> Vec<(String, f64)> {
    ["CC", "LOC", "NOST", "NOPARAM", "NESTING", "PATH", "KNOTS"]
        .iter()
        .flat_map(|b| derive_sub_metrics(records, b).expect("known base"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::java::ast::Visibility;
    use crate::metrics::method::CcVariants;
    use proptest::prelude::*;

    fn rec(cc: u64, namm: bool) -> MethodRecord {
        MethodRecord {
            name: "m".into(),
            loc: 3,
            nost: 1,
            params: 0,
            cc: CcVariants { cyclomatic: cc, modified: cc, strict: cc, essential: 1 },
            nesting: 1,
            paths: 1,
            knots: 0,
            visibility: Visibility::Public,
            is_static: false,
            is_constructor: false,
            is_accessor_or_mutator: !namm,
        }
    }

    fn lookup(v: &[(String, f64)], name: &str) -> f64 {
        v.iter().find(|(n, _)| n == name).unwrap().1
    }

    #[test]
    fn cardinality() {
        let rs = vec![rec(1, true), rec(2, true), rec(3, false)];
        assert_eq!(derive_sub_metrics(&rs, "CC").unwrap().len(), 40);
        for b in ["LOC", "NOST", "NOPARAM", "NESTING", "PATH", "KNOTS"] {
            assert_eq!(derive_sub_metrics(&rs, b).unwrap().len(), 10);
            assert_eq!(sub_metric_names(b).len(), 10);
        }
        assert_eq!(sub_metric_names("CC").len(), 40);
        assert_eq!(all_sub_metrics(&rs).len(), 100);
        assert!(derive_sub_metrics(&rs, "BOGUS").is_none());
    }

    #[test]
    fn singleton() {
        let v = derive_sub_metrics(&[rec(5, true)], "CC").unwrap();
        for op in ["Min", "Max", "Mean", "Sum"] {
            assert_eq!(lookup(&v, &format!("CC_{op}_All")), 5.0);
        }
        assert_eq!(lookup(&v, "CC_SD_All"), 0.0);
    }

    #[test]
    fn population_sd() {
        let v = derive_sub_metrics(&[rec(2, true), rec(4, true)], "CC").unwrap();
        assert_eq!(lookup(&v, "CC_Mean_NAMM"), 3.0);
        assert_eq!(lookup(&v, "CC_SD_NAMM"), 1.0);
    }

    #[test]
    fn empty_namm_filter_is_zero() {
        let v = derive_sub_metrics(&[rec(4, false), rec(6, false)], "CC").unwrap();
        for op in OPERATORS {
            assert_eq!(lookup(&v, &format!("CC_{op}_NAMM")), 0.0);
        }
        assert_eq!(lookup(&v, "CC_Sum_All"), 10.0);
    }

    #[test]
    fn names_match_values() {
        let rs = vec![rec(1, true)];
        let names: Vec<String> = derive_sub_metrics(&rs, "CC").unwrap().into_iter().map(|(n, _)| n).collect();
        assert_eq!(names, sub_metric_names("CC"));
    }

    proptest! {
        #[test]
        fn ordering_of_stats(values in proptest::collection::vec(0u32..1000, 0..40)) {
            let v: Vec<f64> = values.iter().map(|&x| x as f64).collect();
            let [min, max, mean, _sum, sd] = five_stats(&v);
            prop_assert!(min <= mean && mean <= max);
            prop_assert!(sd >= 0.0);
        }
    }
}
