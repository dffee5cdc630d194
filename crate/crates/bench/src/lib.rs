//! Synthetic inputs shared by the benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use testlab_core::Dataset;

/// `y = x0^2 + sin(3 x1) + 0.5 x2 x3` over uniform features in [-1, 1].
pub fn regression(n: usize, d: usize, seed: u64) -> Dataset {
    assert!(d >= 4, "the target needs four features");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows: Vec<Vec<f64>> = (0..n).map(|_| (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
    let targets = rows.iter().map(|x| x[0] * x[0] + (3.0 * x[1]).sin() + 0.5 * x[2] * x[3]).collect();
    Dataset::from_xy(rows, targets)
}

pub fn points(n: usize, d: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| (0..d).map(|_| rng.gen_range(-3.0..3.0)).collect()).collect()
}

/// A Java class with `methods` branching methods.
pub fn java_class(name: &str, methods: usize) -> String {
    let mut src = format!("package bench;\n\npublic class {name} {{\n    private int state;\n");
    for m in 0..methods {
        src.push_str(&format!(
            "\n    public int step{m}(int a, int b) {{\n        int acc = 0;\n        for (int i = 0; i < a; i++) {{\n            if (i % {k} == 0 && b > i) {{\n                acc += i * b;\n            }} else if (state > {m}) {{\n                acc -= state;\n            }}\n        }}\n        switch (acc % 3) {{\n            case 0: return acc;\n            case 1: state++; break;\n            default: break;\n        }}\n        return acc + state;\n    }}\n",
            k = m % 5 + 2
        ));
    }
    src.push_str("}\n");
    src
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_class_parses() {
        let index = testlab_core::ProjectIndex::build(&[("bench/Gen.java".into(), java_class("Gen", 3))]).unwrap();
        assert_eq!(index.classes.len(), 1);
        assert_eq!(index.classes[0].records.len(), 3);
    }

    #[test]
    fn regression_is_seeded() {
        assert_eq!(regression(10, 4, 1), regression(10, 4, 1));
        assert_eq!(points(5, 2, 3).len(), 5);
    }
}
