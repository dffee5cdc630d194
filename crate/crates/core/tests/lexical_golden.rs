use std::path::PathBuf;

use testlab_core::java::tokenize;
use testlab_core::metrics::{compute_lexical_metrics, LEXICAL_NAMES};

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/lexical")
}

#[test]
fn frozen_counts_match() {
    let expected = std::fs::read_to_string(fixtures().join("expected.csv")).unwrap();
    let mut lines = expected.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(&header[1..], &LEXICAL_NAMES[..]);
    let mut files = 0;
    for line in lines {
        let cells: Vec<&str> = line.split(',').collect();
        let src = std::fs::read_to_string(fixtures().join(cells[0])).unwrap();
        let got = compute_lexical_metrics(&tokenize(&src).unwrap()).values();
        let want: Vec<u64> = cells[1..].iter().map(|c| c.parse().unwrap()).collect();
        for (i, name) in LEXICAL_NAMES.iter().enumerate() {
            assert_eq!(got[i], want[i], "{} {}", cells[0], name);
        }
        files += 1;
    }
    assert_eq!(files, 5);
}
