use std::time::Instant;

use testlab_core::demo::run_demo;

#[test]
fn demo_is_deterministic_and_fast() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let start = Instant::now();
    let first = run_demo(a.path(), 7).unwrap();
    let elapsed = start.elapsed();
    let second = run_demo(b.path(), 7).unwrap();
    assert!(elapsed.as_secs_f64() < 60.0, "demo took {elapsed:?}");
    assert_eq!(first.evaluation, second.evaluation);
    assert!(first.trivial > 0);
    assert!(first.train_rows > first.test_rows);
    for path in &first.files {
        let name = path.file_name().unwrap();
        let left = std::fs::read(path).unwrap();
        let right = std::fs::read(b.path().join(name)).unwrap();
        assert!(left == right, "{} differs between runs", name.to_string_lossy());
    }
    let preds = std::fs::read_to_string(a.path().join("predictions.csv")).unwrap();
    assert_eq!(preds.lines().count(), first.classes + 1);
    for line in preds.lines().skip(1) {
        let t: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
        assert!((0.0..=1.0).contains(&t));
    }
}
