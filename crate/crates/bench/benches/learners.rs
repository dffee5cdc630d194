use criterion::{criterion_group, criterion_main, Criterion};
use testlab_bench::{points, regression};
use testlab_core::dataset::lof_scores;
use testlab_core::learners::{ForestParams, HgbParams, HistGradientBoosting, MlpParams, Mlp, RandomForest};

fn bench_learners(c: &mut Criterion) {
    let train = regression(2000, 10, 1);
    let mut group = c.benchmark_group("fit");
    group.sample_size(10);
    group.bench_function("hgb_100", |b| {
        b.iter(|| HistGradientBoosting::fit(&train, &HgbParams { max_iter: 100, ..HgbParams::default() }).unwrap())
    });
    group.bench_function("forest_20", |b| {
        b.iter(|| RandomForest::fit(&train, &ForestParams { n_estimators: 20, ..ForestParams::default() }, 1).unwrap())
    });
    group.bench_function("mlp_64x32_10_epochs", |b| {
        let params = MlpParams { hidden: vec![64, 32], epochs: 10, ..MlpParams::default() };
        b.iter(|| Mlp::fit(&train, &params, 1).unwrap())
    });
    group.finish();

    let cloud = points(500, 10, 2);
    c.bench_function("lof_500x10_k20", |b| b.iter(|| lof_scores(&cloud, 20).unwrap()));
}

criterion_group!(benches, bench_learners);
criterion_main!(benches);
