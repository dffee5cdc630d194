use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use testlab_bench::java_class;
use testlab_core::demo::demo_sources;
use testlab_core::java::tokenize;
use testlab_core::metrics::{compute_lexical_metrics, extract_project};
use testlab_core::{Manifest, ProjectIndex};

fn bench_extraction(c: &mut Criterion) {
    let sources = demo_sources();
    let manifest = Manifest::default();
    c.bench_function("index_demo_project", |b| b.iter(|| ProjectIndex::build(&sources).unwrap()));
    let index = ProjectIndex::build(&sources).unwrap();
    c.bench_function("extract_demo_project", |b| b.iter(|| extract_project(&index, &manifest).unwrap()));

    let mut group = c.benchmark_group("lexical");
    for methods in [4, 32] {
        let src = java_class("Gen", methods);
        group.bench_with_input(BenchmarkId::from_parameter(methods), &src, |b, src| {
            b.iter(|| compute_lexical_metrics(&tokenize(src).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, bench_extraction);
criterion_main!(benches);
