use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use hdi_bench::{planted_points, separable_dataset};
use hdi_core::ann::{init_network, sweep, train, Activation, SweepConfig};
use hdi_core::features::{split, SplitSpec};
use hdi_core::ingest::{parse_wide_csv, write_wide_csv, WideCsvFormat};
use hdi_core::kmeans::{kmeans_fit, KMeansConfig};
use hdi_core::synth::{region_table, RegionTableConfig};
use hdi_core::TrainConfig;

fn network(c: &mut Criterion) {
    let data = separable_dataset();
    let model = init_network(&[5, 20, 4], Activation::Sigmoid, 1).unwrap();
    c.bench_function("forward 5:20:4", |b| {
        b.iter(|| model.forward(black_box(data.features.row(0))).unwrap())
    });
    c.bench_function("loss and gradient, 200 rows", |b| {
        let labels = data.label_indices();
        b.iter(|| {
            model
                .loss_and_gradient(black_box(&data.features), &labels)
                .unwrap()
        })
    });
    let cfg = TrainConfig {
        epochs: 100,
        ..Default::default()
    };
    c.bench_function("train 100 epochs, 200 rows", |b| {
        b.iter(|| train(&model, &data, &cfg).unwrap())
    });
}

fn small_sweep(c: &mut Criterion) {
    let data = separable_dataset();
    let (tr, te) = split(&data, &SplitSpec::default()).unwrap();
    let cfg = SweepConfig {
        runs_per_config: 2,
        train: TrainConfig {
            epochs: 50,
            ..Default::default()
        },
        ..Default::default()
    };
    let mut group = c.benchmark_group("sweep 4 sizes x 2 runs");
    group.sample_size(10);
    group.bench_function("1 job", |b| b.iter(|| sweep(&tr, &te, &cfg, 1).unwrap()));
    group.bench_function("4 jobs", |b| b.iter(|| sweep(&tr, &te, &cfg, 4).unwrap()));
    group.finish();
}

fn clustering(c: &mut Criterion) {
    let points = planted_points();
    c.bench_function("kmeans k=4, 495 points", |b| {
        b.iter(|| kmeans_fit(black_box(&points), &KMeansConfig::default()).unwrap())
    });
}

fn ingest(c: &mut Criterion) {
    let table = region_table(&RegionTableConfig::default());
    let mut csv = Vec::new();
    write_wide_csv(&table, &mut csv, &WideCsvFormat::default()).unwrap();
    c.bench_function("parse 300-region wide csv", |b| {
        b.iter(|| parse_wide_csv(black_box(csv.as_slice()), &WideCsvFormat::default()).unwrap())
    });
}

criterion_group!(benches, network, small_sweep, clustering, ingest);
criterion_main!(benches);
