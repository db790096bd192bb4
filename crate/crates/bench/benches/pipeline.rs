use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use kresolve_bench::{example_two, quartic};
use kresolve_core::detcx::{det_cayley, det_interpolate, DetOptions};
use kresolve_core::geometry::{check_acyclicity, implicitize, minor_ideal, PipelineOptions};
use kresolve_core::groebner::{buchberger, TermOrder};
use kresolve_core::koszul::{koszul_strand, linear_forms};

fn determinants(c: &mut Criterion) {
    let spec = example_two();
    let strand = koszul_strand(&linear_forms(&spec), spec.eta() + 1).unwrap();
    let bounds = spec.resultant_multidegree();
    let opts = DetOptions::default();
    let mut group = c.benchmark_group("example_two_det");
    group.bench_function("cayley", |b| b.iter(|| det_cayley(black_box(&strand), &opts).unwrap()));
    group.bench_function("interpolate", |b| b.iter(|| det_interpolate(black_box(&strand), &bounds, &opts).unwrap()));
    group.finish();
}

fn groebner(c: &mut Criterion) {
    let spec = quartic();
    let gens = minor_ideal(&spec, 2);
    let order = TermOrder::degrevlex(spec.ring());
    c.bench_function("quartic_minor_ideal_gb", |b| b.iter(|| buchberger(black_box(&gens), &order).unwrap()));
}

fn full_pipeline(c: &mut Criterion) {
    let spec = quartic();
    let mut group = c.benchmark_group("quartic");
    group.sample_size(10);
    group.bench_function("conditions", |b| b.iter(|| check_acyclicity(black_box(&spec)).unwrap()));
    group.bench_function("implicitize", |b| {
        b.iter(|| implicitize(black_box(&spec), &PipelineOptions::default()).unwrap())
    });
    group.finish();
}

criterion_group!(benches, determinants, groebner, full_pipeline);
criterion_main!(benches);
