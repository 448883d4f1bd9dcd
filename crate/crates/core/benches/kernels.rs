use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;
use zonolab::functionals::{intrinsic_volume, power_k_volume_enumerated, EnumerationLimits};
use zonolab::par::sequential;
use zonolab::radii::{circumradius_with, inradius, CircumMethod, CircumOptions};
use zonolab::stochastic::steiner_mc_volume;
use zonolab::zonotope::{make_cube, random_unit_generators};

fn sign_enumeration(c: &mut Criterion) {
    let mut g = c.benchmark_group("circumradius_gray");
    g.sample_size(10);
    for n in [16usize, 20] {
        let gs = random_unit_generators(n, 4, 1).unwrap();
        let opts = CircumOptions { method: CircumMethod::Gray, allow_large: false };
        g.bench_with_input(BenchmarkId::new("parallel", n), &gs, |b, gs| b.iter(|| circumradius_with(black_box(gs), opts).unwrap()));
        g.bench_with_input(BenchmarkId::new("sequential", n), &gs, |b, gs| {
            b.iter(|| sequential(|| circumradius_with(black_box(gs), opts).unwrap()))
        });
    }
    g.finish();
}

fn subset_sums(c: &mut Criterion) {
    let mut g = c.benchmark_group("subset_sums");
    g.sample_size(10);
    let gs = random_unit_generators(24, 5, 2).unwrap();
    g.bench_function("intrinsic_volume/parallel", |b| b.iter(|| intrinsic_volume(black_box(&gs), 5).unwrap()));
    g.bench_function("intrinsic_volume/sequential", |b| b.iter(|| sequential(|| intrinsic_volume(black_box(&gs), 5).unwrap())));
    let limits = EnumerationLimits::default();
    g.bench_function("power_k_1.5/parallel", |b| b.iter(|| power_k_volume_enumerated(black_box(&gs), 4, 1.5, limits).unwrap()));
    g.bench_function("power_k_1.5/sequential", |b| {
        b.iter(|| sequential(|| power_k_volume_enumerated(black_box(&gs), 4, 1.5, limits).unwrap()))
    });
    g.bench_function("inradius/parallel", |b| b.iter(|| inradius(black_box(&gs)).unwrap()));
    g.bench_function("inradius/sequential", |b| b.iter(|| sequential(|| inradius(black_box(&gs)).unwrap())));
    g.finish();
}

fn monte_carlo(c: &mut Criterion) {
    let mut g = c.benchmark_group("steiner_mc");
    g.sample_size(10);
    let sq = make_cube(3, 1.0).unwrap();
    g.bench_function("parallel", |b| b.iter(|| steiner_mc_volume(black_box(&sq), 0.5, 20_000, 3).unwrap()));
    g.bench_function("sequential", |b| b.iter(|| sequential(|| steiner_mc_volume(black_box(&sq), 0.5, 20_000, 3).unwrap())));
    g.finish();
}

criterion_group!(benches, sign_enumeration, subset_sums, monte_carlo);
criterion_main!(benches);
