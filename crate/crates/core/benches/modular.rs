//! Per-prime work spread over the rayon pool vs run one prime at a time.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use moddiq_core::diq::mod_diq;
use moddiq_core::families::{stress_i3, worked_example, xk_xy, xy_ideal, xy_ring, xyz};
use moddiq_core::groebner::Ideal;
use moddiq_core::idealops::product;
use moddiq_core::modular::{mod_quotient, rational_basis, ModularRunConfig};
use moddiq_core::par::ExecMode;

const MODES: [(&str, ExecMode); 2] = [("parallel", ExecMode::Parallel), ("sequential", ExecMode::Sequential)];

fn cfg(exec: ExecMode) -> ModularRunConfig {
    ModularRunConfig {
        exec,
        ..ModularRunConfig::default()
    }
}

fn worked_example_diq(c: &mut Criterion) {
    let r = xy_ring();
    let (i, j) = worked_example(&r).unwrap();
    let f = rational_basis(&i, &ModularRunConfig::default()).unwrap();
    let mut group = c.benchmark_group("mod_diq worked example");
    for (name, mode) in MODES {
        let cfg = cfg(mode);
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| mod_diq(black_box(&f), j.gens(), &cfg).unwrap())
        });
    }
    group.finish();
}

fn stress_quotient(c: &mut Criterion) {
    let r = xyz();
    let i = product(&stress_i3(&r), &xk_xy(&r, 2)).unwrap();
    let by = xy_ideal(&r);
    let mut group = c.benchmark_group("i3*(x2,xy):(x,y) from generators");
    group.sample_size(10);
    for (name, mode) in MODES {
        let cfg = cfg(mode);
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                // A fresh ideal each time, so no cached basis is reused.
                let fresh = Ideal::new(&r, i.gens().to_vec()).unwrap();
                let f = rational_basis(black_box(&fresh), &cfg).unwrap();
                mod_quotient(&f, by.gens(), &cfg).unwrap()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, worked_example_diq, stress_quotient);
criterion_main!(benches);
