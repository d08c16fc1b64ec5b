use std::collections::BTreeMap;
use std::hint::black_box;

use cohbound_bench::{circuit, example1};
use cohbound_core::{
    conjugated_generators, epsilon_max, eta_table, h0_appendix_c, h0_vertex_enum, monte_carlo_check, theorem2_bound,
    BoundMethod, PerturbationMode, VerificationConfig,
};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn eta(c: &mut Criterion) {
    let mut g = c.benchmark_group("eta_table");
    let ex1 = example1();
    g.bench_function("example1", |b| b.iter(|| eta_table(black_box(&ex1), 0.2, 1e-12).unwrap()));
    for n in [2, 4, 8] {
        let circ = circuit(n, 4, 2.0);
        g.bench_with_input(BenchmarkId::new("four_gates", n), &circ, |b, circ| {
            b.iter(|| eta_table(circ, 0.1, 1e-12).unwrap())
        });
    }
    g.finish();
}

fn h0(c: &mut Criterion) {
    let mut g = c.benchmark_group("h0");
    let gens = conjugated_generators(&example1()).unwrap();
    g.bench_function("closed_form_2x2", |b| {
        b.iter(|| h0_appendix_c(gens.a[0].as_matrix(), gens.a[1].as_matrix()).unwrap())
    });
    for n_gates in [4, 8, 12] {
        let gens = conjugated_generators(&circuit(4, n_gates, 1.0)).unwrap();
        g.bench_with_input(BenchmarkId::new("vertex", n_gates), &gens, |b, gens| {
            b.iter(|| h0_vertex_enum(gens).unwrap())
        });
    }
    g.finish();
}

fn crossover(c: &mut Criterion) {
    let ex1 = example1();
    c.bench_function("epsilon_max/example1", |b| b.iter(|| epsilon_max(black_box(&ex1), 1e-10).unwrap()));
}

fn verify(c: &mut Criterion) {
    let ex1 = example1();
    let h0 = h0_vertex_enum(&conjugated_generators(&ex1).unwrap()).unwrap().value;
    let floor = theorem2_bound(&ex1, 0.2, 1e-12, h0).unwrap().fidelity_floor;
    let floors = BTreeMap::from([(BoundMethod::Theorem2, floor)]);
    let cfg = VerificationConfig::new(10_000, 1, 0.2, PerturbationMode::PerGate);
    let mut g = c.benchmark_group("monte_carlo");
    g.sample_size(20);
    g.bench_function("example1_10k", |b| b.iter(|| monte_carlo_check(&ex1, &cfg, &floors).unwrap()));
    g.finish();
}

criterion_group!(benches, eta, h0, crossover, verify);
criterion_main!(benches);
