//! Benchmarks for the hot paths: coherent-state construction, Hamiltonian
//! diagonalization, both evolution routes, and the full protocol.

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use raman_qit::{
    build_effective_hamiltonian, build_full_hamiltonian, coherent_amplitudes, evolve_analytic,
    run_protocol, JointState, OutcomeRule, Propagator, TruncationConfig,
};
use raman_qit_bench::bench_point;

fn coherent_state(c: &mut Criterion) {
    let (_, alpha, _) = bench_point();
    let cfg = TruncationConfig::auto(alpha);
    c.bench_function("coherent_amplitudes_alpha2", |b| {
        b.iter(|| coherent_amplitudes(black_box(alpha), &cfg).unwrap())
    });
}

fn effective_propagator(c: &mut Criterion) {
    let (_, alpha, p) = bench_point();
    let cfg = TruncationConfig::auto(alpha);
    let h = build_effective_hamiltonian(&p, &cfg);
    c.bench_function("effective_diagonalization_dim90", |b| {
        b.iter(|| Propagator::new(black_box(&h)).unwrap())
    });
}

fn full_propagator(c: &mut Criterion) {
    let (_, alpha, p) = bench_point();
    let cfg = TruncationConfig::auto(alpha);
    let h = build_full_hamiltonian(&p, &cfg);
    c.bench_function("full_model_diagonalization_dim135", |b| {
        b.iter(|| Propagator::new(black_box(&h)).unwrap())
    });
}

fn evolution_routes(c: &mut Criterion) {
    let (atom, alpha, p) = bench_point();
    let cfg = TruncationConfig::auto(alpha);
    let t = p.protocol_time();
    c.bench_function("evolve_analytic_to_t_star", |b| {
        b.iter(|| evolve_analytic(&atom, black_box(alpha), &p, t, &cfg).unwrap())
    });

    let field = coherent_amplitudes(alpha, &cfg)
        .unwrap()
        .normalized()
        .unwrap();
    let initial = JointState::product(&atom, &field);
    let propagator = Propagator::new(&build_effective_hamiltonian(&p, &cfg)).unwrap();
    c.bench_function("evolve_numeric_to_t_star_prefactored", |b| {
        b.iter(|| propagator.evolve(black_box(&initial), t).unwrap())
    });
}

fn end_to_end(c: &mut Criterion) {
    let (atom, alpha, p) = bench_point();
    let cfg = TruncationConfig::auto(alpha);
    c.bench_function("run_protocol_alpha2", |b| {
        b.iter(|| {
            run_protocol(black_box(&atom), alpha, &p, &cfg, 10.0, OutcomeRule::FixedE).unwrap()
        })
    });
}

criterion_group!(
    benches,
    coherent_state,
    effective_propagator,
    full_propagator,
    evolution_routes,
    end_to_end
);
criterion_main!(benches);
