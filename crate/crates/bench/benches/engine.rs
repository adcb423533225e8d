use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use trilist::families::{hoffman_singleton, petersen};
use trilist::generator::{gen_class_instance, GenClass};
use trilist::lists::ListAssignment;
use trilist::patterns::enumerate_induced_cycles;
use trilist::propagation::{propagate, RuleSet};
use trilist::solver::{dispatch_solve, solve_exact, SolveConfig};
use trilist::twosat::solve_2list;

fn bench_two_list(c: &mut Criterion) {
    let (g, _) = gen_class_instance(GenClass::C5Free, 200, 11).unwrap();
    // Size-2 lists keep the whole implication pipeline busy.
    let masks: Vec<u8> = (0..g.n()).map(|v| [0b011, 0b101, 0b110][v % 3]).collect();
    let lists = ListAssignment::from_masks(masks).unwrap();
    c.bench_function("solve_2list/n=200", |b| {
        b.iter(|| black_box(solve_2list(&g, &lists).unwrap()))
    });
}

fn bench_propagate(c: &mut Criterion) {
    let (g, lists) = gen_class_instance(GenClass::C6Free, 128, 3).unwrap();
    let rules = RuleSet::basic();
    c.bench_function("propagate/c6free-n=128", |b| {
        b.iter(|| black_box(propagate(&g, &lists, &rules).unwrap()))
    });
}

fn bench_cycle_enumeration(c: &mut Criterion) {
    let g = petersen();
    c.bench_function("induced_cycles/petersen-c5", |b| {
        b.iter(|| black_box(enumerate_induced_cycles(&g, 5).unwrap()))
    });
    let hs = hoffman_singleton();
    c.bench_function("induced_cycles/hoffman-singleton-c5", |b| {
        b.iter(|| black_box(enumerate_induced_cycles(&hs, 5).unwrap()))
    });
}

fn bench_dispatch(c: &mut Criterion) {
    let cfg = SolveConfig::default();
    let (g, lists) = gen_class_instance(GenClass::C4C7Free, 100, 9).unwrap();
    c.bench_function("dispatch/c4c7-n=100", |b| {
        b.iter(|| black_box(dispatch_solve(&g, &lists, &cfg).unwrap()))
    });
}

fn bench_exact(c: &mut Criterion) {
    let cfg = SolveConfig::default();
    let hs = hoffman_singleton();
    let lists = ListAssignment::full(50);
    c.bench_function("exact/hoffman-singleton", |b| {
        b.iter(|| black_box(solve_exact(&hs, &lists, &cfg).unwrap()))
    });
}

criterion_group!(
    benches,
    bench_two_list,
    bench_propagate,
    bench_cycle_enumeration,
    bench_dispatch,
    bench_exact
);
criterion_main!(benches);
