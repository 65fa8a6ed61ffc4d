use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use mk_bench::group_corpus;
use mk_core::bimodule::enumerate_derivations;
use mk_core::commutator::{commutator, lower_series};
use mk_core::congruence::all_congruences;
use mk_core::counterexample::counterexample_harness;
use mk_core::maltsev::{enumerate_herds, find_maltsev_term};
use mk_core::{
    Bimodule, Congruence, DBimodule, FiniteRing, LinearForm, DEFAULT_CLONE_BUDGET, DEFAULT_DER_BUDGET,
    DEFAULT_LATTICE_SIZE_CAP,
};

fn maltsev_terms(c: &mut Criterion) {
    let mut g = c.benchmark_group("maltsev_term");
    for (name, alg) in group_corpus() {
        g.bench_function(name, |b| b.iter(|| find_maltsev_term(black_box(&alg), DEFAULT_CLONE_BUDGET).unwrap()));
    }
    g.finish();
}

fn lattices(c: &mut Criterion) {
    let mut g = c.benchmark_group("congruence_lattice");
    for (name, alg) in group_corpus() {
        g.bench_function(name, |b| b.iter(|| all_congruences(black_box(&alg), 10_000, DEFAULT_LATTICE_SIZE_CAP).unwrap()));
    }
    g.finish();
}

fn commutators(c: &mut Criterion) {
    let mut g = c.benchmark_group("commutator");
    for (name, alg) in group_corpus() {
        let p = find_maltsev_term(&alg, DEFAULT_CLONE_BUDGET).unwrap().unwrap();
        let nabla = Congruence::nabla(alg.size);
        g.bench_function(format!("{name}/nabla"), |b| b.iter(|| commutator(&alg, black_box(&nabla), &nabla, &p).unwrap()));
        g.bench_function(format!("{name}/lower_series"), |b| b.iter(|| lower_series(black_box(&alg), &p, 16).unwrap()));
    }
    g.finish();
}

fn herds(c: &mut Criterion) {
    c.bench_function("enumerate_herds/4", |b| b.iter(|| enumerate_herds(black_box(4))));
}

fn derivations(c: &mut Criterion) {
    let form = LinearForm::identity(&FiniteRing::zmod(4));
    let bim = DBimodule::cone(&form, &Bimodule::regular(&form.ring), DEFAULT_DER_BUDGET).unwrap();
    c.bench_function("derivations/cone-z4", |b| {
        b.iter(|| enumerate_derivations(black_box(&form), &bim, DEFAULT_DER_BUDGET).unwrap())
    });
}

fn counterexample(c: &mut Criterion) {
    c.bench_function("counterexample", |b| b.iter(|| counterexample_harness().unwrap()));
}

criterion_group!(benches, maltsev_terms, lattices, commutators, herds, derivations, counterexample);
criterion_main!(benches);
