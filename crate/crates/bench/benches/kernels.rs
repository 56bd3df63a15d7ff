use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use qproj_core::groupoid::{verify_bijection, verify_partition, MapCheck, Window};
use qproj_core::line_bundles::{closed_form, hockey_stick, recursion_expand};
use qproj_core::oracle::{rho_numeric, Cutoffs, DiagonalPattern, PatternStack};
use qproj_core::proj_monoid::{normalize, ProjClass};
use qproj_core::suite::{run, SuiteConfig};

fn line_bundles(c: &mut Criterion) {
    let mut g = c.benchmark_group("line_bundles");
    for k in [5i64, 25, 100] {
        g.bench_with_input(BenchmarkId::new("recursion_expand_n5", k), &k, |b, &k| {
            b.iter(|| recursion_expand(5, black_box(k)).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("closed_form_n5", k), &k, |b, &k| {
            b.iter(|| closed_form(5, black_box(k)).unwrap())
        });
    }
    g.bench_function("hockey_stick_12_40", |b| {
        b.iter(|| hockey_stick(12, black_box(40)).unwrap())
    });
    g.finish();
}

fn monoid(c: &mut Criterion) {
    let terms: Vec<ProjClass> = (0..1000)
        .map(|i| ProjClass::validate(5, 1 + (i % 5), 1 + i).unwrap())
        .collect();
    c.bench_function("normalize_1000_terms", |b| {
        b.iter(|| normalize(5, black_box(&terms)).unwrap())
    });
}

fn oracle(c: &mut Criterion) {
    let class = ProjClass::validate(3, 2, 6).unwrap();
    let stack = PatternStack::single(DiagonalPattern::encode(&class).unwrap());
    c.bench_function("rho_numeric_n3", |b| {
        b.iter(|| rho_numeric(black_box(&stack), Cutoffs::default()).unwrap())
    });
}

fn groupoid(c: &mut Criterion) {
    let mut g = c.benchmark_group("groupoid");
    g.sample_size(10);
    let w = Window::new(6).unwrap();
    g.bench_function("theta_shift_n2_w6", |b| {
        b.iter(|| verify_bijection(MapCheck::ThetaShift { n: 2, k: 3, j: 0 }, w).unwrap())
    });
    g.bench_function("gamma_n2_w6", |b| {
        b.iter(|| verify_bijection(MapCheck::Gamma { n: 2 }, w).unwrap())
    });
    g.bench_function("partition_n2_w6", |b| {
        b.iter(|| verify_partition(2, 3, 0, w).unwrap())
    });
    g.finish();
}

fn suite(c: &mut Criterion) {
    let mut g = c.benchmark_group("suite");
    g.sample_size(10);
    let cfg = SuiteConfig::default();
    g.bench_function("criteria_1_to_6", |b| {
        b.iter(|| run(&[1, 2, 3, 4, 5, 6], &cfg).unwrap())
    });
    g.finish();
}

criterion_group!(benches, line_bundles, monoid, oracle, groupoid, suite);
criterion_main!(benches);
