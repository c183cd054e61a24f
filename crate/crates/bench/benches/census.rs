use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use ssp_core::counting::{o_value, ssp2_total};
use ssp_core::cyclotomic::NBar;
use ssp_core::lattice_classes::{bass_count_oracle, quotient_census, FieldModel};
use ssp_core::local_orders::{overorder_chain, tensor_local_order, DEFAULT_PRECISION};

fn census(c: &mut Criterion) {
    let mut g = c.benchmark_group("census");
    g.sample_size(10);
    g.bench_function("quotient (3,6) p=2", |b| {
        b.iter(|| quotient_census(black_box(NBar::Pair(3, 6)), 2, FieldModel::Standard).unwrap())
    });
    g.bench_function("quotient (3,6) p=2 alt", |b| {
        b.iter(|| quotient_census(black_box(NBar::Pair(3, 6)), 2, FieldModel::Alternative).unwrap())
    });
    g.bench_function("chain 12 p=2", |b| {
        b.iter(|| overorder_chain(&tensor_local_order(NBar::Single(12), 2, DEFAULT_PRECISION).unwrap()).unwrap())
    });
    g.bench_function("oracle 8 p=2 u=2", |b| b.iter(|| bass_count_oracle(8, 2, 2, DEFAULT_PRECISION).unwrap()));
    g.finish();
}

fn counts(c: &mut Criterion) {
    let mut g = c.benchmark_group("counts");
    g.sample_size(10);
    g.bench_function("o(1,2) p=2", |b| b.iter(|| o_value(NBar::Pair(1, 2), 2, DEFAULT_PRECISION).unwrap()));
    for p in [2, 3, 5] {
        g.bench_function(format!("total p={p}"), |b| b.iter(|| ssp2_total(black_box(p), DEFAULT_PRECISION).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, census, counts);
criterion_main!(benches);
