use criterion::{black_box, criterion_group, criterion_main, Criterion};
use ffwaring::algebra::Poly;
use ffwaring::counting::{count_reps_mitm, DEFAULT_BUDGET};
use ffwaring::expsums::PowerTable;
use ffwaring::prediction::singular_series_truncated;
use ffwaring::thresholds::bounds_table;
use ffwaring::WaringInstance;
use ffwaring_bench::{field, problem, sample_alpha};

fn field_mul(c: &mut Criterion) {
    let f = field(49);
    let elems: Vec<_> = f.elements().collect();
    c.bench_function("field_mul_q49", |b| {
        b.iter(|| {
            let mut acc = f.one();
            for &x in &elems {
                if !x.is_zero() {
                    acc = f.mul(acc, x);
                }
            }
            black_box(acc)
        })
    });
}

fn weyl(c: &mut Criterion) {
    let f = field(5);
    let table = PowerTable::new(&f, 3, 4);
    let alpha = sample_alpha(&f, -16);
    c.bench_function("weyl_sum_q5_k3_X4", |b| {
        b.iter(|| table.weyl_sum(black_box(&alpha)).unwrap())
    });
}

fn counting(c: &mut Criterion) {
    let prob = problem(3, 2, 5, &[1, 0, 0, 0, 1]);
    c.bench_function("mitm_q3_k2_s5", |b| {
        b.iter(|| count_reps_mitm(black_box(&prob), DEFAULT_BUDGET).unwrap())
    });
}

fn series(c: &mut Criterion) {
    let f = field(3);
    let n = Poly::from_ints(&f, &[1, 0, 0, 0, 1]);
    let inst = WaringInstance::new(f, 2, 5).unwrap();
    c.bench_function("series_q3_G3", |b| {
        b.iter(|| singular_series_truncated(black_box(&n), &inst, 3, DEFAULT_BUDGET).unwrap())
    });
}

fn thresholds(c: &mut Criterion) {
    c.bench_function("bounds_table_small_primes", |b| {
        b.iter(|| bounds_table(black_box(&[2, 3, 5, 7]), 2, 40).unwrap())
    });
}

criterion_group!(benches, field_mul, weyl, counting, series, thresholds);
criterion_main!(benches);
