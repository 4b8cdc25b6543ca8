use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use tqft::cobordism::CobordismWord;
use tqft::dw::{count_homs_surface_group, CountMethod};
use tqft::lattice::{partition_function, LatticeTensorData, Triangulation};
use tqft::modular::drinfeld_double_data;
use tqft::yang_mills::su2_partition_function;
use tqft::{character_table, Complex64, FrobeniusAlgebra};
use tqft_bench::group;

fn characters(c: &mut Criterion) {
    let mut g = c.benchmark_group("character_table");
    for name in ["S3", "D6", "S4", "Z2xS4"] {
        let grp = group(name);
        g.bench_with_input(BenchmarkId::from_parameter(name), &grp, |b, grp| {
            b.iter(|| character_table(black_box(grp), 0xC0FFEE).unwrap())
        });
    }
    g.finish();
}

fn hom_counts(c: &mut Criterion) {
    let mut g = c.benchmark_group("count_homs");
    let s4 = group("S4");
    g.bench_function("brute_S4_g2", |b| {
        b.iter(|| count_homs_surface_group(black_box(&s4), 2, CountMethod::Brute).unwrap())
    });
    g.bench_function("convolution_S4_g6", |b| {
        b.iter(|| count_homs_surface_group(black_box(&s4), 6, CountMethod::Convolution).unwrap())
    });
    g.finish();
}

fn lattice(c: &mut Criterion) {
    let mut g = c.benchmark_group("lattice");
    let d = LatticeTensorData::group_algebra(&group("S3"));
    for genus in [1usize, 2, 3] {
        let t = Triangulation::standard_surface(genus);
        g.bench_with_input(BenchmarkId::new("S3", genus), &t, |b, t| {
            b.iter(|| partition_function(black_box(t), &d).unwrap())
        });
    }
    let (shuffled, _) = Triangulation::standard_surface(2).shuffle_seeded(30, 7).unwrap();
    g.bench_function("S3_g2_shuffled30", |b| {
        b.iter(|| partition_function(black_box(&shuffled), &d).unwrap())
    });
    g.finish();
}

fn modular(c: &mut Criterion) {
    let mut g = c.benchmark_group("drinfeld_double");
    g.sample_size(10);
    for name in ["S3", "D4", "S4"] {
        let grp = group(name);
        g.bench_with_input(BenchmarkId::from_parameter(name), &grp, |b, grp| {
            b.iter(|| drinfeld_double_data(black_box(grp)).unwrap())
        });
    }
    g.finish();
}

fn cobordism(c: &mut Criterion) {
    let traces: Vec<Complex64> = (1..=5).map(|k| Complex64::new(k as f64, 0.5)).collect();
    let a = FrobeniusAlgebra::semisimple_algebra(&traces).unwrap();
    let w = CobordismWord::closed_surface(4);
    c.bench_function("closed_word_g4_dim5", |b| b.iter(|| w.evaluate(black_box(&a)).unwrap()));
}

fn yang_mills(c: &mut Criterion) {
    c.bench_function("ym_su2_g2_t1e-6", |b| {
        b.iter(|| su2_partition_function(2, black_box(1e-6), 0.25, 1e-8).unwrap())
    });
}

criterion_group!(benches, characters, hom_counts, lattice, modular, cobordism, yang_mills);
criterion_main!(benches);
