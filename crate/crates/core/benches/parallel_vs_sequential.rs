use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fibfield::fibgen::selfreciprocal_scan_with;
use fibfield::fqfunc::{functional_expression_check_with, verify_period_with};
use fibfield::moments::d_oracle_range;
use fibfield::{make_field, Exec};

const POLICIES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn scan(c: &mut Criterion) {
    let mut g = c.benchmark_group("selfreciprocal_scan");
    g.sample_size(10);
    for (name, exec) in POLICIES {
        g.bench_with_input(BenchmarkId::new(name, "p=3 n<=2000"), &exec, |b, &exec| {
            b.iter(|| selfreciprocal_scan_with(black_box(3), 2000, exec).unwrap())
        });
        g.bench_with_input(BenchmarkId::new(name, "Z n<=600"), &exec, |b, &exec| {
            b.iter(|| selfreciprocal_scan_with(black_box(0), 600, exec).unwrap())
        });
    }
    g.finish();
}

fn period(c: &mut Criterion) {
    let mut g = c.benchmark_group("verify_period");
    g.sample_size(10);
    let ctx = make_field(13, 1).unwrap();
    for (name, exec) in POLICIES {
        g.bench_with_input(BenchmarkId::new(name, "GF(13)"), &exec, |b, &exec| {
            b.iter(|| verify_period_with(black_box(&ctx), 1, 30, exec).unwrap())
        });
    }
    g.finish();
}

fn functional(c: &mut Criterion) {
    let mut g = c.benchmark_group("functional_expression");
    g.sample_size(10);
    let ctx = make_field(3, 2).unwrap();
    for (name, exec) in POLICIES {
        g.bench_with_input(BenchmarkId::new(name, "GF(9) n=40"), &exec, |b, &exec| {
            b.iter(|| functional_expression_check_with(black_box(&ctx), 40, exec).unwrap())
        });
    }
    g.finish();
}

fn moments(c: &mut Criterion) {
    let mut g = c.benchmark_group("moment_oracle");
    g.sample_size(10);
    let ctx = make_field(7, 2).unwrap();
    for (name, exec) in POLICIES {
        g.bench_with_input(BenchmarkId::new(name, "GF(49) one period"), &exec, |b, &exec| {
            b.iter(|| d_oracle_range(black_box(&ctx), 1, 2400, exec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, scan, period, functional, moments);
criterion_main!(benches);
