use chowla_core::analytics::{dk_sieve, dk_sieve_seq};
use chowla_core::cotsum::XkTable;
use chowla_core::par;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

fn bench_sieve(c: &mut Criterion) {
    let mut g = c.benchmark_group("dk_sieve");
    for n in [200_000u64, 800_000] {
        g.bench_with_input(BenchmarkId::new("par_k3", n), &n, |b, &n| {
            b.iter(|| dk_sieve(3, black_box(n)))
        });
        g.bench_with_input(BenchmarkId::new("seq_k3", n), &n, |b, &n| {
            b.iter(|| dk_sieve_seq(3, black_box(n)))
        });
    }
    g.finish();
}

fn bench_xk_table(c: &mut Criterion) {
    let mut g = c.benchmark_group("xk_table");
    g.sample_size(10);
    for (p, k) in [(13u32, 4u32), (29, 3)] {
        let id = format!("p{p}_k{k}");
        g.bench_function(BenchmarkId::new("par", &id), |b| {
            b.iter(|| XkTable::build(black_box(p), black_box(k)).unwrap())
        });
        g.bench_function(BenchmarkId::new("seq", &id), |b| {
            b.iter(|| XkTable::build_seq(black_box(p), black_box(k)).unwrap())
        });
    }
    g.finish();
}

fn bench_block_sums(c: &mut Criterion) {
    let table = dk_sieve(2, 2_000_000);
    let weight = |range: std::ops::Range<u64>| {
        let mut s = 0.0;
        for n in range {
            if n % 5 == 1 {
                s += table.get(n) as f64 / n as f64;
            } else if n % 5 == 4 {
                s -= table.get(n) as f64 / n as f64;
            }
        }
        s
    };
    let mut g = c.benchmark_group("congruence_blocks");
    g.bench_function("par", |b| {
        b.iter(|| par::sum_blocks(black_box(2_000_000), 1 << 18, weight))
    });
    g.bench_function("seq", |b| {
        b.iter(|| par::sum_blocks_seq(black_box(2_000_000), 1 << 18, weight))
    });
    g.finish();
}

criterion_group!(benches, bench_sieve, bench_xk_table, bench_block_sums);
criterion_main!(benches);
