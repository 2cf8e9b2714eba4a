use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use cutpath::certify::{certify, BoundParams};
use cutpath::flips::flip_neighbors;
use cutpath::oracle::{count_arrangements, gamma_exact};
use cutpath::rational::rat;
use cutpath::{odd_even_arrangement, Exec};

const POLICIES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn bench_certify(c: &mut Criterion) {
    let mut g = c.benchmark_group("certify_coarse");
    g.sample_size(10);
    for (name, exec) in POLICIES {
        let p = BoundParams {
            threshold: rat(7, 5),
            exec,
            ..BoundParams::default()
        };
        g.bench_with_input(BenchmarkId::from_parameter(name), &p, |b, p| {
            b.iter(|| certify(p).unwrap())
        });
    }
    g.finish();
}

fn bench_oracle(c: &mut Criterion) {
    let mut g = c.benchmark_group("oracle");
    g.sample_size(10);
    for (name, exec) in POLICIES {
        g.bench_with_input(BenchmarkId::new("count_arrangements_7", name), &exec, |b, &e| {
            b.iter(|| count_arrangements(7, e).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("gamma_6", name), &exec, |b, &e| {
            b.iter(|| gamma_exact(6, e).unwrap())
        });
    }
    g.finish();
}

fn bench_flips(c: &mut Criterion) {
    let mut g = c.benchmark_group("flip_neighbors");
    g.sample_size(10);
    let d = odd_even_arrangement(60);
    for (name, exec) in POLICIES {
        g.bench_with_input(BenchmarkId::new("odd_even_60", name), &exec, |b, &e| {
            b.iter(|| flip_neighbors(&d, e))
        });
    }
    g.finish();
}

criterion_group!(benches, bench_certify, bench_oracle, bench_flips);
criterion_main!(benches);
