//! Per-operation costs of each scheme at matched parameters. The interesting
//! comparison is ordinal: the 2-vector multiply (9 big multiplications plus
//! the matrix collapse) against the scalar multiply (1), and the noisy
//! variants against their plain counterparts.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_bigint::BigInt;

use swhe_core::keys::AnyKey;
use swhe_core::params::{ParameterSet, Scheme};
use swhe_core::rng::seeded_rng;

fn bench_ops(c: &mut Criterion) {
    let configs = [
        (Scheme::He1, None, 2, 32),
        (Scheme::He1N, None, 2, 8),
        (Scheme::He2, None, 2, 32),
        (Scheme::He2N, None, 2, 8),
        (Scheme::Hek, Some(3), 2, 32),
    ];
    let mut rng = seeded_rng(2024);

    let mut group = c.benchmark_group("he_ops");
    for (scheme, k, d, rho) in configs {
        let params = ParameterSet::derive(scheme, d, 16, rho, k, None).unwrap();
        let key = AnyKey::generate(&params, false, &mut rng).unwrap();
        let m1 = BigInt::from(3);
        let m2 = BigInt::from(5);
        let c1 = key.encrypt(&m1, &mut rng).unwrap();
        let c2 = key.encrypt(&m2, &mut rng).unwrap();
        let label = format!("{scheme}-k{}-d{d}-rho{rho}", params.k);

        group.bench_function(BenchmarkId::new("encrypt", &label), |b| {
            let mut rng = seeded_rng(7);
            b.iter(|| key.encrypt(&m1, &mut rng).unwrap())
        });
        group.bench_function(BenchmarkId::new("add", &label), |b| {
            b.iter(|| key.add(&c1, &c2).unwrap())
        });
        group.bench_function(BenchmarkId::new("mul", &label), |b| {
            b.iter(|| key.mul(&c1, &c2).unwrap())
        });
        let prod = key.mul(&c1, &c2).unwrap();
        group.bench_function(BenchmarkId::new("decrypt", &label), |b| {
            b.iter(|| key.decrypt(&prod).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_ops);
criterion_main!(benches);
