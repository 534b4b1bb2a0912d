use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use qshap_core::enveloping::Uea;
use qshap_core::exactalg::det_fraction_free;
use qshap_core::shapovalov::{shapovalov_matrix, verify_factorization};
use qshap_core::{AlgebraKind, RootVector};

fn kind(fam: &str, n: usize) -> AlgebraKind {
    AlgebraKind::parse(fam, n).expect("kind")
}

fn assembly(c: &mut Criterion) {
    let mut g = c.benchmark_group("assemble");
    for (fam, n, nu) in [("sq", 2, vec![3]), ("q", 2, vec![3]), ("q", 3, vec![1, 1])] {
        let k = kind(fam, n);
        let nu = RootVector(nu);
        g.bench_with_input(BenchmarkId::new(k.to_string(), nu.to_string()), &nu, |b, nu| {
            // fresh algebra each time so the normal-ordering memo starts cold
            b.iter(|| shapovalov_matrix(&Uea::new(k), k, black_box(nu)).expect("matrix"))
        });
    }
    g.finish();
}

fn block_det(c: &mut Criterion) {
    let mut g = c.benchmark_group("block_det");
    for (fam, n, nu) in [("sq", 2, vec![4]), ("q", 2, vec![3]), ("sq", 3, vec![1, 1])] {
        let k = kind(fam, n);
        let nu = RootVector(nu);
        let sm = shapovalov_matrix(&Uea::new(k), k, &nu).expect("matrix");
        let blocks = sm.blocks();
        g.bench_function(BenchmarkId::new(k.to_string(), nu.to_string()), |b| {
            b.iter(|| blocks.iter().map(|m| det_fraction_free(black_box(m)).expect("det")).count())
        });
    }
    g.finish();
}

fn verify(c: &mut Criterion) {
    let mut g = c.benchmark_group("verify");
    g.sample_size(10);
    for (fam, n, nu) in [("sq", 2, vec![4]), ("sq", 3, vec![1, 1]), ("q", 3, vec![1, 1])] {
        let k = kind(fam, n);
        let nu = RootVector(nu);
        g.bench_function(BenchmarkId::new(k.to_string(), nu.to_string()), |b| {
            b.iter(|| verify_factorization(&Uea::new(k), k, black_box(&nu)).expect("verify"))
        });
    }
    g.finish();
}

criterion_group!(benches, assembly, block_det, verify);
criterion_main!(benches);
