use criterion::{black_box, criterion_group, criterion_main, Criterion};
use lieconf_bench::poly_pairs;
use lieconf_core::catalog::{build_chv, build_csv, build_tsv_lie, lie_jacobi_check, sym};
use lieconf_core::der::solve_graded_derivations;
use lieconf_core::lca::check_all_axioms;
use lieconf_core::repr::{classify_rank1, ClassifyOptions};

fn poly_mul(c: &mut Criterion) {
    let pairs = poly_pairs(32, 7);
    c.bench_function("poly mul, 32 random pairs", |b| {
        b.iter(|| {
            for (p, q) in &pairs {
                black_box(p * q);
            }
        })
    });
}

fn jacobi(c: &mut Criterion) {
    let csv = build_csv(sym("a"), sym("b"));
    c.bench_function("axioms of symbolic csv", |b| b.iter(|| check_all_axioms(black_box(&csv)).unwrap()));
    let tsv = build_tsv_lie();
    c.bench_function("tsv Jacobi, window 3", |b| b.iter(|| lie_jacobi_check(black_box(&tsv), 3)));
}

fn derivations(c: &mut Criterion) {
    let mut g = c.benchmark_group("derivation solve");
    g.sample_size(10);
    let csv = build_csv(1, 0);
    g.bench_function("csv(1,0), c=0, D=4, N=2", |b| b.iter(|| solve_graded_derivations(&csv, 0, 4, 2).unwrap()));
    let chv = build_chv(2, 1);
    g.bench_function("chv(2,1), c=1, D=3, N=1", |b| b.iter(|| solve_graded_derivations(&chv, 1, 3, 1).unwrap()));
    g.finish();
}

fn classification(c: &mut Criterion) {
    let mut g = c.benchmark_group("classification");
    g.sample_size(10);
    let alg = build_csv(0, 0);
    let opts = ClassifyOptions::default();
    g.bench_function("rank one over csv(0,0)", |b| b.iter(|| classify_rank1(&alg, &opts).unwrap()));
    g.finish();
}

criterion_group!(benches, poly_mul, jacobi, derivations, classification);
criterion_main!(benches);
