use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use ncomplex::contour::{self, Builtin, PiecewisePath, QuadSpec};
use ncomplex::cosexp::CosexpFamily;
use ncomplex::matrix_rep::{matrix_exp, represent};
use ncomplex::polyfactor::{self, NPolynomial};
use ncomplex::{elementary, NComplex, Tolerances, Variant};
use ncomplex_bench::sample;

fn arithmetic(c: &mut Criterion) {
    let mut g = c.benchmark_group("mul");
    for n in [4, 8, 16] {
        let (u, v) = (sample(Variant::Polar, n, 1), sample(Variant::Polar, n, 2));
        g.bench_with_input(BenchmarkId::new("polar", n), &n, |b, _| b.iter(|| black_box(&u).mul(black_box(&v))));
        let tol = Tolerances::default();
        g.bench_with_input(BenchmarkId::new("inverse", n), &n, |b, _| b.iter(|| black_box(&u).inverse(&tol)));
    }
    g.finish();
}

fn exponential(c: &mut Criterion) {
    let mut g = c.benchmark_group("exp");
    for n in [4, 8] {
        let u = sample(Variant::Planar, n, 3);
        g.bench_with_input(BenchmarkId::new("spectral", n), &n, |b, _| b.iter(|| elementary::exp(black_box(&u))));
        let m = represent(&u);
        g.bench_with_input(BenchmarkId::new("matrix", n), &n, |b, _| b.iter(|| matrix_exp(black_box(&m), 1e-17)));
    }
    g.finish();
}

fn cosexponentials(c: &mut Criterion) {
    let fam = CosexpFamily::polar(8).unwrap();
    let tol = Tolerances::default();
    c.bench_function("cosexp/closed", |b| b.iter(|| fam.eval_closed(3, black_box(12.5))));
    c.bench_function("cosexp/series", |b| b.iter(|| fam.eval_series(3, black_box(12.5), &tol)));
}

fn factorization(c: &mut Criterion) {
    let tol = Tolerances::default();
    let p = NPolynomial::scalar(Variant::Polar, 6, &[0.3, -1.2, 0.5, 2.0]).unwrap();
    c.bench_function("factor/roots_deg4_n6", |b| b.iter(|| polyfactor::roots(black_box(&p), &tol)));
    let r = polyfactor::roots(&p, &tol).unwrap();
    c.bench_function("factor/count_deg4_n6", |b| b.iter(|| polyfactor::count_factorizations(black_box(&r), 10_000)));
}

fn integration(c: &mut Criterion) {
    let tol = Tolerances::default();
    let center = NComplex::zero(Variant::Planar, 4).unwrap();
    let path = PiecewisePath::spectral_loop(&center, &[1.0, 1.0], 64).unwrap();
    let u0 = NComplex::new(Variant::Planar, vec![0.3, 0.1, -0.2, 0.05]).unwrap();
    let quad = QuadSpec::default();
    c.bench_function("contour/residue_exp_n4", |b| {
        b.iter(|| contour::residue_check(&Builtin::Exp, black_box(&u0), &path, &quad, &tol))
    });
}

criterion_group!(benches, arithmetic, exponential, cosexponentials, factorization, integration);
criterion_main!(benches);
