use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use qcalc::qsturm::{asymptotic_pair, solve, BoundaryParams, Potential, Problem, SolveOptions};
use qcalc::qspecial::{j_alpha_auto, lattice_values, q_cos_auto, LatticeFn};
use qcalc::qcore::{q_pochhammer, Len};
use qcalc::{Mp, PrecisionGuard, QGrid};
use qcalc_bench::{compact_potential, golden, half, standard_grid};

fn series(c: &mut Criterion) {
    let qp = half();
    let mut g = c.benchmark_group("series");
    for x in [0.5, 4.0, 40.0] {
        g.bench_with_input(BenchmarkId::new("q_cos_auto", x), &x, |b, &x| {
            b.iter(|| q_cos_auto(black_box(x), &qp).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("j_alpha_auto", x), &x, |b, &x| {
            b.iter(|| j_alpha_auto(black_box(x), 0.5, &qp).unwrap())
        });
    }
    g.bench_function("pochhammer_inf", |b| {
        b.iter(|| q_pochhammer(black_box(&0.3f64), &0.5, Len::Infinite, 1e-16))
    });
    g.finish();
}

fn lattice(c: &mut Criterion) {
    let mut g = c.benchmark_group("lattice");
    for (name, qp) in [("half", half()), ("golden", golden())] {
        g.bench_function(BenchmarkId::new("cos_f64", name), |b| {
            b.iter(|| lattice_values::<f64>(LatticeFn::Cos, 0.0, -40, 20, &qp).unwrap())
        });
        g.bench_function(BenchmarkId::new("cos_mp256", name), |b| {
            let _g = PrecisionGuard::new(256);
            b.iter(|| lattice_values::<Mp>(LatticeFn::Cos, 0.0, -40, 20, &qp).unwrap())
        });
    }
    g.finish();
}

fn solver(c: &mut Criterion) {
    let grid = standard_grid(half());
    let mut g = c.benchmark_group("solver");
    g.sample_size(20);
    // binary64 only holds the solution on the short grid
    let short = QGrid::new(half(), -10, 60).unwrap();
    let p = Potential::<f64>::from_spec(&compact_potential(), &short).unwrap();
    let bc = BoundaryParams::new(0.3, Problem::E1);
    for big_k in [4, 8] {
        let lambda = 0.5f64.powi(-big_k);
        g.bench_with_input(BenchmarkId::new("solve_f64", big_k), &lambda, |b, &lambda| {
            b.iter(|| solve(&p, lambda, bc, &short, &SolveOptions::default()).unwrap())
        });
    }
    {
        let _g = PrecisionGuard::new(256);
        let pm = Potential::<Mp>::from_spec(&compact_potential(), &grid).unwrap();
        g.bench_function("solve_mp256_K8", |b| {
            b.iter(|| solve(&pm, 256.0, bc, &grid, &SolveOptions::default()).unwrap())
        });
    }
    g.bench_function("asymptotic_pair_K8", |b| {
        b.iter(|| {
            asymptotic_pair(&compact_potential(), 8, 0.3, &grid, 8, 1e-6, &SolveOptions::default()).unwrap()
        })
    });
    g.finish();
}

criterion_group!(benches, series, lattice, solver);
criterion_main!(benches);
