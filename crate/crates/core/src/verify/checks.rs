use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Check, VerifyConfig};
use crate::error::{QError, Result};
use crate::num::{rel_diff, Mp, PrecisionGuard, Real};
use crate::qbessel::{bessel_remainder, delta_q_alpha, heat_kernel, ramanujan_b_alpha};
use crate::qcore::{make_q_param, q_derivative, GridFunction, QGrid, QParam, DEFAULT_PROD_TOL};
use crate::qspecial::{
    j_alpha, j_alpha_auto, j_alpha_grid, lattice_values, q_cos, q_cos_auto, q_exp_E, q_exp_e, q_sin,
    q_sin_auto, LatticeFn,
};
use crate::qsturm::{
    asymptotic_pair, bracket_on_grid, fit_precision_bits, gronwall_certify_solution,
    homogeneous_solution, lambda_value, picard, q_wronskian, solve, BoundaryParams, Potential,
    PotentialSpec, Problem, Solution, SolveOptions,
};

pub const CHECK_IDS: [&str; 14] = [
    "pythagorean",
    "exp-reciprocity",
    "fundamental-theorem",
    "wronskian",
    "solver-free",
    "picard",
    "main-identity",
    "bracket",
    "gronwall",
    "bessel-ode",
    "bessel-remainder",
    "half-order",
    "weber",
    "classical-limit",
];

const ANCHORS: [&str; 14] = [
    "cos(qx;q^2)cos(q^{1/2}x;q^2) + q^{-3/2}sin(q^{3/2}x;q^2)sin(qx;q^2) = 1",
    "e(x;q)E(-x;q) = 1",
    "D_q int_0^x f = f and int_0^x D_q g = g(x) - g(0)",
    "u1(qx)D_q u2 - u2(qx)D_q u1 is constant",
    "p = 0: solution = a cos(lambda x) + b q^{-1/2} lambda^{-1} sin(q^{1/2} lambda x)",
    "forward substitution = fixed point of the Volterra map",
    "|mu nu1 - nu mu1| q^{1/2} lambda = 1",
    "|[phi, theta]_q| = q^{1/2}",
    "|phi| <= A e(C(1-q)x;q^2); sup |phi| bounded in lambda",
    "Delta_{q,alpha} j_alpha(lambda x) + lambda^2 j_alpha(lambda x) = 0",
    "|j_alpha(lambda) - cos(q^{-alpha-1/2} lambda)| <= C_q / lambda, decreasing",
    "j_{-1/2}(x) = cos(x;q^2), j_{1/2}(x) = sin(x;q^2)/x",
    "int e(-q^{-1}t x^2) j_alpha(lambda x) x^{2a+1} = A t^{-a-1} e(-lambda^2/((1+q)^2 t))",
    "|cos(1;q^2) - cos 1| decreases as q -> 1",
];

struct Part {
    residual: f64,
    ok: bool,
    detail: String,
}

impl Part {
    fn tol(residual: f64, tol: f64, detail: String) -> Part {
        Part {
            residual,
            ok: residual <= tol,
            detail,
        }
    }
}

fn check(n: u8, tolerance: f64, parts: Vec<(String, Result<Part>)>) -> Check {
    let mut max_residual = 0.0f64;
    let mut pass = true;
    let mut detail = Vec::new();
    for (label, p) in parts {
        match p {
            Ok(p) => {
                max_residual = if p.residual.is_nan() { f64::INFINITY } else { max_residual.max(p.residual) };
                pass &= p.ok;
                detail.push(format!("{label}: {}", p.detail));
            }
            Err(e) => {
                max_residual = f64::INFINITY;
                pass = false;
                detail.push(format!("{label}: error: {e}"));
            }
        }
    }
    let i = (n - 1) as usize;
    Check {
        id: format!("{n:02}-{}", CHECK_IDS[i]),
        anchor: ANCHORS[i].to_string(),
        max_residual,
        tolerance,
        pass,
        detail: detail.join("; "),
    }
}

fn q_label(qp: &QParam) -> String {
    match qp.structural_m() {
        Some(m) => format!("q={:.6} (m={m})", qp.q()),
        None => format!("q={}", qp.q()),
    }
}

fn per_q(cfg: &VerifyConfig, f: impl Fn(&QParam) -> Result<Part>) -> Vec<(String, Result<Part>)> {
    cfg.qs.iter().map(|qp| (q_label(qp), f(qp))).collect()
}

fn fmt_list(v: &[f64]) -> String {
    let s: Vec<String> = v.iter().map(|x| format!("{x:.3e}")).collect();
    format!("[{}]", s.join(", "))
}

/// Run check `n` (1..=14).
pub fn run_check(n: u8, cfg: &VerifyConfig) -> Check {
    let ext = cfg.extended;
    match n {
        1 => {
            let tol = if ext { 1e-20 } else { 1e-9 };
            check(n, tol, per_q(cfg, |qp| {
                let r = if ext {
                    let _g = PrecisionGuard::new(256);
                    pythagorean::<Mp>(qp)?
                } else {
                    pythagorean::<f64>(qp)?
                };
                Ok(Part::tol(r, tol, format!("max {r:.3e} over k in [-12, 20]")))
            }))
        }
        2 => {
            let tol = if ext { 1e-20 } else { 1e-12 };
            check(n, tol, per_q(cfg, |qp| {
                let r = if ext {
                    let _g = PrecisionGuard::new(256);
                    reciprocity::<Mp>(qp)?
                } else {
                    reciprocity::<f64>(qp)?
                };
                Ok(Part::tol(r, tol, format!("max {r:.3e}")))
            }))
        }
        3 => check(n, 1e-13, per_q(cfg, |qp| {
            let r = fundamental_theorem(&cfg.grid(qp)?, 100, 0x5eed_0003)?;
            Ok(Part::tol(r, 1e-13, format!("100 trials, max {r:.3e}")))
        })),
        4 => check(n, 1e-10, per_q(cfg, |qp| wronskian(&cfg.grid(qp)?))),
        5 => check(n, 1e-12, per_q(cfg, |qp| solver_free(&cfg.grid(qp)?))),
        6 => check(n, 1e-10, per_q(cfg, |qp| picard_equivalence(&cfg.grid(qp)?))),
        7 => check(n, 1e-4, per_q(cfg, |qp| main_identity(&cfg.grid(qp)?).map(|r| r.0))),
        8 => check(n, 1e-9, per_q(cfg, |qp| bracket(&cfg.grid(qp)?).map(|r| r.0))),
        9 => check(n, 1.0, per_q(cfg, |qp| gronwall(&cfg.grid(qp)?))),
        10 => check(n, 1e-9, per_q(cfg, |qp| bessel_ode(&cfg.grid(qp)?))),
        11 => check(n, 1.1, per_q(cfg, |qp| remainder(qp))),
        12 => {
            let tol = if ext { 1e-20 } else { 1e-12 };
            check(n, tol, per_q(cfg, |qp| {
                let r = if ext {
                    let _g = PrecisionGuard::new(256);
                    half_order::<Mp>(qp)?
                } else {
                    half_order_f64(qp)?
                };
                Ok(Part::tol(r, tol, format!("max {r:.3e} over k in [-5, 10]")))
            }))
        }
        13 => check(n, 1e-8, per_q(cfg, |qp| weber(qp).map(|r| r.0))),
        14 => check(n, 0.0, vec![("q in {0.9, 0.99, 0.999}".into(), classical_limit())]),
        _ => Check {
            id: format!("{n:02}-unknown"),
            anchor: String::new(),
            max_residual: f64::INFINITY,
            tolerance: 0.0,
            pass: false,
            detail: "no such check".into(),
        },
    }
}

/// Checks 7, 8 and 13 rerun against the corrected targets, for those in `ids`.
pub fn corrected_checks(ids: &[u8], cfg: &VerifyConfig) -> Vec<Check> {
    let mut out = Vec::new();
    let mut push = |id: &str, anchor: &str, tol: f64, parts: Vec<(String, Result<Part>)>| {
        let mut c = check(1, tol, parts);
        c.id = id.to_string();
        c.anchor = anchor.to_string();
        out.push(c);
    };
    if ids.contains(&7) {
        push(
            "07c-main-identity-drift",
            "|mu nu1 - nu mu1| q^{1/2} lambda = q / prod(1 - (1-q)^2 x^2 p(x))",
            1e-8,
            per_q(cfg, |qp| main_identity(&cfg.grid(qp)?).map(|r| r.1)),
        );
    }
    if ids.contains(&8) {
        push(
            "08c-bracket-drift",
            "[phi, theta]_q(x) = -q^{1/2} / prod_{t <= x} (1 - (1-q)^2 t^2 p(t))",
            1e-9,
            per_q(cfg, |qp| bracket(&cfg.grid(qp)?).map(|r| r.1)),
        );
    }
    if ids.contains(&13) {
        push(
            "13c-weber-shifted",
            "lhs = A q^{a+1} t^{-a-1} e(-q^{-2a-1} lambda^2/((1+q)^2 t)), integer a",
            1e-8,
            per_q(cfg, |qp| weber(qp).map(|r| r.1)),
        );
    }
    out
}

fn pythagorean<R: Real>(qp: &QParam) -> Result<f64> {
    let (lo, hi) = (-12, 20);
    let c1 = lattice_values::<R>(LatticeFn::Cos, 1.0, lo, hi, qp)?;
    let c2 = lattice_values::<R>(LatticeFn::Cos, 0.5, lo, hi, qp)?;
    let s1 = lattice_values::<R>(LatticeFn::Sin, 1.5, lo, hi, qp)?;
    let s2 = lattice_values::<R>(LatticeFn::Sin, 1.0, lo, hi, qp)?;
    let w = qp.q_as::<R>().powf(&R::from_f64(-1.5));
    let mut worst = 0.0f64;
    for i in 0..c1.len() {
        let v = c1[i].clone() * &c2[i] + w.clone() * &s1[i] * &s2[i] - R::one();
        worst = worst.max(v.abs().to_f64());
    }
    Ok(worst)
}

fn reciprocity<R: Real>(qp: &QParam) -> Result<f64> {
    let q = qp.q_as::<R>();
    let mut worst = 0.0f64;
    for base in [q.powi(3), q.clone(), R::one()] {
        for x in [base.clone(), -base] {
            if (R::one() - &q) * &x >= R::one() {
                continue;
            }
            let v = q_exp_e(&x, qp)? * q_exp_E(&(-x), qp) - R::one();
            worst = worst.max(v.abs().to_f64());
        }
    }
    Ok(worst)
}

/// Worst relative error of both round trips over `trials` random grid
/// functions with entries of magnitude in `[0.5, 2]`.
pub(crate) fn fundamental_theorem(grid: &QGrid, trials: usize, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| -> f64 {
        let m: f64 = rng.gen_range(0.5..2.0);
        if rng.gen_bool(0.5) {
            m
        } else {
            -m
        }
    };
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let f = GridFunction::from_fn(*grid, |_, _: &f64| draw(&mut rng))?;
        let cum = f.cumulative_integral();
        for k in grid.k_min()..grid.k_max() {
            worst = worst.max(rel_diff(&q_derivative(&cum, k)?, f.at(k), 0.0));
        }
        let g = GridFunction::from_fn(*grid, |_, _: &f64| draw(&mut rng))?;
        let back = g.q_derivative()?.cumulative_integral();
        let end = *g.at(grid.k_max());
        for k in grid.k_min()..grid.k_max() {
            let want = g.at(k) - end;
            worst = worst.max((back.at(k) - want).abs() / want.abs().max(1.0));
        }
    }
    Ok(worst)
}

fn wronskian(grid: &QGrid) -> Result<Part> {
    let _g = PrecisionGuard::new(256);
    let qp = grid.qp();
    let mut spread = 0.0f64;
    let mut gap = 0.0f64;
    let mut off_one = 0.0f64;
    for big_k in [0, 4] {
        let lam: f64 = lambda_value(big_k, qp);
        let u1 = homogeneous_solution(&Mp::one(), &Mp::zero(), lam, grid)?;
        let u2 = homogeneous_solution(&Mp::zero(), &Mp::one(), lam, grid)?;
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for k in grid.k_min()..grid.k_max() {
            let w = q_wronskian(&u1, &u2, k)?;
            let v = w.derivative_form.to_f64();
            lo = lo.min(v);
            hi = hi.max(v);
            gap = gap.max(w.discrepancy);
            off_one = off_one.max((v - 1.0).abs());
        }
        spread = spread.max(hi - lo);
    }
    Ok(Part {
        residual: spread.max(gap),
        ok: spread <= 1e-10 && gap <= 1e-12,
        detail: format!(
            "K in {{0, 4}}: spread {spread:.3e}, form gap {gap:.3e} (tol 1e-12), |W - 1| {off_one:.3e}"
        ),
    })
}

fn compact() -> PotentialSpec {
    PotentialSpec::Compact {
        k_lo: 0,
        k_hi: 5,
        c: 0.1,
    }
}

fn run(
    spec: &PotentialSpec,
    big_k: i64,
    alpha: f64,
    problem: Problem,
    grid: &QGrid,
) -> Result<(Solution<Mp>, Potential<Mp>)> {
    let p = Potential::<Mp>::from_spec(spec, grid)?;
    let lam: f64 = lambda_value(big_k, grid.qp());
    let sol = solve(&p, lam, BoundaryParams::new(alpha, problem), grid, &SolveOptions::default())?;
    Ok((sol, p))
}

const FREE_KS: [i64; 3] = [4, 8, 12];
const PICARD_KS: [i64; 2] = [4, 8];
const PICARD_ALPHA: f64 = 0.3;

fn solver_free(grid: &QGrid) -> Result<Part> {
    let _g = PrecisionGuard::new(256);
    let qp = grid.qp();
    let mut worst = 0.0f64;
    for big_k in FREE_KS {
        for pb in [Problem::E1, Problem::E2] {
            let (sol, _) = run(&PotentialSpec::Zero, big_k, 0.0, pb, grid)?;
            let (a, b) = sol.bc.initial_data::<Mp>(qp);
            let h = homogeneous_solution(&a, &b, sol.lambda, grid)?;
            worst = worst.max(sol.u.rel_sup_diff(&h)?);
        }
    }
    Ok(Part::tol(worst, 1e-12, format!("K in {FREE_KS:?}, E1/E2: {worst:.3e}")))
}

fn picard_equivalence(grid: &QGrid) -> Result<Part> {
    let _g = PrecisionGuard::new(256);
    let mut worst = 0.0f64;
    let mut ratio = 0.0f64;
    for big_k in PICARD_KS {
        for pb in [Problem::E1, Problem::E2] {
            let (sol, p) = run(&compact(), big_k, PICARD_ALPHA, pb, grid)?;
            ratio = ratio.max(p.norm_1() / sol.lambda);
            let pic = picard(&p, sol.lambda, sol.bc, grid, 1e-40, 500)?;
            if !pic.converged {
                return Err(QError::Evaluation(format!(
                    "Picard did not converge at K = {big_k} ({} sweeps)",
                    pic.sweeps
                )));
            }
            worst = worst.max(pic.u.rel_sup_diff(&sol.u)?);
        }
    }
    Ok(Part {
        residual: worst,
        ok: worst <= 1e-10 && ratio < 0.1,
        detail: format!("K in {PICARD_KS:?}, E1/E2, |p|_1/lambda <= {ratio:.3e}: {worst:.3e}"),
    })
}

const IDENTITY_KS: [i64; 3] = [8, 10, 12];

/// `(stated, corrected)` parts of the main identity.
fn main_identity(grid: &QGrid) -> Result<(Part, Part)> {
    let mut worst = 0.0f64;
    let mut worst_c = 0.0f64;
    let mut monotone = true;
    let mut notes = Vec::new();
    for alpha in [0.0, 0.3] {
        let mut res = Vec::new();
        for big_k in IDENTITY_KS {
            let r = asymptotic_pair(&compact(), big_k, alpha, grid, 8, 1e-6, &SolveOptions::default())?;
            res.push(r.identity.residual);
            worst_c = worst_c.max(r.corrected_residual);
        }
        monotone &= res.windows(2).all(|w| w[1] <= w[0]);
        worst = res.iter().fold(worst, |a, &b| a.max(b));
        notes.push(format!("alpha={alpha}: {}", fmt_list(&res)));
    }
    let stated = Part {
        residual: worst,
        ok: worst <= 1e-4 && monotone,
        detail: format!(
            "K in {IDENTITY_KS:?}, {}{}",
            notes.join(", "),
            if monotone { "" } else { ", not non-increasing" }
        ),
    };
    let corrected = Part::tol(worst_c, 1e-8, format!("max {worst_c:.3e}"));
    Ok((stated, corrected))
}

/// `(stated, corrected)` parts of the bracket check.
fn bracket(grid: &QGrid) -> Result<(Part, Part)> {
    let big_k = 8;
    let bits = fit_precision_bits(big_k, (grid.k_min(), grid.k_max()), grid)?;
    let _g = PrecisionGuard::new(bits);
    let qp = grid.qp();
    let (s1, p) = run(&compact(), big_k, PICARD_ALPHA, Problem::E1, grid)?;
    let (s2, _) = run(&compact(), big_k, PICARD_ALPHA, Problem::E2, grid)?;
    let b = bracket_on_grid(&s1.u, &s2.u)?;
    let q = qp.q_as::<Mp>();
    let rq = q.sqrt();
    let omq2 = (Mp::one() - &q).square();
    let mut worst = 0.0f64;
    let mut worst_c = 0.0f64;
    let mut sign = 0i32;
    // bracket(k) = bracket(k+1) / (1 - (1-q)^2 x^2 p), accumulated from the small end
    let mut prod = Mp::one();
    for k in (b.grid().k_min()..=b.grid().k_max()).rev() {
        prod = prod * (Mp::one() - omq2.clone() * grid.x::<Mp>(k).square() * p.at(k));
        let v = b.at(k);
        worst = worst.max(((v.abs() - &rq) / &rq).abs().to_f64());
        worst_c = worst_c.max(((v.clone() * &prod + &rq) / &rq).abs().to_f64());
        sign = if v.is_negative() { -1 } else { 1 };
    }
    Ok((
        Part::tol(
            worst,
            1e-9,
            format!("K={big_k}, alpha={PICARD_ALPHA}: max ||[phi,theta]|/q^(1/2) - 1| = {worst:.3e}, sign {sign:+}"),
        ),
        Part::tol(worst_c, 1e-9, format!("max {worst_c:.3e}")),
    ))
}

fn gronwall(grid: &QGrid) -> Result<Part> {
    let _g = PrecisionGuard::new(256);
    let mut runs = 0;
    let mut failed = Vec::new();
    let mut cases: Vec<(PotentialSpec, i64, f64)> = Vec::new();
    for big_k in FREE_KS {
        cases.push((PotentialSpec::Zero, big_k, 0.0));
    }
    for big_k in PICARD_KS {
        cases.push((compact(), big_k, PICARD_ALPHA));
    }
    for (spec, big_k, alpha) in &cases {
        for pb in [Problem::E1, Problem::E2] {
            let (sol, p) = run(spec, *big_k, *alpha, pb, grid)?;
            let rep = gronwall_certify_solution(&sol, &p)?;
            runs += 1;
            if !rep.pass {
                failed.push(format!("{spec} K={big_k} {pb:?}"));
            }
        }
    }
    // sup-norms over K = 4..14
    let mut logs = Vec::new();
    for big_k in 4..=14 {
        let (sol, _) = run(&compact(), big_k, PICARD_ALPHA, Problem::E1, grid)?;
        logs.push(sol.u.sup_norm().log2_abs());
    }
    let lo = logs.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let decades = (hi - lo) * std::f64::consts::LOG10_2;
    Ok(Part {
        residual: decades,
        ok: failed.is_empty() && decades <= 1.0,
        detail: format!(
            "certified {}/{runs} runs{}; sup|phi| over K=4..14 spans 2^{lo:.1} .. 2^{hi:.1} ({decades:.1} decades, tol 1)",
            runs - failed.len(),
            if failed.is_empty() { String::new() } else { format!(" (failed: {})", failed.join(", ")) }
        ),
    })
}

fn bessel_ode(grid: &QGrid) -> Result<Part> {
    let _g = PrecisionGuard::new(256);
    let qp = grid.qp();
    let mut worst = 0.0f64;
    for alpha in [0.0, 0.5, 1.0] {
        for big_k in [2, 6, 10] {
            let lam: f64 = lambda_value(big_k, qp);
            let j = j_alpha_grid::<Mp>(alpha, lam, grid)?;
            let lam2 = lambda_value::<Mp>(big_k, qp).square();
            let scale = lam2.clone() * j.sup_norm();
            for k in grid.k_min() + 1..grid.k_max() {
                let d = delta_q_alpha(&j, alpha, k)?;
                let r = (d.value + lam2.clone() * j.at(k)).abs() / &scale;
                worst = worst.max(r.to_f64());
            }
        }
    }
    Ok(Part::tol(worst, 1e-9, format!("alpha in {{0, 0.5, 1}}, K in {{2, 6, 10}}: {worst:.3e}")))
}

fn remainder(qp: &QParam) -> Result<Part> {
    let _g = PrecisionGuard::new(256);
    let mut worst = 0.0f64;
    let mut ok = true;
    let mut notes = Vec::new();
    for alpha in [0.5, 1.0] {
        let mut mags = Vec::new();
        for big_k in [4, 8, 12] {
            let r = bessel_remainder::<Mp>(0, big_k, alpha, qp)?;
            let ratio = r.remainder.abs() / r.bound;
            worst = worst.max(ratio);
            ok &= ratio <= 1.1;
            mags.push(r.remainder.abs());
        }
        let dec = mags.windows(2).all(|w| w[1] < w[0]);
        ok &= dec;
        notes.push(format!(
            "alpha={alpha}: |R| {}{}",
            fmt_list(&mags),
            if dec { "" } else { " not decreasing" }
        ));
    }
    Ok(Part {
        residual: worst,
        ok,
        detail: format!("max |R|/(C_q q^K) = {worst:.3e}; {}", notes.join(", ")),
    })
}

fn half_order<R: Real>(qp: &QParam) -> Result<f64> {
    let mut worst = 0.0f64;
    let q = qp.q_as::<R>();
    for k in -5..=10 {
        let x = q.powi(k);
        let c = q_cos(&x, qp).value;
        let s = q_sin(&x, qp).value / &x;
        let jm = j_alpha(&x, -0.5, qp)?.value;
        let jp = j_alpha(&x, 0.5, qp)?.value;
        worst = worst.max(rel_diff(&jm, &c, 1e-300)).max(rel_diff(&jp, &s, 1e-300));
    }
    Ok(worst)
}

/// Binary64 values, routed to extended precision where the series cancels.
fn half_order_f64(qp: &QParam) -> Result<f64> {
    let mut worst = 0.0f64;
    for k in -5..=10 {
        let x = qp.q().powi(k);
        let c = q_cos_auto(x, qp)?.value;
        let s = q_sin_auto(x, qp)?.value / x;
        let jm = j_alpha_auto(x, -0.5, qp)?.value;
        let jp = j_alpha_auto(x, 0.5, qp)?.value;
        worst = worst.max(rel_diff(&jm, &c, 1e-300)).max(rel_diff(&jp, &s, 1e-300));
    }
    Ok(worst)
}

/// `(stated, corrected)` parts of the heat-kernel check.
fn weber(qp: &QParam) -> Result<(Part, Part)> {
    let _g = PrecisionGuard::new(256);
    let mut worst = 0.0f64;
    let mut worst_c = 0.0f64;
    for alpha in [-0.25, 0.0, 0.5, 1.0] {
        for s in [2, 0, -2] {
            for big_k in [1, 4] {
                let h = heat_kernel::<Mp>(s, big_k, alpha, qp)?;
                worst = worst.max(h.weber_residual);
                if alpha.fract() == 0.0 {
                    worst_c = worst_c.max(h.corrected_residual);
                }
            }
        }
    }
    let mut worst_r = 0.0f64;
    let q = qp.q_as::<Mp>();
    for alpha in [-0.25, 0.0, 0.5, 1.0] {
        for s in [2, 0, -2] {
            let r = ramanujan_b_alpha::<Mp>(&q.powi(s), alpha, qp)?;
            worst_r = worst_r.max(r.rel_residual);
        }
    }
    let theta = |big_k| -> String {
        match heat_kernel::<Mp>(0, big_k, 0.0, qp) {
            Ok(h) => match h.theta {
                Some(t) => format!("{t:.3e}"),
                None => format!("undefined ({})", h.principal_error.unwrap_or_default()),
            },
            Err(e) => format!("error ({e})"),
        }
    };
    let th4 = heat_kernel::<Mp>(0, 4, 0.0, qp)?.theta;
    let th12 = heat_kernel::<Mp>(0, 12, 0.0, qp)?.theta;
    let theta_ok = matches!((th4, th12), (Some(a), Some(b)) if b.abs() < a.abs());
    let stated = Part {
        residual: worst.max(worst_r),
        ok: worst <= 1e-8 && worst_r <= 1e-8 && theta_ok,
        detail: format!(
            "Weber max {worst:.3e}; Ramanujan max {worst_r:.3e}; Theta(K=4) {}, Theta(K=12) {}",
            theta(4),
            theta(12)
        ),
    };
    let corrected = Part::tol(worst_c, 1e-8, format!("alpha in {{0, 1}}: max {worst_c:.3e}"));
    Ok((stated, corrected))
}

fn classical_limit() -> Result<Part> {
    let mut errs = Vec::new();
    for q in [0.9, 0.99, 0.999] {
        let qp = make_q_param(q, DEFAULT_PROD_TOL)?;
        let c = q_cos(&1.0f64, &qp).value;
        errs.push((c - 1f64.cos()).abs());
    }
    let ok = errs.windows(2).all(|w| w[1] < w[0]);
    Ok(Part {
        residual: errs[2],
        ok,
        detail: format!(
            "|cos(1;q^2) - cos 1| = {}{}",
            fmt_list(&errs),
            if ok { "" } else { " not decreasing" }
        ),
    })
}
