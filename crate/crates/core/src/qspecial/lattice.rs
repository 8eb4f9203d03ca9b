//! Evaluation on geometric lattices `t_n = q^{delta + n}` through the
//! three-term recurrences the functions satisfy.
//!
//! For a structural base (`1 - q = q^m`) and an integer lattice, cos, sin
//! and j_alpha are the solutions that decay super-exponentially as `t`
//! grows, so they are computed by Miller's method: a backward sweep started far out,
//! normalized against series values at small `t`. On any other lattice the
//! values grow and forward recurrence from two series seeds is stable.

use serde::Serialize;

use super::series::{j_alpha, q_cos, q_pow_2alpha, q_sin};
use crate::error::{QError, Result};
use crate::num::Real;
use crate::qcore::{grid_exponent, GridFunction, QGrid, QParam};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum TrigKind {
    Cos,
    Sin,
}

/// A function with a lattice recurrence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LatticeFn {
    Cos,
    Sin,
    Bessel(f64),
}

impl From<TrigKind> for LatticeFn {
    fn from(k: TrigKind) -> Self {
        match k {
            TrigKind::Cos => LatticeFn::Cos,
            TrigKind::Sin => LatticeFn::Sin,
        }
    }
}

/// Integer-lattice tolerance for `delta`.
const INTEGER_TOL: f64 = 1e-9;
/// Overlap points used to normalize a backward sweep.
const OVERLAP: i64 = 6;
/// Rescaling threshold (log2) during sweeps.
const RESCALE_LOG2: f64 = 480.0;

struct Coeffs<R> {
    a: R,
    c: R,
    omq2: R,
    /// multiplies t^2 in the middle coefficient
    t2_scale: R,
    /// constant part of the middle coefficient
    b0: R,
}

impl LatticeFn {
    fn series<R: Real>(&self, t: &R, qp: &QParam) -> Result<R> {
        Ok(match *self {
            LatticeFn::Cos => q_cos(t, qp).value,
            LatticeFn::Sin => q_sin(t, qp).value,
            LatticeFn::Bessel(a) => j_alpha(t, a, qp)?.value,
        })
    }

    // A u_{n-1} + B_n u_n + C u_{n+1} = 0 with B_n = b0 + (1-q)^2 t_n^2 * t2_scale
    fn coeffs<R: Real>(&self, qp: &QParam) -> Result<Coeffs<R>> {
        let q = qp.q_as::<R>();
        let omq2 = (R::one() - &q).square();
        Ok(match *self {
            LatticeFn::Cos => Coeffs {
                a: q.clone(),
                c: R::one(),
                omq2,
                t2_scale: R::one() / &q,
                b0: -(R::one() + &q),
            },
            LatticeFn::Sin => Coeffs {
                a: q.clone(),
                c: R::one(),
                omq2,
                t2_scale: R::one() / q.square(),
                b0: -(R::one() + &q),
            },
            LatticeFn::Bessel(alpha) => {
                if !(alpha > -1.0) {
                    return Err(QError::Domain(format!("alpha = {alpha} must exceed -1")));
                }
                let q2a: R = q_pow_2alpha(alpha, qp);
                Coeffs {
                    a: R::one(),
                    c: q2a.clone(),
                    omq2,
                    t2_scale: R::one() / q.square(),
                    b0: -(R::one() + q2a),
                }
            }
        })
    }

    fn log2_growth(&self, log2_t: f64, qp: &QParam) -> f64 {
        // log2 of |B|^2/(A C): suppression of the unwanted solution per step
        let q = qp.q();
        let (a, c, s, b0) = match *self {
            LatticeFn::Cos => (q, 1.0, 1.0 / q, 1.0 + q),
            LatticeFn::Sin => (q, 1.0, 1.0 / (q * q), 1.0 + q),
            LatticeFn::Bessel(al) => {
                let q2a = q.powf(2.0 * al);
                (1.0, q2a, 1.0 / (q * q), 1.0 + q2a)
            }
        };
        let big = (2.0 * log2_t + ((1.0 - q) * (1.0 - q) * s).log2()).exp2();
        let b = (big - b0).abs().max(1e-300);
        (2.0 * b.log2() - (a * c).log2()).max(0.0)
    }
}

fn middle<R: Real>(c: &Coeffs<R>, t: &R) -> R {
    c.b0.clone() + c.omq2.clone() * t.square() * &c.t2_scale
}

/// Multiply by `2^e` in steps that stay inside the binary64 exponent range.
fn scale2<R: Real>(mut v: R, mut e: i64) -> R {
    let step = 500i64;
    let up = R::from_f64(2f64.powi(step as i32));
    let down = R::from_f64(2f64.powi(-step as i32));
    while e >= step {
        v = v * &up;
        e -= step;
    }
    while e <= -step {
        v = v * &down;
        e += step;
    }
    v * R::from_f64(2f64.powi(e as i32))
}

/// Split `delta` into an integer shift and a fractional offset in [0, 1).
fn normalize_offset(delta: f64) -> (i64, f64) {
    let r = delta.round();
    if (delta - r).abs() < INTEGER_TOL {
        (r as i64, 0.0)
    } else {
        let f = delta.floor();
        (f as i64, delta - f)
    }
}

/// Values `f(q^{delta+n})` for `n_lo <= n <= n_hi`.
pub fn lattice_values<R: Real>(
    fun: LatticeFn,
    delta: f64,
    n_lo: i64,
    n_hi: i64,
    qp: &QParam,
) -> Result<Vec<R>> {
    if n_lo > n_hi {
        return Err(QError::Domain(format!("empty lattice range [{n_lo}, {n_hi}]")));
    }
    let (shift, frac) = normalize_offset(delta);
    // only a structural base makes the integer lattice the decaying one
    let recessive = frac == 0.0 && qp.structural_m().is_some();
    let (lo, hi) = (n_lo + shift, n_hi + shift);
    let q = qp.q_as::<R>();
    let c0 = if recessive {
        R::one()
    } else {
        q.powf(&R::from_f64(frac))
    };
    let t_at = |n: i64| -> R { c0.clone() * q.powi(n) };
    // series for t <= q^-2
    let n_s = (-2.0 - frac).ceil() as i64;
    let mut out: Vec<R> = Vec::with_capacity((hi - lo + 1) as usize);
    let first_series = lo.max(n_s);
    let coeffs = fun.coeffs::<R>(qp)?;

    let mut outer: Vec<R> = Vec::new();
    if lo < n_s {
        outer = if recessive {
            miller(fun, &coeffs, &t_at, lo, n_s, qp)?
        } else {
            forward(fun, &coeffs, &t_at, lo, n_s, qp)?
        };
    }
    // outer covers lo..n_s-1 (only the part inside [lo, hi] is kept)
    for (i, v) in outer.into_iter().enumerate() {
        if lo + (i as i64) <= hi {
            out.push(v);
        }
    }
    for n in first_series..=hi {
        out.push(fun.series(&t_at(n), qp)?);
    }
    if let Some(i) = out.iter().position(|v| !v.is_finite()) {
        return Err(QError::Overflow(format!(
            "{fun:?} at t = q^{} leaves the binary64 range; use extended precision",
            lo as f64 + frac + i as f64
        )));
    }
    Ok(out)
}

/// Forward recurrence toward large t: values for n in [lo, n_s).
fn forward<R: Real>(
    fun: LatticeFn,
    c: &Coeffs<R>,
    t_at: &dyn Fn(i64) -> R,
    lo: i64,
    n_s: i64,
    qp: &QParam,
) -> Result<Vec<R>> {
    let mut u_next = fun.series(&t_at(n_s + 1), qp)?;
    let mut u = fun.series(&t_at(n_s), qp)?;
    let mut out = vec![R::zero(); (n_s - lo) as usize];
    for n in (lo + 1..=n_s).rev() {
        let b = middle(c, &t_at(n));
        let prev = -(b * &u + c.c.clone() * &u_next) / &c.a;
        out[(n - 1 - lo) as usize] = prev.clone();
        u_next = u;
        u = prev;
        if !u.is_finite() {
            break;
        }
    }
    Ok(out)
}

/// Backward (Miller) sweep: values for n in [lo, n_s).
fn miller<R: Real>(
    fun: LatticeFn,
    c: &Coeffs<R>,
    t_at: &dyn Fn(i64) -> R,
    lo: i64,
    n_s: i64,
    qp: &QParam,
) -> Result<Vec<R>> {
    let target = R::precision_bits() as f64 + 48.0;
    let log2_q = qp.q().log2();
    let mut start = lo;
    let mut acc = 0.0;
    while acc < target || lo - start < 3 {
        start -= 1;
        acc += fun.log2_growth(start as f64 * log2_q, qp);
        if lo - start > 1_000_000 {
            return Err(QError::Evaluation(
                "backward recurrence start could not be placed".into(),
            ));
        }
    }
    let end = n_s + OVERLAP - 1;
    let len = (end - start + 1) as usize;
    let mut vals: Vec<R> = Vec::with_capacity(len);
    let mut exps: Vec<i64> = Vec::with_capacity(len);
    vals.push(R::zero());
    vals.push(R::one());
    exps.push(0);
    exps.push(0);
    let mut cur = 0i64;
    for n in start + 1..end {
        let i = (n - start) as usize;
        let b = middle(c, &t_at(n));
        let next = -(c.a.clone() * &vals[i - 1] + b * &vals[i]) / &c.c;
        vals.push(next);
        exps.push(cur);
        let l = vals[i + 1].log2_abs();
        if l > RESCALE_LOG2 {
            let s = RESCALE_LOG2 as i64;
            cur += s;
            for j in [i, i + 1] {
                vals[j] = scale2(vals[j].clone(), -s);
                exps[j] = cur;
            }
        }
    }
    // fit the sweep to series values on the overlap
    let e_ref = exps[len - 1];
    let mut num = R::zero();
    let mut den = R::zero();
    let mut pairs = Vec::new();
    for n in n_s..=end {
        let i = (n - start) as usize;
        let w = scale2(vals[i].clone(), exps[i] - e_ref);
        let s = fun.series(&t_at(n), qp)?;
        num = num + s.clone() * &w;
        den = den + w.square();
        pairs.push((s, w));
    }
    if den.is_zero() {
        return Err(QError::Evaluation("backward sweep vanished on the overlap".into()));
    }
    let scale = num / den;
    let mut worst = 0.0f64;
    let mut size = R::zero();
    for (s, w) in &pairs {
        worst = worst.max((scale.clone() * w - s).abs().to_f64());
        size = size.max_r(s.abs());
    }
    let rel = worst / size.to_f64();
    let allowed = (R::unit_roundoff() * 1e6).max(1e-300).max(if R::is_extended() {
        0.0
    } else {
        1e-9
    });
    if !(rel <= allowed) {
        return Err(QError::Evaluation(format!(
            "backward sweep disagrees with the series on the overlap (relative {rel:e})"
        )));
    }
    let mut out = Vec::with_capacity((n_s - lo) as usize);
    for n in lo..n_s {
        let i = (n - start) as usize;
        out.push(scale.clone() * scale2(vals[i].clone(), exps[i] - e_ref));
    }
    Ok(out)
}

/// `f(q^{scale_exp} x)` at every grid point.
pub fn scaled_on_grid<R: Real>(
    fun: LatticeFn,
    scale_exp: f64,
    grid: &QGrid,
) -> Result<GridFunction<R>> {
    let vals = lattice_values(fun, scale_exp, grid.k_min(), grid.k_max(), grid.qp())?;
    GridFunction::new(*grid, vals)
}

/// `log_q lambda` for a grid point `lambda = q^{-K}`, returned as `K`.
pub fn lambda_exponent(lambda: f64, qp: &QParam) -> Result<i64> {
    if !(lambda > 0.0) {
        return Err(QError::Domain(format!("lambda = {lambda} must be positive")));
    }
    Ok(-grid_exponent(lambda, qp.q())?)
}

/// `cos(lambda x; q^2)` or `sin(lambda x; q^2)` on the grid, `lambda = q^{-K}`.
pub fn grid_eval_trig<R: Real>(
    kind: TrigKind,
    lambda: f64,
    grid: &QGrid,
) -> Result<GridFunction<R>> {
    let big_k = lambda_exponent(lambda, grid.qp())?;
    scaled_on_grid(kind.into(), -(big_k as f64), grid)
}

/// `j_alpha(lambda x; q^2)` on the grid, `lambda = q^{-K}`.
pub fn j_alpha_grid<R: Real>(alpha: f64, lambda: f64, grid: &QGrid) -> Result<GridFunction<R>> {
    let big_k = lambda_exponent(lambda, grid.qp())?;
    scaled_on_grid(LatticeFn::Bessel(alpha), -(big_k as f64), grid)
}

/// Single value `f(q^{exp})` through the lattice machinery.
pub fn lattice_point<R: Real>(fun: LatticeFn, exp: f64, qp: &QParam) -> Result<R> {
    let (shift, frac) = normalize_offset(exp);
    Ok(lattice_values::<R>(fun, frac, shift, shift, qp)?.remove(0))
}
