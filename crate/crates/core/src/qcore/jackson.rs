//! Jackson integrals over the infinite grid, driven by a callback `f(k, q^k)`.
//!
//! The callback receives the grid exponent together with the point so that
//! grid-tabulated integrands can be looked up without a logarithm.

use super::grid::grid_exponent;
use super::param::QParam;
use crate::error::{QError, Result};
use crate::num::Real;

/// Terms summed before the tail test is allowed to stop a sum.
pub const MIN_TERMS: u64 = 8;
/// Default cap on large-x terms.
pub const DEFAULT_N_NEG_MAX: u64 = 400;
const MAX_INWARD_TERMS: u64 = 200_000;

fn checked<R: Real>(v: R, k: i64) -> Result<R> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(QError::Evaluation(format!("integrand is not finite at k = {k}")))
    }
}

/// `(1-q) sum_{n>=0} f(q^{k_a+n}) q^{k_a+n}`, stopped once a term is below
/// `tail_tol` after at least [`MIN_TERMS`] terms.
pub fn try_jackson_0_to_qk<R: Real>(
    mut f: impl FnMut(i64, &R) -> Result<R>,
    k_a: i64,
    qp: &QParam,
    tail_tol: f64,
) -> Result<R> {
    let q = qp.q_as::<R>();
    let omq = R::one() - &q;
    let log2_tol = tail_tol.log2();
    let mut x = q.powi(k_a);
    let mut sum = R::zero();
    for n in 0..MAX_INWARD_TERMS {
        let k = k_a + n as i64;
        let v = checked(f(k, &x)?, k)?;
        let term = omq.clone() * &x * v;
        let small = term.log2_abs() < log2_tol;
        sum = sum + term;
        if n + 1 >= MIN_TERMS && small {
            return Ok(sum);
        }
        x = x * &q;
    }
    Err(QError::Divergence(format!(
        "integral from 0 to q^{k_a} did not reach tail tolerance {tail_tol:e}"
    )))
}

pub fn jackson_0_to_qk<R: Real>(
    mut f: impl FnMut(i64, &R) -> R,
    k_a: i64,
    qp: &QParam,
    tail_tol: f64,
) -> Result<R> {
    try_jackson_0_to_qk(|k, x| Ok(f(k, x)), k_a, qp, tail_tol)
}

/// Jackson integral from 0 to the grid point `a`.
pub fn jackson_0_to_a<R: Real>(
    f: impl FnMut(i64, &R) -> R,
    a: f64,
    qp: &QParam,
    tail_tol: f64,
) -> Result<R> {
    let k_a = grid_exponent(a, qp.q())?;
    jackson_0_to_qk(f, k_a, qp, tail_tol)
}

/// Large-x half sum `(1-q) sum_{m>=1} f(q^{k0-m}) q^{k0-m}`.
fn outward<R: Real>(
    f: &mut impl FnMut(i64, &R) -> Result<R>,
    k0: i64,
    qp: &QParam,
    n_neg_max: u64,
    tail_tol: f64,
) -> Result<R> {
    let q = qp.q_as::<R>();
    let omq = R::one() - &q;
    let log2_tol = tail_tol.log2();
    let mut x = q.powi(k0 - 1);
    let mut sum = R::zero();
    let mut prev = [f64::NEG_INFINITY; 2];
    for m in 1..=n_neg_max {
        let k = k0 - m as i64;
        let v = checked(f(k, &x)?, k)?;
        let term = omq.clone() * &x * v;
        let mag = term.log2_abs();
        sum = sum + term;
        if m >= MIN_TERMS {
            if mag < log2_tol {
                return Ok(sum);
            }
            if mag >= prev[1] && prev[1] >= prev[0] && prev[0] > f64::NEG_INFINITY {
                return Err(QError::Divergence(format!(
                    "large-x terms are non-decreasing at k = {k} (|term| = 2^{mag:.1})"
                )));
            }
        }
        prev = [prev[1], mag];
        x = x / &q;
    }
    Err(QError::Divergence(format!(
        "large-x terms still above {tail_tol:e} after {n_neg_max} terms"
    )))
}

/// Bilateral sum `(1-q) sum_{n in Z} f(q^n) q^n`.
pub fn try_jackson_0_to_inf<R: Real>(
    mut f: impl FnMut(i64, &R) -> Result<R>,
    qp: &QParam,
    n_neg_max: u64,
    tail_tol: f64,
) -> Result<R> {
    let inner = try_jackson_0_to_qk(&mut f, 0, qp, tail_tol)?;
    let outer = outward(&mut f, 0, qp, n_neg_max, tail_tol)?;
    Ok(inner + outer)
}

pub fn jackson_0_to_inf<R: Real>(
    mut f: impl FnMut(i64, &R) -> R,
    qp: &QParam,
    n_neg_max: u64,
    tail_tol: f64,
) -> Result<R> {
    try_jackson_0_to_inf(|k, x| Ok(f(k, x)), qp, n_neg_max, tail_tol)
}

/// `(1-q) a sum_{n>=1} f(a q^{-n}) q^{-n}` for `a = q^{k_a}`.
pub fn try_jackson_qk_to_inf<R: Real>(
    mut f: impl FnMut(i64, &R) -> Result<R>,
    k_a: i64,
    qp: &QParam,
    tail_tol: f64,
) -> Result<R> {
    outward(&mut f, k_a, qp, DEFAULT_N_NEG_MAX, tail_tol)
}

/// Jackson integral from the grid point `a` to infinity.
pub fn jackson_a_to_inf<R: Real>(
    mut f: impl FnMut(i64, &R) -> R,
    a: f64,
    qp: &QParam,
    tail_tol: f64,
) -> Result<R> {
    let k_a = grid_exponent(a, qp.q())?;
    try_jackson_qk_to_inf(|k, x| Ok(f(k, x)), k_a, qp, tail_tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{make_q_param, q_pochhammer, Len};

    fn qp() -> QParam {
        make_q_param(0.5, 1e-16).unwrap()
    }

    fn gaussian(x: f64, q: f64) -> f64 {
        1.0 / q_pochhammer(&(-(1.0 - q * q) * x * x), &(q * q), Len::Infinite, 1e-17)
    }

    #[test]
    fn finite_range_examples() {
        let qp = qp();
        let v: f64 = jackson_0_to_a(|_, x| *x, 1.0, &qp, 1e-18).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-15);
        let one: f64 = jackson_0_to_a(|_, _| 1.0, 1.0, &qp, 1e-18).unwrap();
        assert!((one - 1.0).abs() < 1e-15);
        assert!(matches!(
            jackson_0_to_a(|_, x: &f64| *x, 0.3, &qp, 1e-18),
            Err(QError::Domain(_))
        ));
        assert!(matches!(
            jackson_0_to_a(|_, _| f64::NAN, 1.0, &qp, 1e-18),
            Err(QError::Evaluation(_))
        ));
    }

    #[test]
    fn antiderivatives() {
        let qp = qp();
        let q = qp.q();
        // D_q x^2 = (1+q) x
        let v: f64 = jackson_0_to_a(|_, x| (1.0 + q) * x, 0.25, &qp, 1e-20).unwrap();
        assert!((v - 0.0625).abs() < 1e-15);
        // D_q (-1/x) = 1/(q x^2), G(inf) - G(a) = 1/a
        let w: f64 = jackson_a_to_inf(|_, x| 1.0 / (q * x * x), 2.0, &qp, 1e-18).unwrap();
        assert!((w - 0.5).abs() < 1e-14);
    }

    #[test]
    fn upper_range_and_additivity() {
        let qp = qp();
        let v: f64 = jackson_a_to_inf(|_, x| 1.0 / (x * x), 1.0, &qp, 1e-18).unwrap();
        assert!((v - 0.5).abs() < 1e-15);
        let q = qp.q();
        let f = |_: i64, x: &f64| x * gaussian(*x, q);
        let a: f64 = jackson_0_to_a(f, 0.25, &qp, 1e-20).unwrap();
        let b: f64 = jackson_a_to_inf(f, 0.25, &qp, 1e-20).unwrap();
        let t: f64 = jackson_0_to_inf(f, &qp, 400, 1e-20).unwrap();
        assert!((a + b - t).abs() < 1e-14 * t);
    }

    #[test]
    fn indicator_tail_vanishes() {
        let qp = qp();
        let f = |k: i64, x: &f64| if k >= 0 { *x } else { 0.0 };
        let t: f64 = jackson_0_to_inf(f, &qp, 400, 1e-20).unwrap();
        let a: f64 = jackson_0_to_a(f, 1.0, &qp, 1e-20).unwrap();
        assert!((t - a).abs() < 1e-15);
    }

    #[test]
    fn scaling_identity() {
        let qp = qp();
        let q = qp.q();
        let base: f64 = jackson_0_to_inf(|_, x| gaussian(*x, q), &qp, 400, 1e-22).unwrap();
        for n in -3i32..=3 {
            let s: f64 =
                jackson_0_to_inf(|_, x| gaussian(q.powi(n) * x, q), &qp, 400, 1e-22).unwrap();
            assert!((s - q.powi(-n) * base).abs() < 1e-12 * s, "n={n}");
        }
    }

    #[test]
    fn growth_is_reported() {
        let qp = qp();
        let r = jackson_0_to_inf(|_, x: &f64| *x, &qp, 400, 1e-18);
        assert!(matches!(r, Err(QError::Divergence(_))));
        let slow = jackson_0_to_inf(|_, x: &f64| 1.0 / (1.0 + x), &qp, 20, 1e-300);
        assert!(matches!(slow, Err(QError::Divergence(_))));
    }
}
