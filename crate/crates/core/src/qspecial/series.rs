//! Power series for q-cos, q-sin, the normalized q-Bessel function and the
//! Hahn-Exton function.
//!
//! In extended precision the series is summed with enough guard bits to
//! absorb its cancellation, so the result is accurate to the working
//! precision. In binary64 the cancellation is only reported.

use serde::Serialize;

use crate::error::{QError, Result};
use crate::num::{Mp, PrecisionGuard, Real};
use crate::qcore::{q_gamma_base, QParam};

/// Condition number above which a binary64 series value is not trusted.
pub const UNTRUSTED_CONDITION: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Series,
    GridRecurrence,
    ExtendedPrecision,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Series => "series",
            Method::GridRecurrence => "grid-recurrence",
            Method::ExtendedPrecision => "extended-precision",
        })
    }
}

/// A value with its cancellation witness.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport<R: Real = f64> {
    pub value: R,
    pub n_terms: usize,
    /// Largest absolute summand.
    pub max_term: R,
    pub method: Method,
}

impl<R: Real> EvalReport<R> {
    /// `max_term / |value|`, computed in log space.
    pub fn condition(&self) -> f64 {
        let lv = self.value.log2_abs();
        let lm = self.max_term.log2_abs();
        if lm == f64::NEG_INFINITY {
            return 1.0;
        }
        (lm - lv).exp2().max(1.0)
    }

    pub fn trusted(&self) -> bool {
        R::is_extended()
            || self.method != Method::Series
            || self.condition() <= UNTRUSTED_CONDITION
    }
}

/// Cosine and sine coefficients of index `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrigCoeff {
    pub n: usize,
    pub b_n: f64,
    pub c_n: f64,
}

/// The first `count` cosine/sine coefficients.
pub fn trig_coeffs(count: usize, qp: &QParam) -> Vec<TrigCoeff> {
    let q = qp.q();
    let mut out = Vec::with_capacity(count);
    let (mut b, mut c) = (1.0f64, 1.0f64);
    for n in 0..count {
        out.push(TrigCoeff { n, b_n: b, c_n: c });
        b *= cos_ratio(n, &q);
        c *= sin_ratio(n, &q);
    }
    out
}

// b_{n+1}/b_n and c_{n+1}/c_n
fn cos_ratio<R: Real>(n: usize, q: &R) -> R {
    let q2n = q.powi(2 * n as i64);
    let omq = R::one() - q;
    let d = (R::one() - q2n.clone() * q) * (R::one() - q2n.clone() * q * q);
    q2n * omq.square() / d
}

fn sin_ratio<R: Real>(n: usize, q: &R) -> R {
    let q2n = q.powi(2 * n as i64);
    let omq = R::one() - q;
    let q2 = q.square();
    let d = (R::one() - q2n.clone() * &q2) * (R::one() - q2n.clone() * &q2 * q);
    q2n * omq.square() / d
}

const MAX_TERMS: usize = 100_000;

struct Summed<R> {
    value: R,
    n_terms: usize,
    max_term: R,
}

/// `sum_n s_n y^n` with `s_0 = lead`, `s_{n+1} = s_n * ratio(n)`, summed in
/// the current precision.
fn sum_in_place<R: Real>(y: &R, lead: R, ratio: &dyn Fn(usize) -> R) -> Summed<R> {
    let log2_rel = if R::is_extended() {
        -(R::precision_bits() as f64) - 10.0
    } else {
        1e-18f64.log2()
    };
    let mut term = lead;
    let mut sum = term.clone();
    let mut max_term = term.abs();
    let mut small = 0;
    let mut prev_mag = term.log2_abs();
    let mut n = 0;
    while n < MAX_TERMS {
        term = term * ratio(n) * y;
        n += 1;
        sum = sum + &term;
        let mag = term.log2_abs();
        if term.abs() > max_term {
            max_term = term.abs();
        }
        let tiny = mag == f64::NEG_INFINITY || mag < sum.log2_abs() + log2_rel;
        if tiny && mag <= prev_mag {
            small += 1;
            if small >= 3 {
                break;
            }
        } else {
            small = 0;
        }
        prev_mag = mag;
    }
    Summed {
        value: sum,
        n_terms: n + 1,
        max_term,
    }
}

/// `log2` of the largest summand, scanned in binary64 logarithms.
fn max_term_log2(log2_y: f64, log2_lead: f64, ratio_log2: &dyn Fn(usize) -> f64) -> f64 {
    let mut l = log2_lead;
    let mut best = l;
    for n in 0..MAX_TERMS {
        let r = ratio_log2(n);
        if !r.is_finite() {
            break;
        }
        l += r + log2_y;
        best = best.max(l);
        if r + log2_y < 0.0 && l < best - 200.0 {
            break;
        }
    }
    best
}

/// Sum the series; extended types get guard bits covering the cancellation.
fn sum_series<R: Real>(
    y: &R,
    lead: R,
    ratio: &dyn Fn(usize) -> R,
    ratio_log2: &dyn Fn(usize) -> f64,
) -> Summed<R> {
    if !R::is_extended() {
        return sum_in_place(y, lead, ratio);
    }
    let peak = max_term_log2(y.log2_abs(), lead.log2_abs(), ratio_log2);
    let mut guard = (peak - lead.log2_abs()).max(0.0).ceil() as u32 + 24;
    for _ in 0..4 {
        let s = R::with_guard_bits(guard, || sum_in_place(y, lead.clone(), ratio));
        let lost = s.max_term.log2_abs() - s.value.log2_abs();
        if !lost.is_finite() || (lost.ceil() as u32) + 16 <= guard {
            return Summed {
                value: s.value.rounded(),
                n_terms: s.n_terms,
                max_term: s.max_term.rounded(),
            };
        }
        guard = lost.ceil() as u32 + 32;
    }
    let s = R::with_guard_bits(guard, || sum_in_place(y, lead.clone(), ratio));
    Summed {
        value: s.value.rounded(),
        n_terms: s.n_terms,
        max_term: s.max_term.rounded(),
    }
}

fn method_for<R: Real>() -> Method {
    if R::is_extended() {
        Method::ExtendedPrecision
    } else {
        Method::Series
    }
}

fn report<R: Real>(s: Summed<R>) -> EvalReport<R> {
    EvalReport {
        value: s.value,
        n_terms: s.n_terms,
        max_term: s.max_term,
        method: method_for::<R>(),
    }
}

/// `cos(x; q^2) = sum (-1)^n b_n x^{2n}`.
pub fn q_cos<R: Real>(x: &R, qp: &QParam) -> EvalReport<R> {
    let q = qp.q_as::<R>();
    let qf = qp.q();
    let y = -x.square();
    let s = sum_series(
        &y,
        R::one(),
        &|n| cos_ratio(n, &q),
        &|n| cos_ratio(n, &qf).log2(),
    );
    report(s)
}

/// `sin(x; q^2) = sum (-1)^n c_n x^{2n+1}`.
pub fn q_sin<R: Real>(x: &R, qp: &QParam) -> EvalReport<R> {
    if x.is_zero() {
        return EvalReport {
            value: R::zero(),
            n_terms: 1,
            max_term: R::zero(),
            method: method_for::<R>(),
        };
    }
    let q = qp.q_as::<R>();
    let qf = qp.q();
    let y = -x.square();
    let s = sum_series(
        &y,
        x.clone(),
        &|n| sin_ratio(n, &q),
        &|n| sin_ratio(n, &qf).log2(),
    );
    report(s)
}

fn bessel_ratio<R: Real>(n: usize, q: &R, q2a2: &R) -> R {
    let q2n = q.powi(2 * n as i64);
    let omq = R::one() - q;
    let d = (R::one() - q2n.clone() * q * q) * (R::one() - q2n.clone() * q2a2);
    q2n * omq.square() / d
}

/// `q^{2 alpha + 2}` with a check on `alpha > -1`.
fn bessel_shift<R: Real>(alpha: f64, qp: &QParam) -> Result<R> {
    if !(alpha > -1.0) {
        return Err(QError::Domain(format!("alpha = {alpha} must exceed -1")));
    }
    let q = qp.q_as::<R>();
    Ok(q_pow_2alpha::<R>(alpha, qp) * q.square())
}

/// `q^{2 alpha}` with `alpha` taken exactly from its binary64 value.
pub fn q_pow_2alpha<R: Real>(alpha: f64, qp: &QParam) -> R {
    let two_alpha = R::from_f64(alpha) * R::from_f64(2.0);
    qp.q_as::<R>().powf(&two_alpha)
}

/// Normalized q-Bessel function
/// `j_alpha(x; q^2) = sum_n (-1)^n q^{n(n-1)} (1-q)^{2n} x^{2n} / ((q^2;q^2)_n (q^{2alpha+2};q^2)_n)`.
///
/// `j_alpha(0) = 1`, `j_{-1/2} = cos(.; q^2)` and `j_{1/2}(x) = sin(x; q^2)/x`.
pub fn j_alpha<R: Real>(x: &R, alpha: f64, qp: &QParam) -> Result<EvalReport<R>> {
    let q = qp.q_as::<R>();
    let qf = qp.q();
    let s: R = bessel_shift(alpha, qp)?;
    let sf: f64 = bessel_shift(alpha, qp)?;
    let y = -x.square();
    let out = sum_series(
        &y,
        R::one(),
        &|n| bessel_ratio(n, &q, &s),
        &|n| bessel_ratio(n, &qf, &sf).log2(),
    );
    Ok(report(out))
}

/// Hahn-Exton function in base `b`:
/// `J_alpha(z; b) = w^alpha sum_k (-1)^k b^{k(k-1)/2} b^k w^{2k} / (Gamma_b(k+1) Gamma_b(alpha+k+1))`
/// with `w = z/(1-b)`.
pub fn hahn_exton_j_base<R: Real>(z: &R, alpha: f64, base: &R, tol: f64) -> Result<R> {
    if !(alpha > -1.0) {
        return Err(QError::Domain(format!("alpha = {alpha} must exceed -1")));
    }
    if z.is_negative() {
        return Err(QError::Domain("Hahn-Exton argument must be non-negative".into()));
    }
    let omb = R::one() - base;
    let w = z.clone() / &omb;
    if w.is_zero() {
        return Ok(if alpha == 0.0 { R::one() } else { R::zero() });
    }
    let bf = base.to_f64();
    let a = R::from_f64(alpha);
    // ratio of consecutive coefficients: -b^{k+1} / ([k+1]_b [alpha+k+1]_b)
    let ratio = |k: usize| -> R {
        let bk1 = base.powi(k as i64 + 1);
        let n1 = (R::one() - &bk1) / &omb;
        let n2 = (R::one() - base.powf(&(a.clone() + R::from_i64(k as i64 + 1)))) / &omb;
        -(bk1 / (n1 * n2))
    };
    let ratio_log2 = |k: usize| -> f64 {
        let bk1 = bf.powi(k as i32 + 1);
        let n1 = (1.0 - bk1) / (1.0 - bf);
        let n2 = (1.0 - bf.powf(alpha + k as f64 + 1.0)) / (1.0 - bf);
        (bk1 / (n1 * n2)).log2()
    };
    let lead = R::one() / q_gamma_base(alpha + 1.0, base, tol)?;
    let s = sum_series(&w.square(), lead, &ratio, &ratio_log2);
    Ok(w.powf(&a) * s.value)
}

/// Hahn-Exton function `J_alpha(z; q)` in the base of `qp`.
#[allow(non_snake_case)]
pub fn hahn_exton_J<R: Real>(z: &R, alpha: f64, qp: &QParam) -> Result<R> {
    hahn_exton_j_base(z, alpha, &qp.q_as::<R>(), qp.prod_tol())
}

/// Condition above which the `*_auto` evaluators switch to extended
/// precision, so their binary64 results keep about 13 significant digits.
pub const ROUTE_CONDITION: f64 = 1e3;

/// Redo a badly conditioned binary64 evaluation in extended precision.
fn reroute(
    plain: EvalReport<f64>,
    eval: impl FnOnce() -> Result<EvalReport<Mp>>,
) -> Result<EvalReport<f64>> {
    if plain.condition() <= ROUTE_CONDITION {
        return Ok(plain);
    }
    let bits = 64 + plain.condition().log2().ceil().max(0.0) as u32;
    let _g = PrecisionGuard::new(bits.max(128));
    let ext = eval()?;
    Ok(EvalReport {
        value: ext.value.to_f64(),
        n_terms: ext.n_terms,
        max_term: ext.max_term.to_f64(),
        method: Method::ExtendedPrecision,
    })
}

pub fn q_cos_auto(x: f64, qp: &QParam) -> Result<EvalReport<f64>> {
    reroute(q_cos(&x, qp), || Ok(q_cos(&Mp::from_f64(x), qp)))
}

pub fn q_sin_auto(x: f64, qp: &QParam) -> Result<EvalReport<f64>> {
    reroute(q_sin(&x, qp), || Ok(q_sin(&Mp::from_f64(x), qp)))
}

pub fn j_alpha_auto(x: f64, alpha: f64, qp: &QParam) -> Result<EvalReport<f64>> {
    reroute(j_alpha(&x, alpha, qp)?, || j_alpha(&Mp::from_f64(x), alpha, qp))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::make_q_param;

    fn qp() -> QParam {
        make_q_param(0.5, 1e-16).unwrap()
    }

    #[test]
    fn coefficients() {
        let c = trig_coeffs(4, &qp());
        assert_eq!(c[0].b_n, 1.0);
        assert_eq!(c[0].c_n, 1.0);
        assert!((c[1].b_n - 2.0 / 3.0).abs() < 1e-16);
        assert!(c.iter().all(|t| t.b_n > 0.0 && t.c_n > 0.0));
    }

    #[test]
    fn cos_at_one() {
        let r = q_cos(&1.0, &qp());
        // 40-digit oracle
        assert!((r.value - 0.383_298_013_916_536_3).abs() < 1e-15);
        assert_eq!(q_cos(&0.0, &qp()).value, 1.0);
        assert_eq!(q_sin(&0.0, &qp()).value, 0.0);
    }

    #[test]
    fn sin_small_argument() {
        let x = 1e-6;
        let r = q_sin(&x, &qp());
        assert!((r.value / x - 1.0).abs() < 1e-11);
    }

    #[test]
    fn derivative_relation_at_q_cubed() {
        let qp = qp();
        let q = qp.q();
        let x = q.powi(3);
        let d = (q_sin(&x, &qp).value - q_sin(&(q * x), &qp).value) / ((1.0 - q) * x);
        assert!((d - q_cos(&x, &qp).value).abs() < 1e-12);
    }

    #[test]
    fn extended_absorbs_cancellation() {
        let qp = qp();
        let _g = PrecisionGuard::new(128);
        let x = Mp::from_f64(2f64.powi(15));
        let r = q_cos(&x, &qp);
        // 60-digit oracle for cos(2^15; 1/4)
        assert!((r.value.to_f64() / -4.421_8e-68 - 1.0).abs() < 1e-4);
        let f = q_cos(&2f64.powi(15), &qp);
        assert!(!f.trusted());
        let a = q_cos_auto(2f64.powi(15), &qp).unwrap();
        assert_eq!(a.method, Method::ExtendedPrecision);
        assert!((a.value - r.value.to_f64()).abs() <= 1e-14 * a.value.abs());
    }

    #[test]
    fn bessel_reductions() {
        let qp = qp();
        for k in -5..=10 {
            let x = 0.5f64.powi(k);
            let c = q_cos_auto(x, &qp).unwrap().value;
            let s = q_sin_auto(x, &qp).unwrap().value / x;
            let jm = j_alpha_auto(x, -0.5, &qp).unwrap().value;
            let jp = j_alpha_auto(x, 0.5, &qp).unwrap().value;
            assert!((jm - c).abs() <= 1e-12 * c.abs().max(1e-300), "k={k}");
            assert!((jp - s).abs() <= 1e-12 * s.abs().max(1e-300), "k={k}");
        }
        assert_eq!(j_alpha(&0.0, 1.3, &qp).unwrap().value, 1.0);
        assert!(j_alpha(&1.0, -1.0, &qp).is_err());
    }

    #[test]
    fn hahn_exton_basics() {
        let qp = qp();
        assert_eq!(hahn_exton_J(&0.0, 0.5, &qp).unwrap(), 0.0);
        assert!(hahn_exton_J(&0.3, 0.5, &qp).unwrap() > 0.0);
    }
}
