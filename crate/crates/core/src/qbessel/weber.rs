use serde::Serialize;

use super::remainder::remainder_constants;
use crate::error::{QError, Result};
use crate::num::Real;
use crate::qcore::{q_pochhammer, try_jackson_0_to_inf, Len, QParam, DEFAULT_N_NEG_MAX};
use crate::qspecial::{lattice_values, q_exp_e_sq, q_gaussian, q_pow_2alpha, LatticeFn};

/// Absolute tail tolerance for the bilateral sums here.
const TAIL_TOL: f64 = 1e-30;
/// Large-x extent of tabulated integrand factors.
const TABLE_LO: i64 = -80;

/// `q^{k(2a+1)}`.
fn weight<R: Real>(s: &R, k: i64) -> R {
    s.powi(k)
}

/// `A_alpha = int_0^inf x^{2a+1} / (-(1-q^2) x^2; q^2)_inf d_q x`.
pub fn weber_a_alpha<R: Real>(alpha: f64, qp: &QParam) -> Result<R> {
    if !(alpha > -1.0) {
        return Err(QError::Domain(format!("alpha = {alpha} must exceed -1")));
    }
    let s = q_pow_2alpha::<R>(alpha, qp) * qp.q_as::<R>();
    try_jackson_0_to_inf(
        |k, x: &R| Ok(weight(&s, k) * q_gaussian(x, qp)),
        qp,
        DEFAULT_N_NEG_MAX,
        TAIL_TOL,
    )
}

/// Values of a lattice function on `[TABLE_LO, hi]`, looked up by `k`.
struct Table<R> {
    hi: i64,
    vals: Vec<R>,
}

impl<R: Real> Table<R> {
    fn new(fun: LatticeFn, delta: f64, hi: i64, qp: &QParam) -> Result<Self> {
        Ok(Table {
            hi,
            vals: lattice_values(fun, delta, TABLE_LO, hi, qp)?,
        })
    }

    fn get(&self, k: i64) -> Result<&R> {
        if k < TABLE_LO || k > self.hi {
            return Err(QError::Divergence(format!(
                "bilateral sum needs k = {k}, beyond the tabulated [{TABLE_LO}, {}]",
                self.hi
            )));
        }
        Ok(&self.vals[(k - TABLE_LO) as usize])
    }
}

/// Small-x extent needed for `x^{2a+2}` to fall below the tail tolerance.
fn table_hi(alpha: f64, qp: &QParam) -> i64 {
    let n = TAIL_TOL.ln() / ((2.0 * alpha + 2.0) * qp.q().ln());
    n.ceil() as i64 + 16
}

/// `int_0^inf e(-a^2 x^2; q^2) f(lambda x) x^{2a+1} d_q x` for a lattice
/// function `f` evaluated at `q^{delta} lambda x`.
fn gaussian_integral<R: Real>(
    a2: &R,
    fun: LatticeFn,
    delta: f64,
    big_k: i64,
    alpha: f64,
    qp: &QParam,
) -> Result<R> {
    let hi = table_hi(alpha, qp);
    let tab = Table::<R>::new(fun, delta - big_k as f64, hi, qp)?;
    let s = q_pow_2alpha::<R>(alpha, qp) * qp.q_as::<R>();
    try_jackson_0_to_inf(
        |k, x: &R| {
            let v = tab.get(k)?;
            if v.is_zero() {
                return Ok(R::zero());
            }
            let g = q_exp_e_sq(&(-(a2.clone() * x.square())), qp)?;
            Ok(g * v * weight(&s, k))
        },
        qp,
        DEFAULT_N_NEG_MAX,
        TAIL_TOL,
    )
}

/// Weber integral with general `a^2`, and its two closed forms.
#[derive(Debug, Clone, Serialize)]
pub struct WeberValue {
    pub lhs: f64,
    /// `A a^{-2a-2} e(-lambda^2 / (a^2 (1+q)^2))`
    pub printed: f64,
    /// `A a^{-2a-2} e(-q^{-2a-2} lambda^2 / (a^2 (1+q)^2))`
    pub corrected: f64,
    pub printed_residual: f64,
    pub corrected_residual: f64,
}

/// `int_0^inf e(-a^2 x^2; q^2) j_alpha(lambda x; q^2) x^{2a+1} d_q x`.
pub fn weber_integral<R: Real>(a2: &R, big_k: i64, alpha: f64, qp: &QParam) -> Result<WeberValue> {
    let lhs = gaussian_integral(a2, LatticeFn::Bessel(alpha), 0.0, big_k, alpha, qp)?;
    let amp: R = weber_a_alpha(alpha, qp)?;
    let q = qp.q_as::<R>();
    let lam2 = q.powi(-2 * big_k);
    let opq2 = (R::one() + &q).square();
    let pow = a2.powf(&R::from_f64(-(alpha + 1.0)));
    let arg = lam2 / (a2.clone() * &opq2);
    let printed = amp.clone() * &pow * q_exp_e_sq(&(-arg.clone()), qp)?;
    let shift = R::one() / (q_pow_2alpha::<R>(alpha, qp) * q.square());
    let corrected = amp * pow * q_exp_e_sq(&(-(arg * shift)), qp)?;
    let rel = |v: &R| ((lhs.clone() - v) / v).abs().to_f64();
    Ok(WeberValue {
        lhs: lhs.to_f64(),
        printed: printed.to_f64(),
        corrected: corrected.to_f64(),
        printed_residual: rel(&printed),
        corrected_residual: rel(&corrected),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct HeatKernelRecord {
    pub alpha: f64,
    pub t: f64,
    pub lambda: f64,
    #[serde(rename = "A_alpha")]
    pub a_alpha: f64,
    /// `A t^{-(a+1)} e(-lambda^2 / ((1+q)^2 t))`
    pub e_value: f64,
    pub lhs_integral: f64,
    /// `|lhs - E| / |E|`
    pub weber_residual: f64,
    /// Closed form with the `q^{-2a-1}` argument shift and `q^{a+1}` factor.
    pub corrected_value: f64,
    pub corrected_residual: f64,
    /// `int e(-t x^2/q) cos(q^{-a-1/2} lambda x) x^{2a+1}`, or why it failed.
    pub principal_integral: Option<f64>,
    pub principal_error: Option<String>,
    /// `E - principal`
    pub theta: Option<f64>,
    /// `lhs - principal`, the remainder-integral route.
    pub remainder_integral: Option<f64>,
    /// `C_q B_alpha(t) / lambda^2`
    pub remainder_bound: Option<f64>,
}

/// Heat kernel at `t = q^s`, `lambda = q^{-K}`.
pub fn heat_kernel<R: Real>(s: i64, big_k: i64, alpha: f64, qp: &QParam) -> Result<HeatKernelRecord> {
    let q = qp.q_as::<R>();
    let t = q.powi(s);
    let a2 = t.clone() / &q;
    let w = weber_integral::<R>(&a2, big_k, alpha, qp)?;
    let amp: R = weber_a_alpha(alpha, qp)?;
    let lam2 = q.powi(-2 * big_k);
    let opq2 = (R::one() + &q).square();
    let e_value = amp.clone()
        * t.powf(&R::from_f64(-(alpha + 1.0)))
        * q_exp_e_sq(&(-(lam2 / (opq2 * &t))), qp)?;
    let e_f = e_value.to_f64();
    let weber_residual = ((w.lhs - e_f) / e_f).abs();

    let principal = gaussian_integral::<R>(&a2, LatticeFn::Cos, -alpha - 0.5, big_k, alpha, qp);
    let (principal_integral, principal_error) = match principal {
        Ok(v) => (Some(v.to_f64()), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let remainder_bound = ramanujan_b_alpha::<R>(&t, alpha, qp).ok().map(|r| {
        let (c_q, _) = remainder_constants(alpha, qp);
        c_q * r.closed_form / qp.q().powi(-2 * big_k as i32)
    });
    Ok(HeatKernelRecord {
        alpha,
        t: t.to_f64(),
        lambda: qp.q().powi(-big_k as i32),
        a_alpha: amp.to_f64(),
        e_value: e_f,
        lhs_integral: w.lhs,
        weber_residual,
        corrected_value: w.corrected,
        corrected_residual: w.corrected_residual,
        principal_integral,
        principal_error,
        theta: principal_integral.map(|p| e_f - p),
        remainder_integral: principal_integral.map(|p| w.lhs - p),
        remainder_bound,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct RamanujanReport {
    /// `(Q, az, Q/(az); Q) / ((a; Q) (Q/a, z; Q))`, `Q = q^2`, `z = q^{2a+1}`.
    pub closed_form: f64,
    /// `sum_k z^k / (a Q^k; Q)_inf`
    pub direct_sum: f64,
    /// The displayed product quotient.
    pub printed_form: f64,
    pub rel_residual: f64,
}

fn pole_checked<R: Real>(v: R, what: &str) -> Result<R> {
    if v.is_zero() || v.abs().to_f64() < 1e-300 {
        return Err(QError::Pole(format!("{what} vanishes")));
    }
    Ok(v)
}

/// `B_alpha(t) = sum_{k in Z} q^{2 beta k} / (a q^{2k}; q^2)_inf` with
/// `beta = alpha + 1/2`, `a = -q^{-1}(1-q^2) t`, by the bilateral summation
/// formula and directly.
pub fn ramanujan_b_alpha<R: Real>(t: &R, alpha: f64, qp: &QParam) -> Result<RamanujanReport> {
    if !(alpha > -0.5) {
        return Err(QError::Domain(format!(
            "the bilateral sum converges only for alpha > -1/2, got {alpha}"
        )));
    }
    let tol = qp.prod_tol();
    let q = qp.q_as::<R>();
    let big_q = q.square();
    let one = R::one();
    let omq2 = one.clone() - &big_q;
    let a = -(omq2.clone() * t / &q);
    let z = q_pow_2alpha::<R>(alpha, qp) * &q;
    let az = a.clone() * &z;
    let pinf = |x: &R| q_pochhammer(x, &big_q, Len::Infinite, tol);

    let num = pinf(&big_q) * pinf(&az) * pinf(&(big_q.clone() / &az));
    let den = pole_checked(pinf(&a), "(a; q^2)")?
        * pole_checked(pinf(&(big_q.clone() / &a)), "(q^2/a; q^2)")?
        * pole_checked(pinf(&z), "(q^{2a+1}; q^2)")?;
    let closed = num / den;

    let direct = {
        let mut sum = R::zero();
        let mut k = 0i64;
        loop {
            let term = z.powi(k) / pole_checked(pinf(&(a.clone() * big_q.powi(k))), "(a q^{2k}; q^2)")?;
            sum = sum + &term;
            if (term.clone() / &sum).abs().to_f64() < 1e-20 && k > 8 {
                break;
            }
            k += 1;
            if k > 100_000 {
                return Err(QError::Divergence("bilateral sum (k >= 0) did not settle".into()));
            }
        }
        let mut k = -1i64;
        loop {
            let term = z.powi(k) / pole_checked(pinf(&(a.clone() * big_q.powi(k))), "(a q^{2k}; q^2)")?;
            sum = sum + &term;
            if (term.clone() / &sum).abs().to_f64() < 1e-20 && k < -8 {
                break;
            }
            k -= 1;
            if k < -10_000 {
                return Err(QError::Divergence("bilateral sum (k < 0) did not settle".into()));
            }
        }
        sum
    };

    // (-q^{2a} t (1-q^2), q^{2-a} / (t (1-q^2)), q^2) / (q^{2a+1}, -t(1-q^2)/q, -q^3/(t(1-q^2)))
    let q2a = q_pow_2alpha::<R>(alpha, qp);
    let q_ma = q.powf(&R::from_f64(-alpha));
    let tm = t.clone() * &omq2;
    let pnum = pinf(&(-(q2a.clone() * &tm)))
        * pinf(&(q.square() * q_ma / &tm))
        * pinf(&big_q);
    let pden = pinf(&(q2a * &q)) * pinf(&(-(tm.clone() / &q))) * pinf(&(-(q.powi(3) / &tm)));
    let printed = pnum / pole_checked(pden, "printed denominator")?;

    let rel = ((closed.clone() - &direct) / &direct).abs().to_f64();
    Ok(RamanujanReport {
        closed_form: closed.to_f64(),
        direct_sum: direct.to_f64(),
        printed_form: printed.to_f64(),
        rel_residual: rel,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{Mp, PrecisionGuard};
    use crate::qcore::make_q_param;

    #[test]
    fn a_alpha_positive_and_oracle() {
        let qp = make_q_param(0.5, 1e-16).unwrap();
        for a in [-0.5, 0.0, 1.0] {
            assert!(weber_a_alpha::<f64>(a, &qp).unwrap() > 0.0);
        }
        let _g = PrecisionGuard::new(160);
        let hi: Mp = weber_a_alpha(0.0, &qp).unwrap();
        let lo: f64 = weber_a_alpha(0.0, &qp).unwrap();
        assert!(((lo - hi.to_f64()) / lo).abs() < 1e-12);
        // independent 30-digit bilateral sum
        assert!((hi.to_f64() - 2.0 / 3.0).abs() < 1e-15, "{hi}");
    }

    #[test]
    fn weber_corrected_form_integer_order() {
        let qp = make_q_param(0.5, 1e-16).unwrap();
        for alpha in [0.0, 1.0] {
            for big_k in [1, 4] {
                let w = weber_integral::<f64>(&2.0, big_k, alpha, &qp).unwrap();
                assert!(w.corrected_residual < 1e-10, "{alpha} {big_k} {w:?}");
                assert!(w.printed_residual > 1e-2);
            }
        }
    }

    #[test]
    fn small_lambda_limit() {
        let qp = make_q_param(0.5, 1e-16).unwrap();
        let w = weber_integral::<f64>(&1.0, -6, 0.0, &qp).unwrap();
        let amp: f64 = weber_a_alpha(0.0, &qp).unwrap();
        assert!((w.lhs - amp).abs() < 1e-3 * amp);
    }

    #[test]
    fn heat_kernel_record_is_consistent() {
        let qp = make_q_param(0.5, 1e-16).unwrap();
        let h = heat_kernel::<f64>(0, 3, 0.0, &qp).unwrap();
        let w = weber_integral::<f64>(&2.0, 3, 0.0, &qp).unwrap();
        assert_eq!(h.lhs_integral, w.lhs);
        assert!(h.corrected_residual < 1e-10);
        let h = heat_kernel::<f64>(0, 4, 0.5, &qp).unwrap();
        assert!(h.principal_integral.is_some(), "{:?}", h.principal_error);
    }

    #[test]
    fn ramanujan_sum() {
        let qp = make_q_param(0.5, 1e-16).unwrap();
        for (t, alpha) in [(1.0, 0.5), (0.25, 0.0), (4.0, 1.0)] {
            let r = ramanujan_b_alpha::<f64>(&t, alpha, &qp).unwrap();
            assert!(r.rel_residual < 1e-12, "{r:?}");
            assert!(r.direct_sum > 0.0);
        }
        assert!(ramanujan_b_alpha::<f64>(&1.0, -0.6, &qp).is_err());
    }
}
