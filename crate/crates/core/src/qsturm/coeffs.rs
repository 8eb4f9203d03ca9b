use serde::Serialize;

use super::basis::{lambda_value, TrigBasis};
use super::boundary::Problem;
use super::potential::Potential;
use super::solver::Solution;
use crate::error::{QError, Result};
use crate::num::Real;
use crate::qcore::QParam;
use crate::qspecial::{lattice_values, q_cos, q_sin, LatticeFn};

pub const DEFAULT_FIT_TOL: f64 = 1e-6;
/// Largest accepted condition number of the scaled normal matrix.
const MAX_FIT_CONDITION: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CoeffMethod {
    Integral,
    Fitted,
}

/// Which formulas `coeffs_integral` evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum IntegralForm {
    /// The displays as printed.
    Printed,
    /// `mu = u(0) - int y2(qy) p u`, `nu = (D_q u(0) + int y1(qy) p u) / lambda`,
    /// read off the Volterra form beyond the support of `p`.
    Corrected,
}

/// Coefficients of `u ~ mu cos(lambda x) + nu q^{-1/2} sin(q^{1/2} lambda x)`.
/// A solution of (E1) fills `mu, nu`; one of (E2) fills `mu1, nu1`.
#[derive(Debug, Clone)]
pub struct AsymCoeffs<R: Real = f64> {
    pub mu: Option<R>,
    pub nu: Option<R>,
    pub mu1: Option<R>,
    pub nu1: Option<R>,
    pub big_k: i64,
    pub lambda: f64,
    pub method: CoeffMethod,
    pub form: Option<IntegralForm>,
    pub fit_residual: Option<f64>,
}

impl<R: Real> AsymCoeffs<R> {
    fn new(problem: Problem, c: R, s: R, sol: &Solution<R>, method: CoeffMethod) -> Self {
        let (mu, nu, mu1, nu1) = match problem {
            Problem::E1 => (Some(c), Some(s), None, None),
            Problem::E2 => (None, None, Some(c), Some(s)),
        };
        AsymCoeffs {
            mu,
            nu,
            mu1,
            nu1,
            big_k: sol.big_k,
            lambda: sol.lambda,
            method,
            form: None,
            fit_residual: None,
        }
    }

    /// The pair for whichever problem was solved.
    pub fn pair(&self) -> (&R, &R) {
        match (&self.mu, &self.nu, &self.mu1, &self.nu1) {
            (Some(a), Some(b), _, _) => (a, b),
            (_, _, Some(a), Some(b)) => (a, b),
            _ => unreachable!("constructed with one pair filled"),
        }
    }
}

/// `(1-q) sum_k q^k f_k` over the stored grid. The summand must have died
/// out at the large-x edge, otherwise the integral is reported divergent.
fn grid_integral<R: Real>(vals: impl Iterator<Item = (i64, R)>, qp: &QParam, k_min: i64) -> Result<R> {
    let q = qp.q_as::<R>();
    let omq = R::one() - &q;
    let mut sum = R::zero();
    let mut edge = R::zero();
    let mut peak = R::zero();
    for (k, v) in vals {
        let t = omq.clone() * q.powi(k) * v;
        if k <= k_min + 2 {
            edge = edge.max_r(t.abs());
        }
        peak = peak.max_r(t.abs());
        sum = sum + t;
    }
    if !edge.is_zero() && edge > peak * R::from_f64(1e-12) {
        return Err(QError::Divergence(
            "integrand has not decayed at the large-x end of the grid".into(),
        ));
    }
    Ok(sum)
}

/// Jackson integrals over the grid for the coefficients of the large-x form.
pub fn coeffs_integral<R: Real>(
    sol: &Solution<R>,
    p: &Potential<R>,
    form: IntegralForm,
) -> Result<AsymCoeffs<R>> {
    let g = sol.u.grid();
    let qp = g.qp();
    let q = qp.q_as::<R>();
    let h = q.sqrt();
    let lam: R = lambda_value(sol.big_k, qp);
    let big_k = sol.big_k;
    let (lo, hi) = (g.k_min(), g.k_max());
    let pu = |k: i64| p.at(k).clone() * sol.u.at(k);

    let (c, s) = match form {
        IntegralForm::Corrected => {
            let b = TrigBasis::<R>::for_grid(big_k, g)?;
            let (a0, b0) = sol.bc.initial_data::<R>(qp);
            let i2 = grid_integral(g.ks().map(|k| (k, b.y2(k + 1).clone() * pu(k))), qp, lo)?;
            let i1 = grid_integral(g.ks().map(|k| (k, b.y1(k + 1).clone() * pu(k))), qp, lo)?;
            (a0 - i2, (b0 + i1) / &lam)
        }
        IntegralForm::Printed => {
            // sin(q^{3/2} lambda y) and cos(q lambda y)
            let sy = lattice_values::<R>(LatticeFn::Sin, 1.5 - big_k as f64, lo, hi, qp)?;
            let cy = lattice_values::<R>(LatticeFn::Cos, 1.0 - big_k as f64, lo, hi, qp)?;
            let is = grid_integral(g.ks().map(|k| (k, sy[(k - lo) as usize].clone() * pu(k))), qp, lo)?;
            let ic = grid_integral(g.ks().map(|k| (k, cy[(k - lo) as usize].clone() * pu(k))), qp, lo)?;
            let al = R::from_f64(sol.bc.alpha_bc);
            let sin_qa = q_sin(&(q.clone() * &al), qp).value;
            let cos_qa = q_cos(&(q.clone() * &al), qp).value;
            match sol.bc.problem {
                Problem::E1 => (
                    sin_qa / &q - is / &lam,
                    cos_qa / &lam + h.clone() / &lam * ic,
                ),
                Problem::E2 => {
                    let cos_ha = q_cos(&(h.clone() * &al), qp).value;
                    let sin_h3a = q_sin(&(h.clone() * &q * &al), qp).value;
                    (
                        h.clone() * cos_ha - is / &lam,
                        -(h.clone() * cos_qa / &lam) - h / &lam * sin_h3a * ic,
                    )
                }
            }
        }
    };
    let mut out = AsymCoeffs::new(sol.bc.problem, c, s, sol, CoeffMethod::Integral);
    out.form = Some(form);
    Ok(out)
}

/// A window of `len` points ending two points outside the support of `p`
/// (at the large-x end of the grid when `p` is zero).
pub fn default_window<R: Real>(p: &Potential<R>, len: i64) -> Result<(i64, i64)> {
    let g = p.grid();
    let hi = match p.support_start() {
        Some(s) => s - 2,
        None => g.k_min() + len - 1,
    };
    let lo = hi - len + 1;
    if len < 8 || lo < g.k_min() {
        return Err(QError::Domain(format!(
            "no room for a {len}-point window beyond the support of p"
        )));
    }
    Ok((lo, hi))
}

/// Least-squares projection of the solution on
/// `cos(lambda x)` and `q^{-1/2} sin(q^{1/2} lambda x)` over `window`.
pub fn coeffs_fitted<R: Real>(sol: &Solution<R>, window: (i64, i64), fit_tol: f64) -> Result<AsymCoeffs<R>> {
    let g = sol.u.grid();
    let (lo, hi) = window;
    g.check(lo)?;
    g.check(hi)?;
    if hi - lo + 1 < 8 {
        return Err(QError::Domain("fit window needs at least 8 grid points".into()));
    }
    let qp = g.qp();
    let basis = TrigBasis::<R>::new(sol.big_k, lo, hi, qp)?;
    let lam: R = lambda_value(sol.big_k, qp);
    let c1: Vec<R> = (lo..=hi).map(|k| basis.y1(k).clone()).collect();
    let c2: Vec<R> = (lo..=hi).map(|k| basis.y2(k).clone() * &lam).collect();
    let y: Vec<R> = (lo..=hi).map(|k| sol.u.at(k).clone()).collect();

    let dot = |a: &[R], b: &[R]| a.iter().zip(b).fold(R::zero(), |s, (u, v)| s + u.clone() * v);
    let s1 = dot(&c1, &c1).sqrt();
    let s2 = dot(&c2, &c2).sqrt();
    if s1.is_zero() || s2.is_zero() {
        return Err(QError::Conditioning("a basis column vanishes on the window".into()));
    }
    let gmix = dot(&c1, &c2) / (s1.clone() * &s2);
    let gabs = gmix.abs().to_f64();
    let cond = (1.0 + gabs) / (1.0 - gabs);
    if !(cond <= MAX_FIT_CONDITION) {
        return Err(QError::Conditioning(format!(
            "basis nearly collinear on k in [{lo}, {hi}] (condition {cond:e})"
        )));
    }
    let r1 = dot(&c1, &y) / &s1;
    let r2 = dot(&c2, &y) / &s2;
    let det = R::one() - gmix.square();
    let z1 = (r1.clone() - gmix.clone() * &r2) / &det;
    let z2 = (r2 - gmix * r1) / &det;
    let mu = z1 / &s1;
    let nu = z2 / &s2;

    let mut res2 = R::zero();
    for i in 0..y.len() {
        let e = y[i].clone() - mu.clone() * &c1[i] - nu.clone() * &c2[i];
        res2 = res2 + e.square();
    }
    let ynorm = dot(&y, &y).sqrt();
    let fit_residual = if ynorm.is_zero() {
        res2.sqrt().to_f64()
    } else {
        (res2.sqrt() / ynorm).to_f64()
    };
    if !(fit_residual <= fit_tol) {
        return Err(QError::Conditioning(format!(
            "fit residual {fit_residual:e} exceeds {fit_tol:e} on k in [{lo}, {hi}]"
        )));
    }
    let mut out = AsymCoeffs::new(sol.bc.problem, mu, nu, sol, CoeffMethod::Fitted);
    out.fit_residual = Some(fit_residual);
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport {
    /// `mu nu1 - nu mu1`
    pub determinant: f64,
    /// `|mu nu1 - nu mu1| q^{1/2} lambda`, stated to equal one.
    pub normalized: f64,
    /// `|normalized - 1|`
    pub residual: f64,
    pub sign: i8,
}

/// Compare `|mu nu1 - nu mu1|` with `q^{-1/2} / lambda`.
pub fn main_identity_residual<R: Real>(
    e1: &AsymCoeffs<R>,
    e2: &AsymCoeffs<R>,
    qp: &QParam,
) -> Result<IdentityReport> {
    if e1.big_k != e2.big_k {
        return Err(QError::Domain(format!(
            "coefficients at different lambda (K = {} and {})",
            e1.big_k, e2.big_k
        )));
    }
    let (Some(mu), Some(nu)) = (&e1.mu, &e1.nu) else {
        return Err(QError::Domain("first argument must come from problem E1".into()));
    };
    let (Some(mu1), Some(nu1)) = (&e2.mu1, &e2.nu1) else {
        return Err(QError::Domain("second argument must come from problem E2".into()));
    };
    let det = mu.clone() * nu1 - nu.clone() * mu1;
    let lam: R = lambda_value(e1.big_k, qp);
    let norm = det.abs() * qp.q_as::<R>().sqrt() * lam;
    Ok(IdentityReport {
        determinant: det.to_f64(),
        normalized: norm.to_f64(),
        residual: (norm - R::one()).abs().to_f64(),
        sign: if det.is_negative() { -1 } else { 1 },
    })
}
