use serde::Serialize;

use super::basis::lambda_value;
use super::potential::Potential;
use super::solver::Solution;
use crate::error::{QError, Result};
use crate::num::Real;
use crate::qcore::{q_pochhammer, GridFunction, Len, QParam};

/// Weight `g` in the hypothesis `f(x) <= C + int_0^x f g d_q t`.
#[derive(Debug, Clone, Copy)]
pub enum Weight<'a, R: Real> {
    Constant(f64),
    Grid(&'a GridFunction<R>),
}

#[derive(Debug, Clone, Serialize)]
pub struct GronwallPoint {
    pub k: i64,
    pub f: f64,
    /// `C + int_0^x f g`
    pub hypothesis_rhs: f64,
    pub hypothesis_ok: bool,
    /// `None` where the product (or the e-series) has left its domain.
    pub bound: Option<f64>,
    /// `(bound - f) / bound`
    pub margin: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GronwallReport {
    pub points: Vec<GronwallPoint>,
    /// Largest-x point of the contiguous range, starting at the small end,
    /// on which the hypothesis holds and the bound is defined.
    pub valid_from: Option<i64>,
    /// First point (scanning outward) where the hypothesis fails.
    pub hypothesis_violation: Option<i64>,
    /// The conclusion holds at every point of the valid range.
    pub pass: bool,
}

const SLACK: f64 = 1e-12;

/// Check `f <= C / prod_j [1 - (1-q) q^j x g(q^j x)]` (or `C e(M(1-q)x; q^2)`
/// for constant `g = M`) wherever the hypothesis holds.
pub fn gronwall_certify<R: Real>(f: &GridFunction<R>, c: f64, g: Weight<'_, R>) -> Result<GronwallReport> {
    let grid = f.grid();
    let qp = grid.qp();
    if f.iter().any(|(_, v)| v.is_negative()) {
        return Err(QError::Domain("f must be non-negative".into()));
    }
    let q = qp.q_as::<R>();
    let omq = R::one() - &q;
    let c_r = R::from_f64(c);
    let weight = |k: i64| -> R {
        match g {
            Weight::Constant(m) => R::from_f64(m),
            Weight::Grid(w) => w.at(k).clone(),
        }
    };
    if let Weight::Grid(w) = g {
        if w.grid() != grid {
            return Err(QError::Domain("weight lives on a different grid".into()));
        }
        if w.iter().any(|(_, v)| v.is_negative()) {
            return Err(QError::Domain("weight must be non-negative".into()));
        }
    }

    let mut points = Vec::with_capacity(grid.len());
    let mut integral = R::zero();
    let mut prod = R::one();
    let mut prod_ok = true;
    let mut x: R = grid.x(grid.k_max());
    for k in grid.ks().rev() {
        let wx = omq.clone() * &x;
        let gk = weight(k);
        integral = integral + wx.clone() * f.at(k) * &gk;
        let rhs = c_r.clone() + &integral;
        let fk = f.at(k);
        let hyp = fk.clone() <= rhs.clone() * R::from_f64(1.0 + SLACK);
        let bound = match g {
            Weight::Grid(_) => {
                let fac = R::one() - wx * &gk;
                if fac <= R::zero() {
                    prod_ok = false;
                }
                prod = prod * fac;
                prod_ok.then(|| c_r.clone() / &prod)
            }
            Weight::Constant(m) => e_series_bound(c, m, &x, qp),
        };
        let margin = bound
            .as_ref()
            .map(|b| ((b.clone() - fk) / b).to_f64());
        points.push(GronwallPoint {
            k,
            f: fk.to_f64(),
            hypothesis_rhs: rhs.to_f64(),
            hypothesis_ok: hyp,
            bound: bound.map(|b| b.to_f64()),
            margin,
        });
        x = x / &q;
    }
    points.reverse();

    let mut valid_from = None;
    let mut hypothesis_violation = None;
    let mut pass = true;
    for pt in points.iter().rev() {
        if !pt.hypothesis_ok {
            hypothesis_violation = Some(pt.k);
            break;
        }
        match pt.margin {
            Some(m) => {
                if m < -SLACK {
                    pass = false;
                }
                valid_from = Some(pt.k);
            }
            None => break,
        }
    }
    Ok(GronwallReport {
        points,
        valid_from,
        hypothesis_violation,
        pass: pass && valid_from.is_some(),
    })
}

/// `C e(M (1-q) x; q^2)`, `None` at or beyond the first pole.
fn e_series_bound<R: Real>(c: f64, m: f64, x: &R, qp: &QParam) -> Option<R> {
    let q = qp.q_as::<R>();
    let q2 = q.square();
    let z = (R::one() - &q2) * R::from_f64(m) * (R::one() - &q) * x;
    if z >= R::one() {
        return None;
    }
    Some(R::from_f64(c) / q_pochhammer(&z, &q2, Len::Infinite, qp.prod_tol()))
}

/// `(A, C)` of the a-priori bound `|phi| <= A e(C (1-q) x; q^2)`:
/// `A = |u(0)| B + |D_q u(0)| B / (q lambda)` and `C = 2 ||p||_inf B / lambda`
/// with `B = 1/(q;q^2)_inf^2`.
pub fn growth_constants(sol: &Solution<impl Real>, p_norm_inf: f64, qp: &QParam) -> (f64, f64) {
    let (a, b) = sol.bc.initial_data::<f64>(qp);
    let bnd = qp.cos_sin_bound();
    let lam: f64 = lambda_value(sol.big_k, qp);
    let a_l = a.abs() * bnd + b.abs() * bnd / (qp.q() * lam);
    let c_l = 2.0 * p_norm_inf * bnd / lam;
    (a_l, c_l)
}

/// Certify `|phi|` from the solver against its a-priori bound.
pub fn gronwall_certify_solution<R: Real>(sol: &Solution<R>, p: &Potential<R>) -> Result<GronwallReport> {
    let qp = sol.u.grid().qp();
    let (a_l, c_l) = growth_constants(sol, p.norm_inf(), qp);
    let f = sol.u.map(|_, v| v.abs())?;
    gronwall_certify(&f, a_l, Weight::Constant(c_l))
}
