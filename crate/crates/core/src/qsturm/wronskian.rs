use super::potential::Potential;
use crate::error::{QError, Result};
use crate::num::{rel_diff, Real};
use crate::qcore::{q_derivative, q_derivative2, GridFunction, QParam};
use crate::qspecial::{lattice_point, LatticeFn};

/// Both forms of the q-Wronskian at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct WronskianValue<R: Real = f64> {
    /// `u1(qx) D_q u2(x) - u2(qx) D_q u1(x)`
    pub derivative_form: R,
    /// `(u1(qx) u2(x) - u1(x) u2(qx)) / ((1-q) x)`
    pub difference_form: R,
    /// relative gap between the two
    pub discrepancy: f64,
}

pub fn q_wronskian<R: Real>(
    u1: &GridFunction<R>,
    u2: &GridFunction<R>,
    k: i64,
) -> Result<WronskianValue<R>> {
    let g = u1.grid();
    g.check(k + 1)?;
    u2.grid().check(k + 1)?;
    let d1 = u1.at(k + 1).clone() * &q_derivative(u2, k)? - u2.at(k + 1).clone() * &q_derivative(u1, k)?;
    let q = g.qp().q_as::<R>();
    let x: R = g.x(k);
    let d2 = (u1.at(k + 1).clone() * u2.at(k) - u1.at(k).clone() * u2.at(k + 1))
        / ((R::one() - q) * x);
    let discrepancy = rel_diff(&d1, &d2, 1e-300);
    Ok(WronskianValue {
        derivative_form: d1,
        difference_form: d2,
        discrepancy,
    })
}

/// `W0 / prod_{j>=0} [1 + (1-q) q^j x a(q^j x)]` at `x = q^k`, the product
/// running over the grid below `x` and stopped once factors are within
/// `prod_tol` of one.
pub fn wronskian_product_formula<R: Real>(a: &GridFunction<R>, w0: &R, k: i64) -> Result<R> {
    let g = a.grid();
    g.check(k)?;
    let q = g.qp().q_as::<R>();
    let omq = R::one() - &q;
    let tol = g.qp().prod_tol();
    let sup = a.sup_norm();
    let mut prod = R::one();
    let mut x: R = g.x(k);
    for kk in k..=g.k_max() {
        // the remaining factors multiply to within about x sup|a| of one
        if (x.clone() * &sup).to_f64() < tol {
            break;
        }
        let f = R::one() + omq.clone() * &x * a.at(kk);
        if f.is_zero() || f.abs().to_f64() < 1e-300 {
            return Err(QError::Singularity {
                j: kk - k,
                factor: f.to_f64(),
            });
        }
        prod = prod * &f;
        x = x * &q;
    }
    Ok(w0.clone() / prod)
}

/// `[U, V]_q(x) = U(qx) D_q V(x) - V(qx) D_q U(x)`.
pub fn q_bracket<R: Real>(u: &GridFunction<R>, v: &GridFunction<R>, k: i64) -> Result<R> {
    u.grid().check(k + 1)?;
    v.grid().check(k + 1)?;
    Ok(u.at(k + 1).clone() * &q_derivative(v, k)? - v.at(k + 1).clone() * &q_derivative(u, k)?)
}

/// The bracket at every point where it is defined.
pub fn bracket_on_grid<R: Real>(u: &GridFunction<R>, v: &GridFunction<R>) -> Result<GridFunction<R>> {
    let g = u.grid();
    let sub = g.sub(g.k_min(), g.k_max() - 1)?;
    GridFunction::try_from_fn(sub, |k, _| q_bracket(u, v, k))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GreenForm {
    /// `D_q[U,V] = V(qx) L U - U(qx) L V`
    Printed,
    /// `D_q[U,V] = U(qx) L V - V(qx) L U + (1-q) x p(x) [U,V]`
    Exact,
}

/// `D_q[U,V](x)` minus the right-hand side of the chosen Green formula,
/// with `L = D_q^2 - p`. Needs `k .. k+2` on the grid.
pub fn green_residual<R: Real>(
    u: &GridFunction<R>,
    v: &GridFunction<R>,
    p: &Potential<R>,
    k: i64,
    form: GreenForm,
) -> Result<R> {
    let g = u.grid();
    g.check(k + 2)?;
    let q = g.qp().q_as::<R>();
    let x: R = g.x(k);
    let b0 = q_bracket(u, v, k)?;
    let b1 = q_bracket(u, v, k + 1)?;
    let d_bracket = (b0.clone() - b1) / ((R::one() - &q) * &x);
    let lu = q_derivative2(u, k)? - p.at(k).clone() * u.at(k);
    let lv = q_derivative2(v, k)? - p.at(k).clone() * v.at(k);
    let rhs = match form {
        GreenForm::Printed => v.at(k + 1).clone() * lu - u.at(k + 1).clone() * lv,
        GreenForm::Exact => {
            u.at(k + 1).clone() * lv - v.at(k + 1).clone() * lu
                + (R::one() - q) * x * p.at(k) * b0
        }
    };
    Ok(d_bracket - rhs)
}

/// `G(x, y) = cos(q lambda y) sin(q^{1/2} lambda x) - sin(q^{3/2} lambda y) cos(lambda x)`
/// at `x = q^kx`, `y = q^ky`, `lambda = q^{-K}`.
pub fn green_kernel<R: Real>(kx: i64, ky: i64, big_k: i64, qp: &QParam) -> Result<R> {
    let kx = (kx - big_k) as f64;
    let ky = (ky - big_k) as f64;
    let c_y: R = lattice_point(LatticeFn::Cos, ky + 1.0, qp)?;
    let s_x: R = lattice_point(LatticeFn::Sin, kx + 0.5, qp)?;
    let s_y: R = lattice_point(LatticeFn::Sin, ky + 1.5, qp)?;
    let c_x: R = lattice_point(LatticeFn::Cos, kx, qp)?;
    Ok(c_y * s_x - s_y * c_x)
}
