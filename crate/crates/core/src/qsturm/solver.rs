use super::basis::{lambda_value, TrigBasis};
use super::boundary::BoundaryParams;
use super::potential::Potential;
use crate::error::{QError, Result};
use crate::num::Real;
use crate::qcore::{GridFunction, QGrid};
use crate::qspecial::lambda_exponent;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    /// Smallest admissible `|1 - (1-q) x K(x,x) p(x)|`.
    pub pivot_tol: f64,
    /// Bound on the relative residual of the difference equation.
    pub residual_tol: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            pivot_tol: 1e-8,
            residual_tol: 1e-9,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Solution<R: Real = f64> {
    pub u: GridFunction<R>,
    pub lambda: f64,
    pub big_k: i64,
    pub bc: BoundaryParams,
    /// Largest residual of `D_q^2 u - p u + lambda^2 u(qx)`, relative to the
    /// size of its terms.
    pub ode_residual_max: f64,
}

/// Kernel of the Volterra form: `K(x, y) = y1(qy) y2(x) - y2(qy) y1(x)`
/// at `x = q^kx`, `y = q^ky`.
pub fn volterra_kernel<R: Real>(basis: &TrigBasis<R>, kx: i64, ky: i64) -> R {
    basis.y1(ky + 1).clone() * basis.y2(kx) - basis.y2(ky + 1).clone() * basis.y1(kx)
}

fn check_grids<R: Real>(p: &Potential<R>, grid: &QGrid) -> Result<()> {
    let pg = p.grid();
    if pg.k_min() != grid.k_min() || pg.k_max() != grid.k_max() || pg.qp().q() != grid.qp().q() {
        return Err(QError::Domain("potential is sampled on a different grid".into()));
    }
    Ok(())
}

/// Solve `u = a y1 + b y2 + int_0^x K(x,y) p(y) u(y) d_q y` by forward
/// substitution from the smallest grid point outward. The contribution of
/// `y` below the grid is dropped.
pub fn solve<R: Real>(
    p: &Potential<R>,
    lambda: f64,
    bc: BoundaryParams,
    grid: &QGrid,
    opts: &SolveOptions,
) -> Result<Solution<R>> {
    check_grids(p, grid)?;
    let qp = grid.qp();
    let big_k = lambda_exponent(lambda, qp)?;
    let basis = TrigBasis::<R>::for_grid(big_k, grid)?;
    let (a, b) = bc.initial_data::<R>(qp);
    let q = qp.q_as::<R>();
    let omq = R::one() - &q;

    let n = grid.len();
    let mut u = vec![R::zero(); n];
    let mut s1 = R::zero();
    let mut s2 = R::zero();
    let mut x: R = grid.x(grid.k_max());
    for k in grid.ks().rev() {
        let i = (k - grid.k_min()) as usize;
        let h = a.clone() * basis.y1(k) + b.clone() * basis.y2(k);
        let rhs = h + basis.y2(k).clone() * &s1 - basis.y1(k).clone() * &s2;
        let wp = omq.clone() * &x * p.at(k);
        let v = if wp.is_zero() {
            rhs
        } else {
            let pivot = R::one() - wp.clone() * volterra_kernel(&basis, k, k);
            let pf = pivot.to_f64();
            if !(pf.abs() >= opts.pivot_tol) {
                return Err(QError::NearSingularPivot {
                    k,
                    lambda: format!("q^-{big_k}"),
                    pivot: pf,
                });
            }
            rhs / pivot
        };
        if !wp.is_zero() {
            s1 = s1 + wp.clone() * basis.y1(k + 1) * &v;
            s2 = s2 + wp * basis.y2(k + 1) * &v;
        }
        if !v.is_finite() {
            return Err(QError::Overflow(format!(
                "solution leaves the binary64 range at k = {k}; use extended precision"
            )));
        }
        u[i] = v;
        x = x / &q;
    }
    let u = GridFunction::new(*grid, u)?;
    let ode_residual_max = ode_residual(&u, p, big_k)?;
    if !(ode_residual_max <= opts.residual_tol) {
        return Err(QError::Evaluation(format!(
            "difference-equation residual {ode_residual_max:e} exceeds {:e}",
            opts.residual_tol
        )));
    }
    Ok(Solution {
        u,
        lambda,
        big_k,
        bc,
        ode_residual_max,
    })
}

/// `|D_q^2 u - p u + lambda^2 u(qx)|` relative to the sum of the magnitudes
/// of its terms, at every `k` with `k + 2` on the grid.
pub fn ode_residuals<R: Real>(u: &GridFunction<R>, p: &Potential<R>, big_k: i64) -> Result<Vec<(i64, f64)>> {
    let g = u.grid();
    let qp = g.qp();
    let q = qp.q_as::<R>();
    let lam2 = lambda_value::<R>(big_k, qp).square();
    let denom_c = q.clone() * (R::one() - &q).square();
    let mut out = Vec::with_capacity(g.len());
    for k in g.k_min()..=g.k_max() - 2 {
        let x2 = g.x::<R>(k).square();
        let d = denom_c.clone() * &x2;
        let (u0, u1, u2) = (u.at(k), u.at(k + 1), u.at(k + 2));
        let t_d2 = (q.clone() * u0 - (R::one() + &q) * u1 + u2) / &d;
        let t_p = p.at(k).clone() * u0;
        let t_l = lam2.clone() * u1;
        let res = (t_d2 - &t_p + &t_l).abs();
        let scale = (q.clone() * u0.abs() + (R::one() + &q) * u1.abs() + u2.abs()) / &d
            + t_p.abs()
            + t_l.abs();
        let r = if scale.is_zero() { 0.0 } else { (res / scale).to_f64() };
        out.push((k, r));
    }
    Ok(out)
}

fn ode_residual<R: Real>(u: &GridFunction<R>, p: &Potential<R>, big_k: i64) -> Result<f64> {
    Ok(ode_residuals(u, p, big_k)?.into_iter().fold(0.0, |a, (_, r)| a.max(r)))
}

#[derive(Debug, Clone)]
pub struct PicardResult<R: Real = f64> {
    pub u: GridFunction<R>,
    pub sweeps: usize,
    pub last_change: f64,
    pub converged: bool,
}

/// Fixed-point iteration of the same Volterra map, started from the
/// homogeneous solution. Stops once successive sweeps differ by less than
/// `tol` in relative sup-norm.
pub fn picard<R: Real>(
    p: &Potential<R>,
    lambda: f64,
    bc: BoundaryParams,
    grid: &QGrid,
    tol: f64,
    max_sweeps: usize,
) -> Result<PicardResult<R>> {
    check_grids(p, grid)?;
    let qp = grid.qp();
    let big_k = lambda_exponent(lambda, qp)?;
    let basis = TrigBasis::<R>::for_grid(big_k, grid)?;
    let (a, b) = bc.initial_data::<R>(qp);
    let q = qp.q_as::<R>();
    let omq = R::one() - &q;
    let h = GridFunction::from_fn(*grid, |k, _| a.clone() * basis.y1(k) + b.clone() * basis.y2(k))?;
    let w: Vec<R> = grid
        .ks()
        .map(|k| omq.clone() * grid.x::<R>(k) * p.at(k))
        .collect();

    let mut cur = h.clone();
    let mut last_change = f64::INFINITY;
    for sweep in 1..=max_sweeps {
        let mut next = vec![R::zero(); grid.len()];
        let (mut s1, mut s2) = (R::zero(), R::zero());
        for k in grid.ks().rev() {
            let i = (k - grid.k_min()) as usize;
            if !w[i].is_zero() {
                s1 = s1 + w[i].clone() * basis.y1(k + 1) * cur.at(k);
                s2 = s2 + w[i].clone() * basis.y2(k + 1) * cur.at(k);
            }
            next[i] = h.at(k).clone() + basis.y2(k).clone() * &s1 - basis.y1(k).clone() * &s2;
        }
        let next = GridFunction::new(*grid, next)?;
        last_change = next.rel_sup_diff(&cur)?;
        cur = next;
        if last_change < tol {
            return Ok(PicardResult {
                u: cur,
                sweeps: sweep,
                last_change,
                converged: true,
            });
        }
    }
    Ok(PicardResult {
        u: cur,
        sweeps: max_sweeps,
        last_change,
        converged: false,
    })
}
