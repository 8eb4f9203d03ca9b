use crate::error::Result;
use crate::num::Real;
use crate::qcore::{GridFunction, QGrid, QParam};
use crate::qspecial::{lattice_values, LatticeFn};

/// `lambda = q^{-K}` in the working precision.
pub fn lambda_value<R: Real>(big_k: i64, qp: &QParam) -> R {
    qp.q_as::<R>().powi(-big_k)
}

/// The unit-Wronskian pair for `D_q^2 u + lambda^2 u(qx) = 0`:
/// `y1 = cos(lambda x)`, `y2 = q^{-1/2} lambda^{-1} sin(q^{1/2} lambda x)`,
/// tabulated on `[k_lo, k_hi]`.
#[derive(Debug, Clone)]
pub struct TrigBasis<R: Real> {
    big_k: i64,
    k_lo: i64,
    y1: Vec<R>,
    y2: Vec<R>,
}

impl<R: Real> TrigBasis<R> {
    pub fn new(big_k: i64, k_lo: i64, k_hi: i64, qp: &QParam) -> Result<Self> {
        let y1 = lattice_values(LatticeFn::Cos, -(big_k as f64), k_lo, k_hi, qp)?;
        let s = lattice_values::<R>(LatticeFn::Sin, 0.5 - big_k as f64, k_lo, k_hi, qp)?;
        let q = qp.q_as::<R>();
        let scale = q.powi(big_k) / q.sqrt();
        let y2 = s.into_iter().map(|v| v * &scale).collect();
        Ok(TrigBasis { big_k, k_lo, y1, y2 })
    }

    /// Tabulated on the grid plus one point beyond its small end, which the
    /// kernel `y(qy)` needs.
    pub fn for_grid(big_k: i64, grid: &QGrid) -> Result<Self> {
        Self::new(big_k, grid.k_min(), grid.k_max() + 1, grid.qp())
    }

    pub fn big_k(&self) -> i64 {
        self.big_k
    }
    pub fn y1(&self, k: i64) -> &R {
        &self.y1[(k - self.k_lo) as usize]
    }
    pub fn y2(&self, k: i64) -> &R {
        &self.y2[(k - self.k_lo) as usize]
    }
}

/// `a0 cos(lambda x) + b0 q^{-1/2} lambda^{-1} sin(q^{1/2} lambda x)` on the grid.
pub fn homogeneous_solution<R: Real>(
    a0: &R,
    b0: &R,
    lambda: f64,
    grid: &QGrid,
) -> Result<GridFunction<R>> {
    let big_k = crate::qspecial::lambda_exponent(lambda, grid.qp())?;
    let b = TrigBasis::<R>::new(big_k, grid.k_min(), grid.k_max(), grid.qp())?;
    GridFunction::from_fn(*grid, |k, _| a0.clone() * b.y1(k) + b0.clone() * b.y2(k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::QError;
    use crate::num::{Mp, PrecisionGuard};
    use crate::qcore::{make_q_param, q_derivative, q_derivative2};
    use crate::qspecial::q_cos;

    fn grid() -> QGrid {
        QGrid::new(make_q_param(0.5, 1e-16).unwrap(), -8, 40).unwrap()
    }

    #[test]
    fn cos_samples() {
        let g = grid();
        let u: GridFunction = homogeneous_solution(&1.0, &0.0, 1.0, &g).unwrap();
        for k in [-2, 0, 3, 10] {
            let x = 0.5f64.powi(k as i32);
            let c = q_cos(&x, g.qp()).value;
            assert!((u.at(k) - c).abs() <= 1e-13 * c.abs().max(1.0), "k={k}");
        }
    }

    #[test]
    fn initial_conditions_recovered() {
        // a one-sided difference at x = q^39 cancels about 40 bits
        let _p = PrecisionGuard::new(128);
        let g = grid();
        let lam = 0.5f64.powi(-3);
        let (a, b) = (Mp::from_f64(0.3), Mp::from_f64(-1.7));
        let u: GridFunction<Mp> = homogeneous_solution(&a, &b, lam, &g).unwrap();
        assert!((u.at(40).to_f64() - 0.3).abs() < 1e-8);
        assert!((q_derivative(&u, 39).unwrap().to_f64() + 1.7).abs() < 1e-8);
    }

    #[test]
    fn ode_residual_small() {
        let g = grid();
        let q = 0.5f64;
        for big_k in [0, 2, 4] {
            let lam = q.powi(-big_k);
            let u: GridFunction = homogeneous_solution(&0.7, &0.4, lam, &g).unwrap();
            let sup = u.restrict(-2, 40).unwrap().sup_norm();
            for k in -2..=38 {
                let r = q_derivative2(&u, k).unwrap() + lam * lam * u.at(k + 1);
                let x = q.powi(k as i32);
                // second differences carry rounding of order eps |u| / x^2
                let floor = 1e-14 * sup / (x * x);
                assert!(r.abs() <= 1e-10 * lam * lam * sup + floor, "K={big_k} k={k} r={r}");
            }
        }
    }

    #[test]
    fn lambda_must_be_grid_point() {
        let g = grid();
        let r = homogeneous_solution::<f64>(&1.0, &0.0, -1.0, &g);
        assert!(matches!(r, Err(QError::Domain(_))));
        assert!(homogeneous_solution::<f64>(&1.0, &0.0, 3.0, &g).is_err());
    }
}
