use serde::{Deserialize, Serialize};

use crate::num::Real;
use crate::qcore::QParam;
use crate::qspecial::{q_cos, q_sin};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Problem {
    /// `u(0) = q^{-1} sin(q a)`, `D_q u(0) = cos(q a)`.
    E1,
    /// `u(0) = q^{1/2} cos(q^{1/2} a)`, `D_q u(0) = -sin(q^{3/2} a)`.
    E2,
}

/// Initial conditions parametrized by the boundary angle `alpha_bc`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryParams {
    pub alpha_bc: f64,
    pub problem: Problem,
}

impl BoundaryParams {
    pub fn new(alpha_bc: f64, problem: Problem) -> Self {
        BoundaryParams { alpha_bc, problem }
    }

    /// `(u(0), D_q u(0))`.
    pub fn initial_data<R: Real>(&self, qp: &QParam) -> (R, R) {
        let q = qp.q_as::<R>();
        let h = q.sqrt();
        let a = R::from_f64(self.alpha_bc);
        match self.problem {
            Problem::E1 => {
                let s = q_sin(&(q.clone() * &a), qp).value;
                let c = q_cos(&(q.clone() * &a), qp).value;
                (s / q, c)
            }
            Problem::E2 => {
                let c = q_cos(&(h.clone() * &a), qp).value;
                let s = q_sin(&(h.clone() * &q * &a), qp).value;
                (h * c, -s)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::make_q_param;

    #[test]
    fn zero_angle() {
        let qp = make_q_param(0.5, 1e-16).unwrap();
        let (a, b): (f64, f64) = BoundaryParams::new(0.0, Problem::E1).initial_data(&qp);
        assert_eq!((a, b), (0.0, 1.0));
        let (a, b): (f64, f64) = BoundaryParams::new(0.0, Problem::E2).initial_data(&qp);
        assert!((a - 0.5f64.sqrt()).abs() < 1e-16);
        assert_eq!(b, 0.0);
    }
}
