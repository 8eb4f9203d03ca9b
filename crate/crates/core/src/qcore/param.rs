use std::any::{Any, TypeId};
use std::cell::RefCell;

use serde::Serialize;

use super::products::{q_pochhammer, Len};
use crate::error::{QError, Result};
use crate::num::Real;

/// Default truncation tolerance for infinite products.
pub const DEFAULT_PROD_TOL: f64 = 1e-16;

/// The base `q` with the constants derived from it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QParam {
    q: f64,
    structural_m: Option<u32>,
    cos_sin_bound: f64,
    prod_tol: f64,
}

/// Largest `|log(1-q)/log q - m|` accepted as structural. Binary64 roots
/// land within about `1e-15` of `m`.
const STRUCTURAL_TOL: f64 = 1e-12;

thread_local! {
    static ROOTS: RefCell<Vec<((u32, u64, u32, TypeId), Box<dyn Any>)>> = const { RefCell::new(Vec::new()) };
}

/// Root of `q^m + q - 1` in `R`, refined from `q0` by Newton steps.
fn structural_root<R: Real>(m: u32, q0: f64) -> R {
    let key = (m, q0.to_bits(), R::precision_bits(), TypeId::of::<R>());
    let hit = ROOTS.with(|c| {
        c.borrow()
            .iter()
            .find(|(k, _)| *k == key)
            .and_then(|(_, v)| v.downcast_ref::<R>().cloned())
    });
    if let Some(v) = hit {
        return v;
    }
    let mut q = R::from_f64(q0);
    let mi = m as i64;
    let target = -(R::precision_bits() as f64) - 4.0;
    for _ in 0..64 {
        let f = q.powi(mi) + &q - R::one();
        let df = R::from_i64(mi) * q.powi(mi - 1) + R::one();
        let step = f / df;
        q = q - &step;
        if step.log2_abs() < target {
            break;
        }
    }
    ROOTS.with(|c| {
        let mut c = c.borrow_mut();
        if c.len() > 64 {
            c.clear();
        }
        c.push((key, Box::new(q.clone())));
    });
    q
}

/// Build a [`QParam`], detecting whether `1 - q = q^m` for an integer `m`.
pub fn make_q_param(q: f64, prod_tol: f64) -> Result<QParam> {
    if !(q > 0.0 && q < 1.0) {
        return Err(QError::Domain(format!("q = {q} must lie in (0, 1)")));
    }
    if !(prod_tol > 0.0 && prod_tol.is_finite()) {
        return Err(QError::Domain(format!("prod_tol = {prod_tol} must be positive")));
    }
    let ratio = (1.0 - q).ln() / q.ln();
    let m = ratio.round();
    let structural_m = if m >= 1.0 && (ratio - m).abs() <= STRUCTURAL_TOL {
        Some(m as u32)
    } else {
        None
    };
    let p = q_pochhammer(&q, &(q * q), Len::Infinite, prod_tol);
    Ok(QParam {
        q,
        structural_m,
        cos_sin_bound: 1.0 / (p * p),
        prod_tol,
    })
}

/// The root in (0, 1) of `q^m + q - 1 = 0`.
pub fn structural_q(m: u32) -> Result<QParam> {
    if m == 0 {
        return Err(QError::Domain("structural exponent m must be >= 1".into()));
    }
    let f = |q: f64| q.powi(m as i32) + q - 1.0;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-17 {
            break;
        }
    }
    make_q_param(0.5 * (lo + hi), DEFAULT_PROD_TOL)
}

impl QParam {
    pub fn q(&self) -> f64 {
        self.q
    }

    /// `q` in `R`. A structural base is the exact root of `q^m + q - 1` at
    /// the working precision, not its binary64 rounding: the decay of the
    /// q-trigonometric functions on the integer lattice depends on it.
    pub fn q_as<R: Real>(&self) -> R {
        match self.structural_m {
            Some(m) if R::is_extended() && m > 1 => structural_root(m, self.q),
            _ => R::from_f64(self.q),
        }
    }

    pub fn structural_m(&self) -> Option<u32> {
        self.structural_m
    }

    /// `1 / (q; q^2)_inf^2`.
    pub fn cos_sin_bound(&self) -> f64 {
        self.cos_sin_bound
    }

    pub fn prod_tol(&self) -> f64 {
        self.prod_tol
    }

    /// `log2` of the truncation tolerance appropriate for the scalar type:
    /// `prod_tol` in binary64, the working precision in extended mode.
    pub fn log2_tol<R: Real>(&self) -> f64 {
        let base = self.prod_tol.log2();
        if R::is_extended() {
            base.min(-(R::precision_bits() as f64) - 8.0)
        } else {
            base
        }
    }

    /// `|q^m - (1 - q)|` for the detected structural exponent.
    pub fn structural_defect(&self) -> Option<f64> {
        self.structural_m
            .map(|m| (self.q.powi(m as i32) - (1.0 - self.q)).abs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_is_structural_with_m_one() {
        let qp = make_q_param(0.5, DEFAULT_PROD_TOL).unwrap();
        assert_eq!(qp.structural_m(), Some(1));
        assert!((qp.cos_sin_bound() - 5.684_557_599_795_994).abs() < 1e-12);
    }

    #[test]
    fn generic_q_is_not_structural() {
        let qp = make_q_param(0.9, DEFAULT_PROD_TOL).unwrap();
        assert_eq!(qp.structural_m(), None);
        assert!(qp.cos_sin_bound() >= 1.0);
    }

    #[test]
    fn out_of_range() {
        assert!(matches!(make_q_param(1.2, 1e-16), Err(QError::Domain(_))));
        assert!(make_q_param(0.0, 1e-16).is_err());
        assert!(make_q_param(0.5, 0.0).is_err());
    }

    #[test]
    fn structural_roots() {
        assert_eq!(structural_q(1).unwrap().q(), 0.5);
        let q2 = structural_q(2).unwrap();
        assert!((q2.q() - (5f64.sqrt() - 1.0) / 2.0).abs() < 1e-14);
        assert_eq!(q2.structural_m(), Some(2));
        let q3 = structural_q(3).unwrap();
        assert!((q3.q() - 0.682_327_803_828_019_3).abs() < 1e-14);
        assert!(q3.structural_defect().unwrap() < 1e-12);
        assert!(structural_q(0).is_err());
    }

    #[test]
    fn extended_structural_root_is_exact() {
        use crate::num::{Mp, PrecisionGuard};
        let _g = PrecisionGuard::new(300);
        let qp = structural_q(2).unwrap();
        let q: Mp = qp.q_as();
        let defect = q.powi(2) + &q - Mp::one();
        assert!(defect.log2_abs() < -290.0);
        assert!((q.to_f64() - qp.q()).abs() < 1e-16);
        assert_eq!(make_q_param(0.618034, DEFAULT_PROD_TOL).unwrap().structural_m(), None);
    }
}
