use crate::error::{QError, Result};
use crate::num::Real;

/// Length of a q-shifted factorial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Len {
    Finite(u64),
    Infinite,
}

const MAX_FACTORS: u64 = 2_000_000;

/// `(a; q)_n`. The infinite product stops once `|a q^k| < tol`; in extended
/// precision the cut-off is tightened to the working precision.
pub fn q_pochhammer<R: Real>(a: &R, q: &R, n: Len, tol: f64) -> R {
    match n {
        Len::Finite(n) => {
            let mut p = R::one();
            let mut t = a.clone();
            for _ in 0..n {
                p = p * (R::one() - &t);
                t = t * q;
            }
            p
        }
        Len::Infinite => {
            let log2_tol = if R::is_extended() {
                tol.log2().min(-(R::precision_bits() as f64) - 8.0)
            } else {
                tol.log2()
            };
            let mut p = R::one();
            let mut t = a.clone();
            for _ in 0..MAX_FACTORS {
                if t.log2_abs() < log2_tol {
                    break;
                }
                p = p * (R::one() - &t);
                t = t * q;
            }
            p
        }
    }
}

/// `Gamma_q(x) = (q;q)_inf / (q^x;q)_inf * (1-q)^(1-x)` in base `q`.
pub fn q_gamma_base<R: Real>(x: f64, q: &R, tol: f64) -> Result<R> {
    if !x.is_finite() {
        return Err(QError::Domain(format!("Gamma_q argument {x} is not finite")));
    }
    if x <= 0.0 && x == x.round() {
        return Err(QError::Domain(format!("Gamma_q has a pole at {x}")));
    }
    let xr = R::from_f64(x);
    let qx = q.powf(&xr);
    let num = q_pochhammer(q, q, Len::Infinite, tol);
    let den = q_pochhammer(&qx, q, Len::Infinite, tol);
    let one_minus_q = R::one() - q;
    let scale = one_minus_q.powf(&(R::one() - &xr));
    Ok(num / den * scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{Mp, PrecisionGuard};

    #[test]
    fn finite_products() {
        let v = q_pochhammer(&0.5, &0.5, Len::Finite(2), 1e-16);
        assert_eq!(v, 0.375);
        assert_eq!(q_pochhammer(&0.7, &0.3, Len::Finite(0), 1e-16), 1.0);
    }

    #[test]
    fn infinite_product_half() {
        let v = q_pochhammer(&0.5, &0.5, Len::Infinite, 1e-16);
        assert!((v - 0.288_788_095_086_602_4).abs() < 1e-15);
    }

    #[test]
    fn extended_product_agrees() {
        let _g = PrecisionGuard::new(200);
        let h = Mp::from_f64(0.5);
        let v = q_pochhammer(&h, &h, Len::Infinite, 1e-16);
        assert!((v.to_f64() - 0.288_788_095_086_602_4).abs() < 1e-16);
    }

    #[test]
    fn gamma_values() {
        let q = 0.5f64;
        assert!((q_gamma_base(1.0, &q, 1e-16).unwrap() - 1.0).abs() < 1e-14);
        assert!((q_gamma_base(2.0, &q, 1e-16).unwrap() - 1.0).abs() < 1e-14);
        let r = q_gamma_base(4.0, &q, 1e-16).unwrap() / q_gamma_base(3.0, &q, 1e-16).unwrap();
        assert!((r - 1.75).abs() < 1e-13);
        assert!(q_gamma_base(0.0, &q, 1e-16).is_err());
        assert!(q_gamma_base(-2.0, &q, 1e-16).is_err());
        assert!(q_gamma_base(-0.5, &q, 1e-16).is_ok());
    }
}
