use crate::error::{QError, Result};
use crate::num::Real;
use crate::qcore::{q_pochhammer, Len, QParam};

/// `E(x; b) = (-(1-b) x; b)_inf`.
pub fn q_exp_big_base<R: Real>(x: &R, base: &R, tol: f64) -> R {
    let a = -((R::one() - base) * x);
    q_pochhammer(&a, base, Len::Infinite, tol)
}

/// `e(x; b) = 1 / ((1-b) x; b)_inf`, defined for `(1-b) x < 1`.
pub fn q_exp_small_base<R: Real>(x: &R, base: &R, tol: f64) -> Result<R> {
    let a = (R::one() - base) * x;
    if a >= R::one() {
        return Err(QError::Pole(format!(
            "e(x) has poles at x = b^-m/(1-b); x = {} is at or beyond the first",
            x.fmt_sci(6)
        )));
    }
    Ok(R::one() / q_pochhammer(&a, base, Len::Infinite, tol))
}

/// `E(x; q)`.
#[allow(non_snake_case)]
pub fn q_exp_E<R: Real>(x: &R, qp: &QParam) -> R {
    q_exp_big_base(x, &qp.q_as::<R>(), qp.prod_tol())
}

/// `e(x; q)`.
pub fn q_exp_e<R: Real>(x: &R, qp: &QParam) -> Result<R> {
    q_exp_small_base(x, &qp.q_as::<R>(), qp.prod_tol())
}

/// `e(x; q^2) = 1 / ((1-q^2) x; q^2)_inf`, the base used by the Gaussian
/// weights and the Gronwall bound.
pub fn q_exp_e_sq<R: Real>(x: &R, qp: &QParam) -> Result<R> {
    q_exp_small_base(x, &qp.q_as::<R>().square(), qp.prod_tol())
}

/// `1 / (-(1-q^2) x^2; q^2)_inf`, i.e. `e(-x^2; q^2)`.
pub fn q_gaussian<R: Real>(x: &R, qp: &QParam) -> R {
    q_exp_e_sq(&(-x.square()), qp).expect("negative arguments never reach a pole")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::make_q_param;

    #[test]
    fn values_at_zero() {
        let qp = make_q_param(0.5, 1e-16).unwrap();
        assert_eq!(q_exp_E(&0.0, &qp), 1.0);
        assert_eq!(q_exp_e(&0.0, &qp).unwrap(), 1.0);
    }

    #[test]
    fn reciprocity() {
        let qp = make_q_param(0.5, 1e-16).unwrap();
        for x in [1.9, 0.125, -0.5, -1.0, -7.0] {
            let p = q_exp_e(&x, &qp).unwrap() * q_exp_E(&(-x), &qp);
            assert!((p - 1.0).abs() < 1e-13, "x={x}");
        }
    }

    #[test]
    fn pole_region() {
        let qp = make_q_param(0.5, 1e-16).unwrap();
        assert!(matches!(q_exp_e(&2.0, &qp), Err(QError::Pole(_))));
        assert!(matches!(q_exp_e(&3.0, &qp), Err(QError::Pole(_))));
        assert!(q_exp_e_sq(&(1.0 / 0.75 - 1e-9), &qp).is_ok());
    }

    #[test]
    fn gaussian_decays() {
        let qp = make_q_param(0.5, 1e-16).unwrap();
        let g: Vec<f64> = (0..6).map(|i| q_gaussian(&(i as f64), &qp)).collect();
        assert_eq!(g[0], 1.0);
        assert!(g.windows(2).all(|w| w[1] < w[0]));
    }
}
