use serde::Serialize;

use crate::error::{QError, Result};
use crate::num::Real;
use crate::qcore::QParam;
use crate::qspecial::{lattice_point, LatticeFn};

/// `j_alpha(lambda x) = cos(q^{-alpha-1/2} lambda x) + remainder` at one point.
#[derive(Debug, Clone, Serialize)]
pub struct BesselAsymReport {
    pub alpha: f64,
    pub lambda: f64,
    pub x: f64,
    pub j_alpha: f64,
    pub principal: f64,
    pub remainder: f64,
    /// `C_q / (lambda x)` with the boxed constant.
    pub bound: f64,
    #[serde(rename = "C_q")]
    pub c_q: f64,
    /// The constant at the end of the inequality chain,
    /// `(1-q^{2a+1}) / (1-q)^2 * (2/(q;q^2)^2)^2`.
    pub c_q_chain: f64,
}

/// `(boxed, chain)` remainder constants.
pub fn remainder_constants(alpha: f64, qp: &QParam) -> (f64, f64) {
    let q = qp.q();
    let b = qp.cos_sin_bound();
    let s = 1.0 - q.powf(2.0 * alpha + 1.0);
    let boxed = s / q * 2.0 * b / (1.0 - q);
    let chain = s / ((1.0 - q) * (1.0 - q)) * (2.0 * b) * (2.0 * b);
    (boxed, chain)
}

/// Split `j_alpha(lambda x)` at `x = q^j`, `lambda = q^{-K}` into the cosine
/// term and the remainder.
pub fn bessel_remainder<R: Real>(j: i64, big_k: i64, alpha: f64, qp: &QParam) -> Result<BesselAsymReport> {
    if !(alpha > -0.5) {
        return Err(QError::Hypothesis(format!(
            "the remainder bound needs alpha > -1/2, got {alpha}"
        )));
    }
    let e = (j - big_k) as f64;
    let jv: R = lattice_point(LatticeFn::Bessel(alpha), e, qp)?;
    let pv: R = lattice_point(LatticeFn::Cos, e - alpha - 0.5, qp)?;
    let rem = jv.clone() - &pv;
    let (c_q, c_q_chain) = remainder_constants(alpha, qp);
    let q = qp.q();
    let lx = q.powi((j - big_k) as i32);
    Ok(BesselAsymReport {
        alpha,
        lambda: q.powi(-big_k as i32),
        x: q.powi(j as i32),
        j_alpha: jv.to_f64(),
        principal: pv.to_f64(),
        remainder: rem.to_f64(),
        bound: c_q / lx,
        c_q,
        c_q_chain,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{Mp, PrecisionGuard};
    use crate::qcore::make_q_param;

    #[test]
    fn constants_at_half() {
        let qp = make_q_param(0.5, 1e-16).unwrap();
        let want = [(0.0, 22.7382), (0.5, 34.1073), (1.0, 39.7919)];
        for (a, c) in want {
            let (boxed, chain) = remainder_constants(a, &qp);
            assert!((boxed - c).abs() < 1e-3, "{a}: {boxed}");
            assert!(chain > boxed);
        }
    }

    #[test]
    fn hypothesis() {
        let qp = make_q_param(0.5, 1e-16).unwrap();
        assert!(matches!(bessel_remainder::<f64>(0, 4, -0.5, &qp), Err(QError::Hypothesis(_))));
    }

    #[test]
    fn near_boundary_order_is_small() {
        let _g = PrecisionGuard::new(128);
        let qp = make_q_param(0.5, 1e-16).unwrap();
        let r = bessel_remainder::<Mp>(0, 3, -0.5 + 1e-6, &qp).unwrap();
        assert!(r.remainder.abs() < 1e-3 * r.j_alpha.abs().max(1.0), "{r:?}");
    }

    #[test]
    fn half_order_decays() {
        let qp = make_q_param(0.5, 1e-16).unwrap();
        let mut prev = f64::INFINITY;
        for big_k in 2..=12 {
            let r = bessel_remainder::<f64>(0, big_k, 0.5, &qp).unwrap();
            assert!(r.remainder.abs() < prev, "K={big_k}");
            assert!(r.remainder.abs() * r.lambda <= r.c_q);
            prev = r.remainder.abs();
        }
    }
}
