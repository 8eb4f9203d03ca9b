use crate::error::Result;
use crate::num::{rel_diff, Real};
use crate::qcore::{q_derivative, q_derivative2, GridFunction};
use crate::qspecial::q_pow_2alpha;

/// Both forms of `Delta_{q,alpha} f` at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaValue<R: Real = f64> {
    /// `q^{2a+1} (D_q^2 f)(x/q) + (1-q^{2a+1}) / ((1-q) x/q) (D_q f)(x/q)`
    pub value: R,
    /// `y^{-(2a+1)} D_q[y^{2a+1} D_q f](y)` at `y = x/q`
    pub composed: R,
    pub discrepancy: f64,
}

/// `Delta_{q,alpha} f(q^k)`; reaches `k-1 .. k+1`.
pub fn delta_q_alpha<R: Real>(f: &GridFunction<R>, alpha: f64, k: i64) -> Result<DeltaValue<R>> {
    let g = f.grid();
    g.check(k - 1)?;
    g.check(k + 1)?;
    let q = g.qp().q_as::<R>();
    let s = q_pow_2alpha::<R>(alpha, g.qp()) * &q; // q^{2a+1}
    let y: R = g.x(k - 1);
    let omq = R::one() - &q;

    let d_outer = q_derivative(f, k - 1)?;
    let d_inner = q_derivative(f, k)?;
    let value = s.clone() * q_derivative2(f, k - 1)?
        + (R::one() - &s) / (omq.clone() * &y) * &d_outer;

    // y^{2a+1} = s^{k-1}
    let wy = s.powi(k - 1);
    let wqy = s.powi(k);
    let composed = (wy.clone() * d_outer - wqy * d_inner) / (omq * &y) / wy;
    let discrepancy = rel_diff(&composed, &value, 1e-300);
    Ok(DeltaValue {
        value,
        composed,
        discrepancy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{make_q_param, QGrid};
    use crate::qspecial::j_alpha_grid;

    fn grid() -> QGrid {
        QGrid::new(make_q_param(0.5, 1e-16).unwrap(), -10, 40).unwrap()
    }

    #[test]
    fn half_order_is_plain_second_difference() {
        let g = grid();
        let f = GridFunction::from_fn(g, |_, x: &f64| (0.3 * x).sin() + x).unwrap();
        for k in [-5, 0, 6] {
            let d = delta_q_alpha(&f, -0.5, k).unwrap();
            let plain = q_derivative2(&f, k - 1).unwrap();
            assert!((d.value - plain).abs() <= 1e-14 * plain.abs().max(1.0));
        }
    }

    #[test]
    fn monomial() {
        // D_q x^2 = (1+q) x, so Delta x^2 = (1+q)(1-q^{2a+2})/(1-q) at every x
        let g = grid();
        let q = 0.5f64;
        let f = GridFunction::from_fn(g, |_, x: &f64| x * x).unwrap();
        for alpha in [0.0, 0.5, 1.0] {
            let want = (1.0 + q) * (1.0 - q.powf(2.0 * alpha + 2.0)) / (1.0 - q);
            for k in [-3, 0, 5] {
                let d = delta_q_alpha(&f, alpha, k).unwrap();
                assert!((d.value - want).abs() < 1e-12, "alpha={alpha} k={k}: {}", d.value);
                assert!(d.discrepancy < 1e-12);
            }
        }
    }

    #[test]
    fn bessel_equation() {
        let g = grid();
        let q = 0.5f64;
        for alpha in [0.0, 0.5, 1.0] {
            for big_k in [2, 6] {
                let lam = q.powi(-big_k);
                let j: GridFunction = j_alpha_grid(alpha, lam, &g).unwrap();
                let sup = j.sup_norm();
                for k in -9..=20 {
                    let d = delta_q_alpha(&j, alpha, k).unwrap();
                    let r = d.value + lam * lam * j.at(k);
                    let x = q.powi(k as i32);
                    let floor = 1e-14 * sup / (x * x);
                    assert!(r.abs() <= 1e-9 * lam * lam * sup + floor, "a={alpha} K={big_k} k={k}: {r}");
                }
            }
        }
    }
}
