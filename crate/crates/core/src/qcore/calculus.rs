use super::grid::GridFunction;
use crate::error::Result;
use crate::num::Real;

/// `D_q f(q^k) = (f(q^k) - f(q^{k+1})) / ((1-q) q^k)`.
pub fn q_derivative<R: Real>(f: &GridFunction<R>, k: i64) -> Result<R> {
    let g = f.grid();
    g.check(k)?;
    g.check(k + 1)?;
    let q = g.qp().q_as::<R>();
    let x: R = g.x(k);
    Ok((f.at(k).clone() - f.at(k + 1)) / ((R::one() - q) * x))
}

/// `D_q^2 f(q^k) = (q f(q^k) - (1+q) f(q^{k+1}) + f(q^{k+2})) / (q (1-q)^2 q^{2k})`.
pub fn q_derivative2<R: Real>(f: &GridFunction<R>, k: i64) -> Result<R> {
    let g = f.grid();
    g.check(k)?;
    g.check(k + 2)?;
    let q = g.qp().q_as::<R>();
    let x: R = g.x(k);
    let omq = R::one() - &q;
    let num = q.clone() * f.at(k) - (R::one() + &q) * f.at(k + 1) + f.at(k + 2);
    Ok(num / (q * omq.square() * x.square()))
}

/// `x -> f(q^n x)` on the part of the grid where it is defined.
pub fn q_shift<R: Real>(f: &GridFunction<R>, n: i64) -> Result<GridFunction<R>> {
    let g = f.grid();
    let lo = g.k_min().max(g.k_min() - n);
    let hi = g.k_max().min(g.k_max() - n);
    let sub = g.sub(lo, hi)?;
    GridFunction::new(sub, sub.ks().map(|k| f.at(k + n).clone()).collect())
}

impl<R: Real> GridFunction<R> {
    /// `D_q f` on `[k_min, k_max - 1]`.
    pub fn q_derivative(&self) -> Result<GridFunction<R>> {
        let g = self.grid();
        let sub = g.sub(g.k_min(), g.k_max() - 1)?;
        let vals = sub
            .ks()
            .map(|k| q_derivative(self, k))
            .collect::<Result<Vec<_>>>()?;
        GridFunction::new(sub, vals)
    }

    /// Jackson integral `(1-q) sum_{n >= k} f(q^n) q^n` over the stored grid.
    pub fn integral_0_to(&self, k: i64) -> Result<R> {
        let g = self.grid();
        g.check(k)?;
        let q = g.qp().q_as::<R>();
        let mut s = R::zero();
        let mut x: R = g.x(g.k_max());
        for j in (k..=g.k_max()).rev() {
            s = s + x.clone() * self.at(j);
            x = x / &q;
        }
        Ok((R::one() - q) * s)
    }

    /// Jackson integral over the whole stored grid.
    pub fn integral_total(&self) -> R {
        self.integral_0_to(self.grid().k_min())
            .expect("k_min is on the grid")
    }

    /// `x -> int_0^x f d_q t` at every grid point, summed from the small end.
    pub fn cumulative_integral(&self) -> GridFunction<R> {
        let g = *self.grid();
        let q = g.qp().q_as::<R>();
        let omq = R::one() - &q;
        let mut out = vec![R::zero(); g.len()];
        let mut s = R::zero();
        let mut x: R = g.x(g.k_max());
        for k in (g.k_min()..=g.k_max()).rev() {
            s = s + omq.clone() * &x * self.at(k);
            out[(k - g.k_min()) as usize] = s.clone();
            x = x / &q;
        }
        GridFunction::new(g, out).expect("finite sums of finite values")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{make_q_param, QGrid};

    fn grid() -> QGrid {
        QGrid::new(make_q_param(0.5, 1e-16).unwrap(), -4, 30).unwrap()
    }

    #[test]
    fn derivative_examples() {
        let g = grid();
        let id = GridFunction::from_fn(g, |_, x: &f64| *x).unwrap();
        let sq = GridFunction::from_fn(g, |_, x: &f64| x * x).unwrap();
        let c = GridFunction::from_fn(g, |_, _: &f64| 3.0).unwrap();
        for k in [-4, 0, 7] {
            assert!((q_derivative(&id, k).unwrap() - 1.0).abs() < 1e-15);
            assert_eq!(q_derivative(&c, k).unwrap(), 0.0);
        }
        assert!((q_derivative(&sq, 0).unwrap() - 1.5).abs() < 1e-15);
        assert!(q_derivative(&sq, 30).is_err());
    }

    #[test]
    fn second_derivative_is_composition() {
        let g = grid();
        let sq = GridFunction::from_fn(g, |_, x: &f64| x * x).unwrap();
        let lin = GridFunction::from_fn(g, |_, x: &f64| 2.0 * x - 1.0).unwrap();
        assert!((q_derivative2(&sq, 0).unwrap() - 1.5).abs() < 1e-14);
        assert!(q_derivative2(&lin, 3).unwrap().abs() < 1e-12);
        let f = GridFunction::from_fn(g, |_, x: &f64| (x * 0.7).cos() + x.powi(3)).unwrap();
        let twice = f.q_derivative().unwrap().q_derivative().unwrap();
        // second differences lose about 2k bits at x = 2^-k
        for k in -4..8 {
            let a = q_derivative2(&f, k).unwrap();
            let b = *twice.at(k);
            assert!((a - b).abs() <= 1e-9 * a.abs().max(1.0), "k={k}: {a} vs {b}");
        }
    }

    #[test]
    fn integral_inverts_derivative() {
        let g = grid();
        let f = GridFunction::from_fn(g, |_, x: &f64| 1.0 / (1.0 + x * x)).unwrap();
        let cum = f.cumulative_integral();
        for k in -4..29 {
            let d = q_derivative(&cum, k).unwrap();
            assert!((d - f.at(k)).abs() <= 1e-13 * f.at(k).abs());
        }
        let direct = f.integral_0_to(2).unwrap();
        assert!((direct - cum.at(2)).abs() < 1e-15);
    }

    #[test]
    fn shift_moves_samples() {
        let g = grid();
        let f = GridFunction::from_fn(g, |_, x: &f64| *x).unwrap();
        let s = q_shift(&f, 2).unwrap();
        assert_eq!(s.grid().k_max(), 28);
        assert_eq!(*s.at(0), 0.25);
    }
}
