use proptest::prelude::*;
use qcalc::qcore::{jackson_0_to_inf, q_derivative, q_gamma, DEFAULT_N_NEG_MAX};
use qcalc::qspecial::{q_exp_E, q_exp_e};
use qcalc::{make_q_param, GridFunction, QGrid};

fn grid(q: f64) -> QGrid {
    QGrid::new(make_q_param(q, 1e-17).unwrap(), -5, 30).unwrap()
}

fn values() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-10.0f64..10.0, 36)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn integral_of_derivative_telescopes(q in 0.2f64..0.8, v in values(), k in -5i64..29) {
        let g = grid(q);
        let f = GridFunction::new(g, v).unwrap();
        let df = f.q_derivative().unwrap();
        let lhs = df.integral_0_to(k).unwrap();
        let rhs = f.at(k) - f.at(g.k_max());
        prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + rhs.abs()), "{lhs} vs {rhs}");
    }

    #[test]
    fn product_rule(q in 0.2f64..0.8, a in values(), b in values(), k in -5i64..29) {
        let g = grid(q);
        let f = GridFunction::new(g, a).unwrap();
        let h = GridFunction::new(g, b).unwrap();
        let fh = GridFunction::from_fn(g, |k, _| f.at(k) * h.at(k)).unwrap();
        let lhs = q_derivative(&fh, k).unwrap();
        let rhs = f.at(k + 1) * q_derivative(&h, k).unwrap() + h.at(k) * q_derivative(&f, k).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + lhs.abs()), "{lhs} vs {rhs}");
    }

    #[test]
    fn integration_by_parts(q in 0.2f64..0.8, a in values(), b in values()) {
        // int D_q(f) h + int f(qx) D_q(h) = f h at the top minus f h at the bottom
        let g = grid(q);
        let f = GridFunction::new(g, a).unwrap();
        let h = GridFunction::new(g, b).unwrap();
        let df = f.q_derivative().unwrap();
        let dh = h.q_derivative().unwrap();
        let sub = *df.grid();
        let integrand = GridFunction::from_fn(sub, |k, _| df.at(k) * h.at(k) + f.at(k + 1) * dh.at(k)).unwrap();
        let lhs = integrand.integral_total();
        let rhs = f.at(g.k_min()) * h.at(g.k_min()) - f.at(g.k_max()) * h.at(g.k_max());
        prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + rhs.abs()), "{lhs} vs {rhs}");
    }

    #[test]
    fn jackson_integral_scales_with_grid_shift(q in 0.3f64..0.8, j in -4i64..5) {
        let qp = make_q_param(q, 1e-17).unwrap();
        let f = |x: f64| x / (1.0 + x * x).powi(2);
        let base = jackson_0_to_inf(|_, x: &f64| f(*x), &qp, DEFAULT_N_NEG_MAX, 1e-20).unwrap();
        let s = q.powi(j as i32);
        let scaled = jackson_0_to_inf(|_, x: &f64| f(s * x), &qp, DEFAULT_N_NEG_MAX, 1e-20).unwrap();
        prop_assert!((scaled * s - base).abs() <= 1e-12 * base.abs(), "{} vs {base}", scaled * s);
    }

    #[test]
    fn gamma_functional_equation(q in 0.2f64..0.8, x in 0.1f64..6.0) {
        let qp = make_q_param(q, 1e-17).unwrap();
        let g0: f64 = q_gamma(x, &qp).unwrap();
        let g1: f64 = q_gamma(x + 1.0, &qp).unwrap();
        let bracket = (1.0 - q.powf(x)) / (1.0 - q);
        prop_assert!((g1 - bracket * g0).abs() <= 1e-12 * g1.abs(), "{g1} vs {}", bracket * g0);
    }

    #[test]
    fn exponential_reciprocity(q in 0.2f64..0.8, t in -0.95f64..0.95) {
        let qp = make_q_param(q, 1e-17).unwrap();
        let x = t / (1.0 - q);
        let p = q_exp_e(&x, &qp).unwrap() * q_exp_E(&(-x), &qp);
        prop_assert!((p - 1.0).abs() < 1e-12, "{p}");
    }
}

#[test]
fn gamma_at_one_and_two() {
    let qp = make_q_param(0.37, 1e-17).unwrap();
    for x in [1.0, 2.0] {
        let g: f64 = q_gamma(x, &qp).unwrap();
        assert!((g - 1.0).abs() < 1e-14, "{g}");
    }
}
