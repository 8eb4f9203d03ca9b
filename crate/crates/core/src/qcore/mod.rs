//! Grid arithmetic, q-products, q-derivatives and Jackson integrals.

mod calculus;
mod grid;
mod jackson;
mod param;
mod products;

pub use calculus::{q_derivative, q_derivative2, q_shift};
pub use grid::{grid_exponent, GridFunction, QGrid, DEFAULT_K_MAX, DEFAULT_K_MIN};
pub use jackson::{
    jackson_0_to_a, jackson_0_to_inf, jackson_0_to_qk, jackson_a_to_inf, try_jackson_0_to_inf,
    try_jackson_0_to_qk, try_jackson_qk_to_inf, DEFAULT_N_NEG_MAX, MIN_TERMS,
};
pub use param::{make_q_param, structural_q, QParam, DEFAULT_PROD_TOL};
pub use products::{q_gamma_base, q_pochhammer, Len};

use crate::error::Result;
use crate::num::Real;

/// `Gamma_q(x)` for the base of `qp`.
pub fn q_gamma<R: Real>(x: f64, qp: &QParam) -> Result<R> {
    q_gamma_base(x, &qp.q_as::<R>(), qp.prod_tol())
}
