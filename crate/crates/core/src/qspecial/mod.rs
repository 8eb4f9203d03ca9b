//! q-cos, q-sin, the q-exponentials and the normalized q-Bessel function.

mod exp;
mod lattice;
mod series;

pub use exp::{q_exp_E, q_exp_big_base, q_exp_e, q_exp_e_sq, q_exp_small_base, q_gaussian};
pub use lattice::{
    grid_eval_trig, j_alpha_grid, lambda_exponent, lattice_point, lattice_values, scaled_on_grid,
    LatticeFn, TrigKind,
};
pub use series::{
    hahn_exton_J, hahn_exton_j_base, j_alpha, j_alpha_auto, q_cos, q_cos_auto, q_pow_2alpha, q_sin,
    q_sin_auto,
    trig_coeffs, EvalReport, Method, TrigCoeff, ROUTE_CONDITION, UNTRUSTED_CONDITION,
};
