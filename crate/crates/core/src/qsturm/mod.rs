//! Second-order q-difference problems `D_q^2 u - p u = -lambda^2 u(qx)` on the
//! grid: Wronskians, the Volterra-form solver, a-priori bounds and the
//! coefficients of the oscillatory behaviour at large `x`.

mod basis;
mod boundary;
mod coeffs;
mod gronwall;
mod pipeline;
mod potential;
mod solver;
mod wronskian;

pub use basis::{homogeneous_solution, lambda_value, TrigBasis};
pub use boundary::{BoundaryParams, Problem};
pub use coeffs::{
    coeffs_fitted, coeffs_integral, default_window, main_identity_residual, AsymCoeffs,
    CoeffMethod, IdentityReport, IntegralForm, DEFAULT_FIT_TOL,
};
pub use gronwall::{
    gronwall_certify, gronwall_certify_solution, growth_constants, GronwallPoint,
    GronwallReport, Weight,
};
pub use pipeline::{asymptotic_pair, asymptotic_run, fit_precision_bits, AsymPair, AsymRun};
pub use potential::{Potential, PotentialSpec};
pub use solver::{ode_residuals, picard, solve, volterra_kernel, PicardResult, Solution, SolveOptions};
pub use wronskian::{
    bracket_on_grid, green_kernel, green_residual, q_bracket, q_wronskian,
    wronskian_product_formula, GreenForm, WronskianValue,
};
