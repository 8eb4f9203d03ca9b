//! The q-Bessel operator, the large-`lambda` form of `j_alpha` and the
//! Weber integral of a q-Gaussian against `j_alpha`.

mod operator;
mod remainder;
mod weber;

pub use operator::{delta_q_alpha, DeltaValue};
pub use remainder::{bessel_remainder, remainder_constants, BesselAsymReport};
pub use weber::{
    heat_kernel, ramanujan_b_alpha, weber_a_alpha, weber_integral, HeatKernelRecord,
    RamanujanReport, WeberValue,
};
