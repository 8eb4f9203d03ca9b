pub mod error;
pub mod num;
pub mod qcore;
pub mod qspecial;
pub mod qbessel;
pub mod qsturm;
pub mod verify;

pub use error::{QError, Result};
pub use num::{Mp, PrecisionGuard, Real};
pub use qcore::{make_q_param, structural_q, GridFunction, QGrid, QParam};
