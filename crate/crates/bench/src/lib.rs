//! Fixtures shared by the benchmarks.

use qcalc::qsturm::PotentialSpec;
use qcalc::{make_q_param, structural_q, QGrid, QParam};

pub fn half() -> QParam {
    make_q_param(0.5, 1e-16).expect("q = 0.5 is valid")
}

pub fn golden() -> QParam {
    structural_q(2).expect("m = 2 has a root")
}

pub fn standard_grid(qp: QParam) -> QGrid {
    QGrid::new(qp, -40, 60).expect("valid bounds")
}

pub fn compact_potential() -> PotentialSpec {
    PotentialSpec::Compact { k_lo: 0, k_hi: 5, c: 0.1 }
}
