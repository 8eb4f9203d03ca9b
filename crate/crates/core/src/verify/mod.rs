//! Identity checks grouped into suites. Each numbered check covers both
//! bases of the configuration and reports its worst residual.

mod checks;

use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;

use crate::error::{QError, Result};
use crate::qcore::{make_q_param, structural_q, QGrid, QParam, DEFAULT_PROD_TOL};

pub use checks::{corrected_checks, run_check, CHECK_IDS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Core,
    Trig,
    Sturm,
    Bessel,
    Weber,
    All,
}

impl Suite {
    /// Check numbers run by the suite.
    pub fn checks(self) -> Vec<u8> {
        match self {
            Suite::Core => vec![2, 3],
            Suite::Trig => vec![1, 12, 14],
            Suite::Sturm => vec![4, 5, 6, 7, 8, 9],
            Suite::Bessel => vec![10, 11],
            Suite::Weber => vec![13],
            Suite::All => (1..=14).collect(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::Core => "core",
            Suite::Trig => "trig",
            Suite::Sturm => "sturm",
            Suite::Bessel => "bessel",
            Suite::Weber => "weber",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = QError;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "core" => Suite::Core,
            "trig" => Suite::Trig,
            "sturm" => Suite::Sturm,
            "bessel" => Suite::Bessel,
            "weber" => Suite::Weber,
            "all" => Suite::All,
            _ => {
                return Err(QError::Domain(format!(
                    "unknown suite '{s}' (core, trig, sturm, bessel, weber, all)"
                )))
            }
        })
    }
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub qs: Vec<QParam>,
    pub k_min: i64,
    pub k_max: i64,
    /// Run the binary64 checks in extended precision with tighter tolerances.
    pub extended: bool,
}

impl VerifyConfig {
    /// `q = 0.5` and the structural base with `m = 2`, on `[-40, 60]`.
    pub fn standard() -> Result<Self> {
        Ok(VerifyConfig {
            qs: vec![make_q_param(0.5, DEFAULT_PROD_TOL)?, structural_q(2)?],
            k_min: -40,
            k_max: 60,
            extended: false,
        })
    }

    pub fn grid(&self, qp: &QParam) -> Result<QGrid> {
        QGrid::new(*qp, self.k_min, self.k_max)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub id: String,
    /// The identity being checked, written out.
    pub anchor: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub suite: String,
    pub checks: Vec<Check>,
    /// Same quantities against the corrected closed forms; not part of `pass`.
    pub corrected: Vec<Check>,
    pub pass: bool,
    pub wall_clock_s: f64,
}

impl VerifyReport {
    pub fn new(suite: Suite, checks: Vec<Check>, corrected: Vec<Check>, wall_clock_s: f64) -> Self {
        let pass = checks.iter().all(|c| c.pass);
        VerifyReport {
            suite: suite.name().to_string(),
            checks,
            corrected,
            pass,
            wall_clock_s,
        }
    }

    /// Fixed-width table, one line per check.
    pub fn table(&self) -> String {
        let mut s = format!(
            "{:<26} {:>12} {:>10}  {}\n",
            "check", "residual", "tol", "result"
        );
        for c in self.checks.iter().chain(&self.corrected) {
            s += &format!(
                "{:<26} {:>12.3e} {:>10.1e}  {}\n",
                c.id,
                c.max_residual,
                c.tolerance,
                if c.pass { "PASS" } else { "FAIL" }
            );
        }
        s += &format!(
            "suite {}: {} ({:.1} s)\n",
            self.suite,
            if self.pass { "PASS" } else { "FAIL" },
            self.wall_clock_s
        );
        s
    }
}

/// Run every check of `suite` in order.
pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> VerifyReport {
    let t0 = Instant::now();
    let ids = suite.checks();
    let checks = ids.iter().map(|&n| run_check(n, cfg)).collect();
    let corrected = corrected_checks(&ids, cfg);
    VerifyReport::new(suite, checks, corrected, t0.elapsed().as_secs_f64())
}
