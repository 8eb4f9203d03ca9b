use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use qcalc::qcore::DEFAULT_PROD_TOL;
use qcalc::qsturm::{SolveOptions, DEFAULT_FIT_TOL};
use qcalc::{make_q_param, structural_q, QParam};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    #[default]
    Binary64,
    Extended,
}

/// Settings shared by every subcommand, read from a JSON file and then
/// overridden by flags.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub q: Option<f64>,
    pub q_structural: Option<u32>,
    pub k_min: i64,
    pub k_max: i64,
    pub prod_tol: f64,
    pub pivot_tol: f64,
    pub residual_tol: f64,
    pub fit_tol: f64,
    pub precision: Precision,
    pub jobs: Option<usize>,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let opts = SolveOptions::default();
        RunConfig {
            q: None,
            q_structural: None,
            k_min: -40,
            k_max: 60,
            prod_tol: DEFAULT_PROD_TOL,
            pivot_tol: opts.pivot_tol,
            residual_tol: opts.residual_tol,
            fit_tol: DEFAULT_FIT_TOL,
            precision: Precision::Binary64,
            jobs: None,
            out: None,
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// JSON file with run settings; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Base q in (0, 1).
    #[arg(long, global = true, conflicts_with = "q_structural")]
    pub q: Option<f64>,
    /// Use the root of q^m + q = 1.
    #[arg(long = "q-structural", global = true, value_name = "M")]
    pub q_structural: Option<u32>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub kmin: Option<i64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub kmax: Option<i64>,
    /// Truncation tolerance of infinite products.
    #[arg(long = "tol-prod", global = true)]
    pub tol_prod: Option<f64>,
    /// Smallest admissible solver pivot.
    #[arg(long = "tol-pivot", global = true)]
    pub tol_pivot: Option<f64>,
    /// Bound on the solver's relative equation residual.
    #[arg(long = "tol-residual", global = true)]
    pub tol_residual: Option<f64>,
    /// Bound on the relative residual of the coefficient fit.
    #[arg(long = "tol-fit", global = true)]
    pub tol_fit: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub precision: Option<Precision>,
    /// Worker threads for sweeps.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))
    }

    /// File settings (if any) with the flags applied on top.
    pub fn resolve(args: &RunArgs) -> Result<Self, CliError> {
        let mut c = match &args.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        if args.q.is_some() || args.q_structural.is_some() {
            c.q = args.q;
            c.q_structural = args.q_structural;
        }
        macro_rules! take {
            ($field:ident, $arg:ident) => {
                if let Some(v) = args.$arg.clone() {
                    c.$field = v;
                }
            };
        }
        take!(k_min, kmin);
        take!(k_max, kmax);
        take!(prod_tol, tol_prod);
        take!(pivot_tol, tol_pivot);
        take!(residual_tol, tol_residual);
        take!(fit_tol, tol_fit);
        take!(precision, precision);
        if args.jobs.is_some() {
            c.jobs = args.jobs;
        }
        if args.out.is_some() {
            c.out = args.out.clone();
        }
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        for (name, v) in [
            ("prod_tol", self.prod_tol),
            ("pivot_tol", self.pivot_tol),
            ("residual_tol", self.residual_tol),
            ("fit_tol", self.fit_tol),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(CliError::Usage(format!("{name} = {v} must be positive")));
            }
        }
        if self.k_min >= self.k_max {
            return Err(CliError::Usage(format!(
                "k_min = {} must be below k_max = {}",
                self.k_min, self.k_max
            )));
        }
        if self.q.is_some() && self.q_structural.is_some() {
            return Err(CliError::Usage("give either q or q_structural, not both".into()));
        }
        if self.jobs == Some(0) {
            return Err(CliError::Usage("jobs must be at least 1".into()));
        }
        self.explicit_q()?;
        Ok(())
    }

    /// The base named by the settings, if one was named.
    pub fn explicit_q(&self) -> Result<Option<QParam>, CliError> {
        let usage = |e: qcalc::QError| CliError::Usage(e.to_string());
        match (self.q, self.q_structural) {
            (Some(q), _) => Ok(Some(make_q_param(q, self.prod_tol).map_err(usage)?)),
            (None, Some(m)) => {
                let root = structural_q(m).map_err(usage)?;
                Ok(Some(make_q_param(root.q(), self.prod_tol).map_err(usage)?))
            }
            (None, None) => Ok(None),
        }
    }

    /// The named base, or `q = 0.5`.
    pub fn q_param(&self) -> Result<QParam, CliError> {
        match self.explicit_q()? {
            Some(qp) => Ok(qp),
            None => Ok(make_q_param(0.5, self.prod_tol)?),
        }
    }

    pub fn solve_options(&self) -> SolveOptions {
        SolveOptions {
            pivot_tol: self.pivot_tol,
            residual_tol: self.residual_tol,
        }
    }

    pub fn extended(&self) -> bool {
        self.precision == Precision::Extended
    }

    pub fn pool(&self) -> Result<rayon::ThreadPool, CliError> {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(n) = self.jobs {
            b = b.num_threads(n);
        }
        b.build().map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))
    }

    /// Output directory, created on demand.
    pub fn out_dir(&self) -> Result<Option<PathBuf>, CliError> {
        if let Some(d) = &self.out {
            std::fs::create_dir_all(d)?;
        }
        Ok(self.out.clone())
    }
}
