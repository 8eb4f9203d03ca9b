use std::path::Path;

use clap::Args;
use qcalc::qsturm::{asymptotic_run, ode_residuals, AsymRun, PotentialSpec};
use qcalc::QGrid;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::fmt::{sci, write_json};

fn parse_potential(s: &str) -> Result<PotentialSpec, String> {
    s.parse().map_err(|e: qcalc::QError| e.to_string())
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Potential: zero, compact:K_LO:K_HI:C, gaussian:C or csv:PATH.
    #[arg(long = "p", value_parser = parse_potential)]
    pub potential: PotentialSpec,
    /// Boundary angle.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub alpha: f64,
    /// Spectral indices; lambda = q^-K.
    #[arg(long = "K", value_delimiter = ',', required = true, allow_negative_numbers = true)]
    pub big_k: Vec<i64>,
    /// Number of grid points in the coefficient fit window.
    #[arg(long, default_value_t = 8)]
    pub window: i64,
}

#[derive(Debug, Serialize)]
#[serde(untagged)]
enum Outcome {
    Ok(Box<qcalc::qsturm::AsymPair>),
    Err { big_k: i64, error: String },
}

pub fn run(args: &SolveArgs, cfg: &RunConfig) -> Result<(), CliError> {
    let qp = cfg.q_param()?;
    let grid = QGrid::new(qp, cfg.k_min, cfg.k_max)?;
    let dir = cfg.out_dir()?.unwrap_or_else(|| ".".into());
    let opts = cfg.solve_options();
    let pool = cfg.pool()?;

    let results: Vec<Result<AsymRun, qcalc::QError>> = pool.install(|| {
        args.big_k
            .par_iter()
            .map(|&k| {
                asymptotic_run(&args.potential, k, args.alpha, &grid, args.window, cfg.fit_tol, &opts)
            })
            .collect()
    });

    let mut failed = 0;
    println!(
        "{:>4} {:>24} {:>24} {:>24} {:>24} {:>24} {:>11}",
        "K", "lambda", "mu", "nu", "mu1", "nu1", "identity"
    );
    for (&big_k, res) in args.big_k.iter().zip(results) {
        let outcome = match res {
            Ok(run) => {
                write_solution(&dir.join(format!("solution_K{big_k}.csv")), &run)?;
                let p = &run.pair;
                println!(
                    "{:>4} {:>24} {:>24} {:>24} {:>24} {:>24} {:>11.3e}",
                    big_k,
                    sci(&p.lambda),
                    sci(&p.mu),
                    sci(&p.nu),
                    sci(&p.mu1),
                    sci(&p.nu1),
                    p.main_identity_residual
                );
                Outcome::Ok(Box::new(run.pair))
            }
            Err(e) => {
                failed += 1;
                eprintln!("K = {big_k}: {e}");
                Outcome::Err { big_k, error: e.to_string() }
            }
        };
        write_json(&dir.join(format!("coeffs_K{big_k}.json")), &outcome)?;
    }
    if failed > 0 {
        return Err(CliError::Failed(format!("{failed} of {} solves failed", args.big_k.len())));
    }
    Ok(())
}

/// Both solutions on the grid. The residual column is the larger of the two
/// and is empty on the last two points, where the equation is not imposed.
fn write_solution(path: &Path, run: &AsymRun) -> Result<(), CliError> {
    let big_k = run.pair.big_k;
    let r1 = ode_residuals(&run.phi.u, &run.p, big_k)?;
    let r2 = ode_residuals(&run.theta.u, &run.p, big_k)?;
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["k", "x", "phi", "theta", "ode_residual"])?;
    let grid = run.phi.u.grid();
    for k in grid.ks() {
        let x: qcalc::Mp = grid.x(k);
        let res = r1
            .iter()
            .zip(&r2)
            .find(|((ka, _), _)| *ka == k)
            .map(|((_, a), (_, b))| format!("{:.3e}", a.max(*b)))
            .unwrap_or_default();
        w.write_record([
            k.to_string(),
            sci(&x),
            sci(run.phi.u.at(k)),
            sci(run.theta.u.at(k)),
            res,
        ])?;
    }
    w.flush()?;
    Ok(())
}
