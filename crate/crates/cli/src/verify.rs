use std::time::Instant;

use clap::{Args, ValueEnum};
use qcalc::verify::{corrected_checks, run_check, Suite, VerifyConfig, VerifyReport};
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::fmt::write_json;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Core,
    Trig,
    Sturm,
    Bessel,
    Weber,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Suite {
        match s {
            SuiteArg::Core => Suite::Core,
            SuiteArg::Trig => Suite::Trig,
            SuiteArg::Sturm => Suite::Sturm,
            SuiteArg::Bessel => Suite::Bessel,
            SuiteArg::Weber => Suite::Weber,
            SuiteArg::All => Suite::All,
        }
    }
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub suite: SuiteArg,
    /// Print the report as JSON instead of a table.
    #[arg(long)]
    pub json: bool,
}

/// Runs the suite; the process exits 0 only if every check passes.
pub fn run(args: &VerifyArgs, cfg: &RunConfig) -> Result<bool, CliError> {
    let suite: Suite = args.suite.into();
    let mut vc = VerifyConfig::standard()?;
    if let Some(qp) = cfg.explicit_q()? {
        vc.qs = vec![qp];
    }
    vc.k_min = cfg.k_min;
    vc.k_max = cfg.k_max;
    vc.extended = cfg.extended();

    let t0 = Instant::now();
    let ids = suite.checks();
    let (checks, corrected) = cfg.pool()?.install(|| {
        rayon::join(
            || ids.par_iter().map(|&n| run_check(n, &vc)).collect::<Vec<_>>(),
            || corrected_checks(&ids, &vc),
        )
    });
    let report = VerifyReport::new(suite, checks, corrected, t0.elapsed().as_secs_f64());

    if args.json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        print!("{}", report.table());
    }
    if let Some(d) = cfg.out_dir()? {
        write_json(&d.join(format!("verify_{}.json", suite.name())), &report)?;
    }
    Ok(report.pass)
}
