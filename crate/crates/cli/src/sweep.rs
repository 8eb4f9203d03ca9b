//! Parameter sweeps over the large-`lambda` Bessel form and the heat kernel.

use std::path::Path;

use clap::Args;
use qcalc::qbessel::{bessel_remainder, heat_kernel, BesselAsymReport, HeatKernelRecord};
use qcalc::{Mp, PrecisionGuard, QError, QParam};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::fmt::{emit_json, sci};

/// Integer list given as `A..B` (inclusive) or `A,B,...`.
#[derive(Debug, Clone)]
pub struct IntList(pub Vec<i64>);

fn parse_range(s: &str) -> Result<IntList, String> {
    parse_ints(s).map(IntList)
}

fn parse_ints(s: &str) -> Result<Vec<i64>, String> {
    if let Some((a, b)) = s.split_once("..") {
        let a: i64 = a.trim().parse().map_err(|e| format!("bad range start: {e}"))?;
        let b: i64 = b.trim().parse().map_err(|e| format!("bad range end: {e}"))?;
        if a > b {
            return Err(format!("empty range {s}"));
        }
        return Ok((a..=b).collect());
    }
    s.split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|e| format!("bad integer '{t}': {e}")))
        .collect()
}

#[derive(Debug, Args)]
pub struct BesselArgs {
    #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
    pub alpha: Vec<f64>,
    /// Spectral indices, as A..B or a comma list.
    #[arg(long = "K", default_value = "2..12", value_parser = parse_range, allow_hyphen_values = true)]
    pub big_k: IntList,
    /// Grid offsets: x = q^j.
    #[arg(long, default_value = "0", value_delimiter = ',', allow_negative_numbers = true)]
    pub j: Vec<i64>,
}

fn remainder_at(j: i64, big_k: i64, alpha: f64, qp: &QParam, extended: bool) -> Result<BesselAsymReport, QError> {
    if extended {
        let _g = PrecisionGuard::new(qcalc::num::DEFAULT_BITS);
        bessel_remainder::<Mp>(j, big_k, alpha, qp)
    } else {
        bessel_remainder::<f64>(j, big_k, alpha, qp)
    }
}

pub fn bessel_asym(args: &BesselArgs, cfg: &RunConfig) -> Result<(), CliError> {
    if let Some(a) = args.alpha.iter().find(|a| !(**a > -0.5)) {
        return Err(QError::Hypothesis(format!("the remainder bound needs alpha > -1/2, got {a}")).into());
    }
    let qp = cfg.q_param()?;
    let tasks: Vec<(f64, i64, i64)> = args
        .alpha
        .iter()
        .flat_map(|&a| args.big_k.0.iter().flat_map(move |&k| args.j.iter().map(move |&j| (a, k, j))))
        .collect();
    let extended = cfg.extended();
    let results: Vec<_> = cfg.pool()?.install(|| {
        tasks
            .par_iter()
            .map(|&(a, k, j)| remainder_at(j, k, a, &qp, extended))
            .collect()
    });

    let dir = cfg.out_dir()?;
    let mut w: csv::Writer<Box<dyn std::io::Write>> = match &dir {
        Some(d) => csv::Writer::from_writer(Box::new(std::fs::File::create(d.join("bessel_asym.csv"))?)),
        None => csv::Writer::from_writer(Box::new(std::io::stdout())),
    };
    w.write_record(["alpha", "K", "lambda", "x", "j_alpha", "principal", "remainder", "bound"])?;
    let mut failed = 0;
    for (&(a, k, j), r) in tasks.iter().zip(results) {
        match r {
            Ok(r) => w.write_record([
                a.to_string(),
                k.to_string(),
                sci(&r.lambda),
                sci(&r.x),
                sci(&r.j_alpha),
                sci(&r.principal),
                sci(&r.remainder),
                sci(&r.bound),
            ])?,
            Err(e) => {
                failed += 1;
                eprintln!("alpha = {a}, K = {k}, j = {j}: {e}");
            }
        }
    }
    w.flush()?;
    if failed > 0 {
        return Err(CliError::Failed(format!("{failed} of {} points failed", tasks.len())));
    }
    Ok(())
}

#[derive(Debug, Args)]
pub struct HeatArgs {
    #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
    pub alpha: Vec<f64>,
    /// Time exponents: t = q^s.
    #[arg(long, value_delimiter = ',', default_value = "0", allow_negative_numbers = true)]
    pub s: Vec<i64>,
    /// Spectral indices, as A..B or a comma list.
    #[arg(long = "K", default_value = "4", value_parser = parse_range, allow_hyphen_values = true)]
    pub big_k: IntList,
}

#[derive(Debug, Serialize)]
#[serde(untagged)]
enum HeatOutcome {
    Ok(Box<HeatKernelRecord>),
    Err { alpha: f64, s: i64, big_k: i64, error: String },
}

pub fn heat(args: &HeatArgs, cfg: &RunConfig) -> Result<(), CliError> {
    let qp = cfg.q_param()?;
    let tasks: Vec<(f64, i64, i64)> = args
        .alpha
        .iter()
        .flat_map(|&a| args.s.iter().flat_map(move |&s| args.big_k.0.iter().map(move |&k| (a, s, k))))
        .collect();
    let extended = cfg.extended();
    let results: Vec<_> = cfg.pool()?.install(|| {
        tasks
            .par_iter()
            .map(|&(a, s, k)| {
                if extended {
                    let _g = PrecisionGuard::new(qcalc::num::DEFAULT_BITS);
                    heat_kernel::<Mp>(s, k, a, &qp)
                } else {
                    heat_kernel::<f64>(s, k, a, &qp)
                }
            })
            .collect()
    });
    let mut failed = 0;
    let out: Vec<HeatOutcome> = tasks
        .iter()
        .zip(results)
        .map(|(&(alpha, s, big_k), r)| match r {
            Ok(rec) => HeatOutcome::Ok(Box::new(rec)),
            Err(e) => {
                failed += 1;
                HeatOutcome::Err { alpha, s, big_k, error: e.to_string() }
            }
        })
        .collect();
    let dir = cfg.out_dir()?;
    emit_json(dir.as_deref().map(Path::new), "heat.json", &out)?;
    if failed > 0 {
        return Err(CliError::Failed(format!("{failed} of {} records failed", tasks.len())));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::parse_ints;

    #[test]
    fn ranges_and_lists() {
        assert_eq!(parse_ints("2..4").unwrap(), vec![2, 3, 4]);
        assert_eq!(parse_ints("-1..0").unwrap(), vec![-1, 0]);
        assert_eq!(parse_ints("3,5").unwrap(), vec![3, 5]);
        assert!(parse_ints("4..2").is_err());
        assert!(parse_ints("a").is_err());
    }
}
