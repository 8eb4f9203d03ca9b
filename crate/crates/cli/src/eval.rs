use clap::{Args, ValueEnum};
use qcalc::qcore::{q_gamma, q_pochhammer, Len};
use qcalc::qspecial::{
    j_alpha, j_alpha_auto, q_cos, q_cos_auto, q_exp_E, q_exp_e, q_sin, q_sin_auto, EvalReport,
};
use qcalc::{Mp, PrecisionGuard, QParam, Real};
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::fmt::sci;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Function {
    #[value(name = "qcos")]
    QCos,
    #[value(name = "qsin")]
    QSin,
    /// E(x; q)
    #[value(name = "qexp_E")]
    QExpBig,
    /// e(x; q)
    #[value(name = "qexp_e")]
    QExpSmall,
    #[value(name = "jalpha")]
    JAlpha,
    #[value(name = "qgamma")]
    QGamma,
    /// (x; q)_n, infinite unless --n is given
    #[value(name = "pochhammer")]
    Pochhammer,
}

impl Function {
    fn name(self) -> &'static str {
        match self {
            Function::QCos => "qcos",
            Function::QSin => "qsin",
            Function::QExpBig => "qexp_E",
            Function::QExpSmall => "qexp_e",
            Function::JAlpha => "jalpha",
            Function::QGamma => "qgamma",
            Function::Pochhammer => "pochhammer",
        }
    }
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(value_enum)]
    pub function: Function,
    #[arg(long, allow_negative_numbers = true)]
    pub x: f64,
    /// Order of jalpha.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub alpha: f64,
    /// Number of factors for pochhammer.
    #[arg(long)]
    pub n: Option<u64>,
    /// Print JSON instead of key: value lines.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Serialize)]
pub struct EvalOutput {
    pub function: &'static str,
    pub q: f64,
    pub x: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    pub value: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_terms: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub condition: Option<f64>,
    pub method: String,
}

impl EvalOutput {
    fn lines(&self) -> String {
        let mut s = format!("function: {}\nq: {}\nx: {}\n", self.function, self.q, self.x);
        if let Some(a) = self.alpha {
            s += &format!("alpha: {a}\n");
        }
        s += &format!("value: {}\n", self.value);
        if let Some(n) = self.n_terms {
            s += &format!("n_terms: {n}\n");
        }
        if let Some(c) = self.condition {
            s += &format!("condition: {c:.3e}\n");
        }
        s += &format!("method: {}\n", self.method);
        s
    }
}

pub fn run(args: &EvalArgs, cfg: &RunConfig) -> Result<(), CliError> {
    let qp = cfg.q_param()?;
    let out = evaluate(args, &qp, cfg.extended())?;
    if args.json {
        println!("{}", serde_json::to_string_pretty(&out)?);
    } else {
        print!("{}", out.lines());
    }
    Ok(())
}

pub fn evaluate(args: &EvalArgs, qp: &QParam, extended: bool) -> Result<EvalOutput, CliError> {
    let mut out = EvalOutput {
        function: args.function.name(),
        q: qp.q(),
        x: args.x,
        alpha: (args.function == Function::JAlpha).then_some(args.alpha),
        value: String::new(),
        n_terms: None,
        condition: None,
        method: String::new(),
    };
    let from_report = |out: &mut EvalOutput, r: EvalReport<_>| {
        out.n_terms = Some(r.n_terms);
        out.condition = Some(r.condition());
        out.method = r.method.to_string();
        sci(&r.value)
    };
    let x = args.x;
    if extended {
        let _g = PrecisionGuard::new(qcalc::num::DEFAULT_BITS);
        let xm = Mp::from_f64(x);
        let from_mp = |out: &mut EvalOutput, r: EvalReport<Mp>| {
            out.n_terms = Some(r.n_terms);
            out.condition = Some(r.condition());
            out.method = r.method.to_string();
            sci(&r.value)
        };
        out.value = match args.function {
            Function::QCos => from_mp(&mut out, q_cos(&xm, qp)),
            Function::QSin => from_mp(&mut out, q_sin(&xm, qp)),
            Function::JAlpha => from_mp(&mut out, j_alpha(&xm, args.alpha, qp)?),
            _ => {
                out.method = "product".into();
                product::<Mp>(args, qp)?
            }
        };
    } else {
        out.value = match args.function {
            Function::QCos => from_report(&mut out, q_cos_auto(x, qp)?),
            Function::QSin => from_report(&mut out, q_sin_auto(x, qp)?),
            Function::JAlpha => from_report(&mut out, j_alpha_auto(x, args.alpha, qp)?),
            _ => {
                out.method = "product".into();
                product::<f64>(args, qp)?
            }
        };
    }
    Ok(out)
}

fn product<R: Real>(args: &EvalArgs, qp: &QParam) -> Result<String, CliError> {
    let x = R::from_f64(args.x);
    let v: R = match args.function {
        Function::QExpBig => q_exp_E(&x, qp),
        Function::QExpSmall => q_exp_e(&x, qp)?,
        Function::QGamma => q_gamma(args.x, qp)?,
        Function::Pochhammer => {
            let n = args.n.map_or(Len::Infinite, Len::Finite);
            q_pochhammer(&x, &qp.q_as::<R>(), n, qp.prod_tol())
        }
        _ => unreachable!("series functions are handled by the caller"),
    };
    Ok(sci(&v))
}
