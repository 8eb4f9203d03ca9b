use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{QError, Result};
use crate::num::Real;
use crate::qcore::{GridFunction, QGrid};
use crate::qspecial::q_gaussian;

/// Named potentials accepted by the solver front ends.
#[derive(Debug, Clone, PartialEq)]
pub enum PotentialSpec {
    Zero,
    /// `c` on `k_lo <= k <= k_hi`, zero elsewhere.
    Compact { k_lo: i64, k_hi: i64, c: f64 },
    /// `c / (-(1-q^2) x^2; q^2)_inf`.
    Gaussian { c: f64 },
    /// `k,x,value` table covering the grid.
    Csv(PathBuf),
}

impl FromStr for PotentialSpec {
    type Err = QError;

    /// `zero`, `compact:K_LO:K_HI:C`, `gaussian:C` or `csv:PATH`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || QError::Domain(format!("unrecognized potential spec '{s}'"));
        let mut parts = s.splitn(2, ':');
        let head = parts.next().unwrap_or_default();
        let rest = parts.next();
        match (head, rest) {
            ("zero", None) => Ok(PotentialSpec::Zero),
            ("compact", Some(r)) => {
                let f: Vec<&str> = r.split(':').collect();
                if f.len() != 3 {
                    return Err(bad());
                }
                let k_lo: i64 = f[0].parse().map_err(|_| bad())?;
                let k_hi: i64 = f[1].parse().map_err(|_| bad())?;
                let c: f64 = f[2].parse().map_err(|_| bad())?;
                if k_lo > k_hi || !c.is_finite() {
                    return Err(bad());
                }
                Ok(PotentialSpec::Compact { k_lo, k_hi, c })
            }
            ("gaussian", Some(r)) => {
                let c: f64 = r.parse().map_err(|_| bad())?;
                if !c.is_finite() {
                    return Err(bad());
                }
                Ok(PotentialSpec::Gaussian { c })
            }
            ("csv", Some(p)) if !p.is_empty() => Ok(PotentialSpec::Csv(PathBuf::from(p))),
            _ => Err(bad()),
        }
    }
}

impl std::fmt::Display for PotentialSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PotentialSpec::Zero => write!(f, "zero"),
            PotentialSpec::Compact { k_lo, k_hi, c } => write!(f, "compact:{k_lo}:{k_hi}:{c}"),
            PotentialSpec::Gaussian { c } => write!(f, "gaussian:{c}"),
            PotentialSpec::Csv(p) => write!(f, "csv:{}", p.display()),
        }
    }
}

/// A potential sampled on the grid together with its two norms.
#[derive(Debug, Clone)]
pub struct Potential<R: Real = f64> {
    p: GridFunction<R>,
    norm_inf: f64,
    norm_1: f64,
}

impl<R: Real> Potential<R> {
    pub fn new(p: GridFunction<R>) -> Result<Self> {
        let norm_inf = p.sup_norm().to_f64();
        let norm_1 = p.map(|_, v| v.abs())?.integral_total().to_f64();
        if !norm_inf.is_finite() || !norm_1.is_finite() {
            return Err(QError::Domain("potential norms must be finite".into()));
        }
        Ok(Potential { p, norm_inf, norm_1 })
    }

    pub fn from_spec(spec: &PotentialSpec, grid: &QGrid) -> Result<Self> {
        let qp = grid.qp();
        let p = match spec {
            PotentialSpec::Zero => GridFunction::zeros(*grid),
            PotentialSpec::Compact { k_lo, k_hi, c } => {
                let c = R::from_f64(*c);
                GridFunction::from_fn(*grid, |k, _| {
                    if (*k_lo..=*k_hi).contains(&k) {
                        c.clone()
                    } else {
                        R::zero()
                    }
                })?
            }
            PotentialSpec::Gaussian { c } => {
                let c = R::from_f64(*c);
                GridFunction::from_fn(*grid, |_, x| c.clone() * q_gaussian(x, qp))?
            }
            PotentialSpec::Csv(path) => {
                let f = std::fs::File::open(path)?;
                GridFunction::<f64>::read_csv(*grid, f)?.convert()
            }
        };
        Potential::new(p)
    }

    pub fn zero(grid: &QGrid) -> Self {
        Potential::new(GridFunction::zeros(*grid)).expect("zero has finite norms")
    }

    pub fn values(&self) -> &GridFunction<R> {
        &self.p
    }
    pub fn at(&self, k: i64) -> &R {
        self.p.at(k)
    }
    pub fn grid(&self) -> &QGrid {
        self.p.grid()
    }
    pub fn norm_inf(&self) -> f64 {
        self.norm_inf
    }
    pub fn norm_1(&self) -> f64 {
        self.norm_1
    }

    /// Smallest `k` (largest `x`) where `p` is nonzero.
    pub fn support_start(&self) -> Option<i64> {
        self.p.iter().find(|(_, v)| !v.is_zero()).map(|(k, _)| k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::make_q_param;

    #[test]
    fn parse_specs() {
        assert_eq!("zero".parse::<PotentialSpec>().unwrap(), PotentialSpec::Zero);
        assert_eq!(
            "compact:0:5:0.1".parse::<PotentialSpec>().unwrap(),
            PotentialSpec::Compact { k_lo: 0, k_hi: 5, c: 0.1 }
        );
        assert!(matches!("gaussian:2".parse::<PotentialSpec>(), Ok(PotentialSpec::Gaussian { .. })));
        for bad in ["", "compact:1:2", "compact:5:0:1", "gauss:1", "zero:1", "csv:"] {
            assert!(bad.parse::<PotentialSpec>().is_err(), "{bad}");
        }
        let s = PotentialSpec::Compact { k_lo: -1, k_hi: 3, c: 0.5 };
        assert_eq!(s.to_string().parse::<PotentialSpec>().unwrap(), s);
    }

    #[test]
    fn norms() {
        let g = QGrid::new(make_q_param(0.5, 1e-16).unwrap(), -10, 40).unwrap();
        let spec: PotentialSpec = "compact:0:5:0.1".parse().unwrap();
        let p = Potential::<f64>::from_spec(&spec, &g).unwrap();
        assert_eq!(p.norm_inf(), 0.1);
        // 0.1 (1-q) sum_{k=0}^{5} q^k
        let want = 0.1 * 0.5 * (1.0 - 0.5f64.powi(6)) / 0.5;
        assert!((p.norm_1() - want).abs() < 1e-16);
        assert_eq!(p.support_start(), Some(0));
        let gauss = Potential::<f64>::from_spec(&PotentialSpec::Gaussian { c: 1.0 }, &g).unwrap();
        assert_eq!(gauss.norm_inf(), 1.0);
        assert!(gauss.norm_1() > 0.0);
    }
}
