use std::io::{Read, Write};

use serde::Serialize;

use super::param::QParam;
use crate::error::{QError, Result};
use crate::num::Real;

pub const DEFAULT_K_MIN: i64 = -40;
pub const DEFAULT_K_MAX: i64 = 60;

/// Truncated geometric grid `{q^k : k_min <= k <= k_max}`. `k_min` is the
/// largest point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QGrid {
    qp: QParam,
    k_min: i64,
    k_max: i64,
}

impl QGrid {
    pub fn new(qp: QParam, k_min: i64, k_max: i64) -> Result<QGrid> {
        if k_min > k_max {
            return Err(QError::Domain(format!("k_min = {k_min} exceeds k_max = {k_max}")));
        }
        Ok(QGrid { qp, k_min, k_max })
    }

    pub fn with_defaults(qp: QParam) -> QGrid {
        QGrid {
            qp,
            k_min: DEFAULT_K_MIN,
            k_max: DEFAULT_K_MAX,
        }
    }

    pub fn qp(&self) -> &QParam {
        &self.qp
    }
    pub fn k_min(&self) -> i64 {
        self.k_min
    }
    pub fn k_max(&self) -> i64 {
        self.k_max
    }
    pub fn len(&self) -> usize {
        (self.k_max - self.k_min + 1) as usize
    }
    pub fn is_empty(&self) -> bool {
        false
    }
    pub fn contains(&self, k: i64) -> bool {
        (self.k_min..=self.k_max).contains(&k)
    }
    pub fn check(&self, k: i64) -> Result<()> {
        if self.contains(k) {
            Ok(())
        } else {
            Err(QError::Range {
                k,
                k_min: self.k_min,
                k_max: self.k_max,
            })
        }
    }
    pub fn ks(&self) -> std::ops::RangeInclusive<i64> {
        self.k_min..=self.k_max
    }
    /// The point `q^k`.
    pub fn x<R: Real>(&self, k: i64) -> R {
        self.qp.q_as::<R>().powi(k)
    }
    /// Same parameters on a sub-range.
    pub fn sub(&self, k_min: i64, k_max: i64) -> Result<QGrid> {
        QGrid::new(self.qp, k_min, k_max)
    }
}

/// Grid exponent `k` with `q^k = a`, or a domain error when `a` is off grid.
pub fn grid_exponent(a: f64, q: f64) -> Result<i64> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(QError::Domain(format!("{a} is not a positive grid point")));
    }
    let k = (a.ln() / q.ln()).round();
    if (q.powi(k as i32) - a).abs() <= 1e-12 * a {
        Ok(k as i64)
    } else {
        Err(QError::Domain(format!("{a} is not on the grid q^k for q = {q}")))
    }
}

/// Real values indexed by grid exponent.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction<R: Real = f64> {
    grid: QGrid,
    values: Vec<R>,
}

impl<R: Real> GridFunction<R> {
    pub fn new(grid: QGrid, values: Vec<R>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(QError::Domain(format!(
                "{} values for a grid of {} points",
                values.len(),
                grid.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(QError::Evaluation(format!(
                "non-finite value at k = {}",
                grid.k_min() + i as i64
            )));
        }
        Ok(GridFunction { grid, values })
    }

    /// Sample `f(k, q^k)` at every grid point.
    pub fn from_fn(grid: QGrid, mut f: impl FnMut(i64, &R) -> R) -> Result<Self> {
        let values = grid.ks().map(|k| f(k, &grid.x::<R>(k))).collect();
        GridFunction::new(grid, values)
    }

    pub fn try_from_fn(grid: QGrid, mut f: impl FnMut(i64, &R) -> Result<R>) -> Result<Self> {
        let values = grid
            .ks()
            .map(|k| f(k, &grid.x::<R>(k)))
            .collect::<Result<Vec<_>>>()?;
        GridFunction::new(grid, values)
    }

    pub fn zeros(grid: QGrid) -> Self {
        GridFunction {
            grid,
            values: vec![R::zero(); grid.len()],
        }
    }

    pub fn grid(&self) -> &QGrid {
        &self.grid
    }
    pub fn values(&self) -> &[R] {
        &self.values
    }
    pub fn into_values(self) -> Vec<R> {
        self.values
    }

    pub fn get(&self, k: i64) -> Result<&R> {
        self.grid.check(k)?;
        Ok(&self.values[(k - self.grid.k_min()) as usize])
    }

    /// Value at `k`, panicking off grid. For use after range checks.
    pub fn at(&self, k: i64) -> &R {
        &self.values[(k - self.grid.k_min()) as usize]
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &R)> {
        self.grid.ks().zip(self.values.iter())
    }

    pub fn map(&self, mut f: impl FnMut(i64, &R) -> R) -> Result<Self> {
        GridFunction::new(self.grid, self.iter().map(|(k, v)| f(k, v)).collect())
    }

    /// Restriction to `[k_min, k_max]`.
    pub fn restrict(&self, k_min: i64, k_max: i64) -> Result<Self> {
        self.grid.check(k_min)?;
        self.grid.check(k_max)?;
        let g = self.grid.sub(k_min, k_max)?;
        let lo = (k_min - self.grid.k_min()) as usize;
        let hi = (k_max - self.grid.k_min()) as usize;
        GridFunction::new(g, self.values[lo..=hi].to_vec())
    }

    pub fn sup_norm(&self) -> R {
        self.values
            .iter()
            .fold(R::zero(), |m, v| m.max_r(v.abs()))
    }

    /// `max |self - other| / max |other|` over the common grid.
    pub fn rel_sup_diff(&self, other: &GridFunction<R>) -> Result<f64> {
        if self.grid.k_min() != other.grid.k_min() || self.grid.k_max() != other.grid.k_max() {
            return Err(QError::Domain("grid functions live on different grids".into()));
        }
        let mut d = R::zero();
        for (a, b) in self.values.iter().zip(&other.values) {
            d = d.max_r((a.clone() - b).abs());
        }
        let s = other.sup_norm();
        if s.is_zero() {
            return Ok(d.to_f64());
        }
        Ok((d / s).to_f64())
    }

    pub fn to_f64(&self) -> GridFunction<f64> {
        GridFunction {
            grid: self.grid,
            values: self.values.iter().map(|v| v.to_f64()).collect(),
        }
    }

    pub fn convert<S: Real>(&self) -> GridFunction<S> {
        GridFunction {
            grid: self.grid,
            values: self.values.iter().map(|v| S::from_f64(v.to_f64())).collect(),
        }
    }

    /// CSV with header `k,x,value`, 17 significant digits.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["k", "x", "value"])?;
        for (k, v) in self.iter() {
            let x: R = self.grid.x(k);
            wr.write_record([k.to_string(), x.fmt_sci(17), v.fmt_sci(17)])?;
        }
        wr.flush()?;
        Ok(())
    }
}

impl GridFunction<f64> {
    /// Read a `k,x,value` table. Rows must cover `grid` exactly.
    pub fn read_csv<Rd: Read>(grid: QGrid, r: Rd) -> Result<Self> {
        let mut rd = csv::Reader::from_reader(r);
        let mut vals = vec![None; grid.len()];
        for rec in rd.records() {
            let rec = rec?;
            let field = |i: usize| -> Result<&str> {
                rec.get(i)
                    .map(str::trim)
                    .ok_or_else(|| QError::Domain(format!("row {:?} has too few fields", rec)))
            };
            let k: i64 = field(0)?
                .parse()
                .map_err(|_| QError::Domain(format!("bad k in row {:?}", rec)))?;
            let v: f64 = field(2)?
                .parse()
                .map_err(|_| QError::Domain(format!("bad value in row {:?}", rec)))?;
            grid.check(k)?;
            vals[(k - grid.k_min()) as usize] = Some(v);
        }
        let values = vals
            .into_iter()
            .enumerate()
            .map(|(i, v)| {
                v.ok_or_else(|| {
                    QError::Domain(format!("no row for k = {}", grid.k_min() + i as i64))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        GridFunction::new(grid, values)
    }
}
