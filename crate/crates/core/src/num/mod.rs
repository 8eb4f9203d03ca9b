//! Scalar arithmetic used by every algorithm in the crate.
//!
//! Algorithms are written once against [`Real`] and run either in binary64
//! (`f64`) or in the arbitrary-precision [`Mp`] type. Grid values of the
//! q-trigonometric functions grow and shrink super-exponentially, so some
//! pipelines only make sense in [`Mp`].

mod mp;

pub use mp::{precision, set_precision, Mp, PrecisionGuard, DEFAULT_BITS};

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Arithmetic surface shared by `f64` and [`Mp`].
pub trait Real:
    Clone
    + Debug
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
{
    fn from_f64(v: f64) -> Self;
    fn from_i64(v: i64) -> Self;
    fn to_f64(&self) -> f64;
    fn abs(&self) -> Self;
    fn sqrt(&self) -> Self;
    fn ln(&self) -> Self;
    fn exp(&self) -> Self;
    fn powi(&self, n: i64) -> Self;
    /// `self^e` for `self > 0`.
    fn powf(&self, e: &Self) -> Self;
    fn is_finite(&self) -> bool;
    fn is_zero(&self) -> bool;
    /// `log2 |self|`, `-inf` at zero. Never overflows.
    fn log2_abs(&self) -> f64;
    /// Working precision in bits.
    fn precision_bits() -> u32;
    /// Run `f` with `bits` extra bits of working precision (no-op for `f64`).
    fn with_guard_bits<T>(bits: u32, f: impl FnOnce() -> T) -> T;
    /// Round to the current working precision.
    fn rounded(self) -> Self;
    fn is_extended() -> bool;

    fn zero() -> Self {
        Self::from_f64(0.0)
    }
    fn one() -> Self {
        Self::from_f64(1.0)
    }
    fn is_negative(&self) -> bool {
        *self < Self::zero()
    }
    fn square(&self) -> Self {
        self.clone() * self
    }
    fn max_r(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }
    /// Unit roundoff `2^-p` as an `f64` (zero once it underflows).
    fn unit_roundoff() -> f64 {
        (-(Self::precision_bits() as f64)).exp2()
    }
    /// Scientific notation with `digits` significant digits, valid far outside
    /// the `f64` exponent range.
    fn fmt_sci(&self, digits: usize) -> String {
        let prec = digits.max(1) - 1;
        let v = self.to_f64();
        if self.is_zero() {
            return format!("{:.*e}", prec, 0.0);
        }
        if v.is_finite() && v != 0.0 && v.abs() > 1e-300 && v.abs() < 1e300 {
            return format!("{:.*e}", prec, v);
        }
        let l10 = self.log2_abs() * std::f64::consts::LOG10_2;
        let e10 = l10.floor();
        let mant = 10f64.powf(l10 - e10);
        let sign = if self.is_negative() { "-" } else { "" };
        format!("{sign}{:.*}e{}", prec, mant, e10 as i64)
    }
}

impl Real for f64 {
    fn from_f64(v: f64) -> Self {
        v
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn ln(&self) -> Self {
        f64::ln(*self)
    }
    fn exp(&self) -> Self {
        f64::exp(*self)
    }
    fn powi(&self, n: i64) -> Self {
        if let Ok(n32) = i32::try_from(n) {
            f64::powi(*self, n32)
        } else {
            f64::powf(*self, n as f64)
        }
    }
    fn powf(&self, e: &Self) -> Self {
        f64::powf(*self, *e)
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn log2_abs(&self) -> f64 {
        f64::abs(*self).log2()
    }
    fn precision_bits() -> u32 {
        53
    }
    fn with_guard_bits<T>(_bits: u32, f: impl FnOnce() -> T) -> T {
        f()
    }
    fn rounded(self) -> Self {
        self
    }
    fn is_extended() -> bool {
        false
    }
}

/// Relative distance `|a - b| / max(|b|, floor)`.
pub fn rel_diff<R: Real>(a: &R, b: &R, floor: f64) -> f64 {
    let d = (a.clone() - b).abs();
    let s = b.abs().max_r(R::from_f64(floor));
    (d / s).to_f64()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f64_log2_and_fmt() {
        assert_eq!(8.0f64.log2_abs(), 3.0);
        assert_eq!(Real::fmt_sci(&1234.5f64, 3), "1.23e3");
        assert!(0.0f64.log2_abs().is_infinite());
    }

    #[test]
    fn mp_fmt_outside_f64_range() {
        let _g = PrecisionGuard::new(128);
        let big = Mp::from_f64(2.0).powi(3000);
        let s = big.fmt_sci(5);
        assert!(s.ends_with("e903"), "{s}");
        assert!(s.starts_with("1.2"), "{s}");
        let tiny = Mp::from_f64(-0.5).powi(3001);
        assert!(tiny.fmt_sci(3).starts_with("-"));
    }

    #[test]
    fn rel_diff_floor() {
        assert_eq!(rel_diff(&1.0f64, &0.0, 1.0), 1.0);
        assert!(rel_diff(&2.0f64, &2.0, 1e-300) == 0.0);
    }
}
