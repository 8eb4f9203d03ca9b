use std::cell::Cell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use dashu_base::{Abs, SquareRoot};
use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::IBig;

use super::Real;

type F = FBig<HalfEven, 2>;

/// Default working precision of [`Mp`] in bits.
pub const DEFAULT_BITS: u32 = 256;

thread_local! {
    static BITS: Cell<u32> = const { Cell::new(DEFAULT_BITS) };
}

/// Current [`Mp`] working precision of this thread.
pub fn precision() -> u32 {
    BITS.with(|b| b.get())
}

/// Set the [`Mp`] working precision of this thread; returns the old value.
pub fn set_precision(bits: u32) -> u32 {
    BITS.with(|b| b.replace(bits.max(24)))
}

/// Scoped precision change, restored on drop.
pub struct PrecisionGuard {
    old: u32,
}

impl PrecisionGuard {
    pub fn new(bits: u32) -> Self {
        PrecisionGuard {
            old: set_precision(bits),
        }
    }
}

impl Drop for PrecisionGuard {
    fn drop(&mut self) {
        set_precision(self.old);
    }
}

/// Binary floating point with a thread-local working precision and an
/// unbounded exponent.
#[derive(Clone, PartialEq, PartialOrd)]
pub struct Mp(F);

impl Mp {
    fn wrap(v: F) -> Mp {
        Mp(v)
    }

    fn at_precision(v: F) -> Mp {
        Mp(v.with_precision(precision() as usize).value())
    }
}

impl fmt::Debug for Mp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mp({})", self.fmt_sci(20))
    }
}

impl fmt::Display for Mp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_sci(f.precision().unwrap_or(17)))
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $op:tt) => {
        impl $tr for Mp {
            type Output = Mp;
            fn $m(self, rhs: Mp) -> Mp {
                Mp::wrap(self.0 $op rhs.0)
            }
        }
        impl<'a> $tr<&'a Mp> for Mp {
            type Output = Mp;
            fn $m(self, rhs: &'a Mp) -> Mp {
                Mp::wrap(self.0 $op &rhs.0)
            }
        }
        impl<'a, 'b> $tr<&'b Mp> for &'a Mp {
            type Output = Mp;
            fn $m(self, rhs: &'b Mp) -> Mp {
                Mp::wrap(&self.0 $op &rhs.0)
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);
binop!(Div, div, /);

impl Neg for Mp {
    type Output = Mp;
    fn neg(self) -> Mp {
        Mp(-self.0)
    }
}

impl Real for Mp {
    fn from_f64(v: f64) -> Self {
        assert!(v.is_finite(), "non-finite value {v} cannot enter extended precision");
        Mp::at_precision(F::try_from(v).expect("finite f64 converts exactly"))
    }
    fn from_i64(v: i64) -> Self {
        Mp::at_precision(F::from(v))
    }
    fn to_f64(&self) -> f64 {
        self.0.to_f64().value()
    }
    fn abs(&self) -> Self {
        Mp(self.0.clone().abs())
    }
    fn sqrt(&self) -> Self {
        Mp(self.0.sqrt())
    }
    fn ln(&self) -> Self {
        Mp(self.0.ln())
    }
    fn exp(&self) -> Self {
        Mp(self.0.exp())
    }
    fn powi(&self, n: i64) -> Self {
        if n < 0 {
            Mp::one() / Mp(self.0.powi(IBig::from(-n)))
        } else {
            Mp(self.0.powi(IBig::from(n)))
        }
    }
    fn powf(&self, e: &Self) -> Self {
        Mp(self.0.powf(&e.0))
    }
    fn is_finite(&self) -> bool {
        !self.0.repr().is_infinite()
    }
    fn is_zero(&self) -> bool {
        self.0.repr().significand().partial_cmp(&IBig::ZERO) == Some(Ordering::Equal)
    }
    fn log2_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let repr = self.0.repr();
        let digits = repr.digits() as isize;
        let head = F::from_parts(repr.significand().clone(), -digits);
        head.to_f64().value().abs().log2() + (digits + repr.exponent()) as f64
    }
    fn precision_bits() -> u32 {
        precision()
    }
    fn with_guard_bits<T>(bits: u32, f: impl FnOnce() -> T) -> T {
        let _g = PrecisionGuard::new(precision() + bits);
        f()
    }
    fn rounded(self) -> Self {
        Mp::at_precision(self.0)
    }
    fn is_extended() -> bool {
        true
    }
    fn zero() -> Self {
        Mp::at_precision(F::ZERO)
    }
    fn one() -> Self {
        Mp::at_precision(F::ONE)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precision_guard_restores() {
        let before = precision();
        {
            let _g = PrecisionGuard::new(512);
            assert_eq!(precision(), 512);
        }
        assert_eq!(precision(), before);
    }

    #[test]
    fn arithmetic_beyond_f64() {
        let _g = PrecisionGuard::new(200);
        let x = Mp::from_f64(0.5).powi(-2000);
        assert!((x.log2_abs() - 2000.0).abs() < 1e-12);
        assert!(x.to_f64().is_infinite());
        let y = x.clone() * &Mp::from_f64(0.5).powi(2000);
        assert!((y.to_f64() - 1.0).abs() < 1e-50);
        let third = Mp::one() / Mp::from_i64(3);
        assert!((third.to_f64() - 1.0 / 3.0).abs() < 1e-17);
    }

    #[test]
    fn elementary_functions() {
        let _g = PrecisionGuard::new(160);
        let two = Mp::from_i64(2);
        let r = two.sqrt();
        assert!(((r.clone() * &r) - two.clone()).abs().log2_abs() < -150.0);
        assert!((Mp::from_f64(1.5).ln().exp().to_f64() - 1.5).abs() < 1e-15);
        let p = Mp::from_f64(0.25).powf(&Mp::from_f64(0.5));
        assert!((p.to_f64() - 0.5).abs() < 1e-16);
        assert_eq!(Mp::from_f64(-3.0).abs().to_f64(), 3.0);
        assert!(Mp::zero().is_zero());
        assert!((Mp::from_f64(-0.75).log2_abs() - 0.75f64.log2()).abs() < 1e-14);
    }

    #[test]
    fn guard_bits_then_round() {
        let _g = PrecisionGuard::new(64);
        let v = Mp::with_guard_bits(64, || Mp::one() / Mp::from_i64(7)).rounded();
        assert!((v.to_f64() - 1.0 / 7.0).abs() < 1e-17);
    }
}
