use std::fmt::{Debug, Display};
use std::ops::{Add, Mul, Neg, Sub};

use num::traits::{One, ToPrimitive, Zero};
use num::{BigRational, Complex};

/// Complex double-precision scalar used on every quantum path.
pub type C64 = Complex<f64>;

/// Element type of a [`Matrix`](super::Matrix).
///
/// Implemented for exact rationals and complex doubles. The conjugate is the
/// identity on rationals, so the same kernels serve both backends.
pub trait Entry:
    Clone
    + PartialEq
    + Debug
    + Display
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    /// True when arithmetic on this type is exact.
    const EXACT: bool;

    fn conj(&self) -> Self;

    /// Modulus, rounded to `f64` for reporting.
    fn magnitude(&self) -> f64;

    /// How far the entry is from being a nonnegative real, or `None` if it is one.
    fn negativity(&self) -> Option<f64>;

    fn is_finite(&self) -> bool;

    /// Lossy conversion used when a rational machine is embedded in a quantum one.
    fn to_c64(&self) -> C64;
}

impl Entry for BigRational {
    const EXACT: bool = true;

    fn conj(&self) -> Self {
        self.clone()
    }

    fn magnitude(&self) -> f64 {
        self.to_f64().map(f64::abs).unwrap_or(f64::INFINITY)
    }

    fn negativity(&self) -> Option<f64> {
        if *self < BigRational::zero() {
            Some(self.magnitude())
        } else {
            None
        }
    }

    fn is_finite(&self) -> bool {
        true
    }

    fn to_c64(&self) -> C64 {
        C64::new(self.to_f64().unwrap_or(f64::NAN), 0.0)
    }
}

impl Entry for C64 {
    const EXACT: bool = false;

    fn conj(&self) -> Self {
        Complex::conj(self)
    }

    fn magnitude(&self) -> f64 {
        self.norm()
    }

    fn negativity(&self) -> Option<f64> {
        if self.re < 0.0 || self.im != 0.0 {
            Some((-self.re).max(self.im.abs()))
        } else {
            None
        }
    }

    fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    fn to_c64(&self) -> C64 {
        *self
    }
}

/// Shorthand for building `n/d` rationals.
pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}
