//! Numeric abstraction for the belief and credibility math.
//!
//! Everything that manipulates masses, beliefs or credibility scores is
//! written against [`Scalar`], so the same code runs on `f32`, `f64` and
//! exact rationals. The rational instantiation is what the algebraic tests
//! lean on: commutativity, associativity and normalization hold exactly
//! there, with no tolerance to argue about.

use std::fmt::Debug;

use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

/// A real-like number usable as a probability.
pub trait Scalar:
    Num + Signed + PartialOrd + Copy + Debug + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// How far a distribution may stray from summing to one.
    fn sum_tolerance() -> Self;

    /// Converts an `f64` literal; panics only if the value is not representable.
    fn lit(value: f64) -> Self {
        Self::from_f64(value).expect("literal not representable in scalar type")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Smallest integer not below `self`, for nonnegative values. Floating
    /// types first snap values within rounding noise of an integer, so
    /// `10.0 * 0.3` has ceiling 3.
    fn ceil_u64(self) -> u64;

    fn min_of(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }
}

macro_rules! float_ceil {
    ($x:expr, $tol:expr) => {{
        let x = $x;
        let nearest = x.round();
        if (x - nearest).abs() <= $tol * nearest.abs().max(1.0) {
            nearest as u64
        } else {
            x.ceil() as u64
        }
    }};
}

impl Scalar for f64 {
    fn sum_tolerance() -> Self {
        1e-9
    }

    fn ceil_u64(self) -> u64 {
        float_ceil!(self, 1e-12)
    }
}

impl Scalar for f32 {
    fn sum_tolerance() -> Self {
        1e-5
    }

    fn ceil_u64(self) -> u64 {
        float_ceil!(self, 1e-6)
    }
}

impl Scalar for Ratio<i64> {
    fn sum_tolerance() -> Self {
        Ratio::from_integer(0)
    }

    fn ceil_u64(self) -> u64 {
        self.ceil().to_integer() as u64
    }
}
