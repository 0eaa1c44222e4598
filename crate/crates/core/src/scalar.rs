//! Scalar abstraction shared by every numeric routine in the crate.
//!
//! All schedule construction, objectives, the GD engine and the verification
//! checks are written against [`Scalar`], which is implemented for `f32` and
//! `f64`. Persisted formats (hex-float schedule files, CSV) are binary64.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point type usable by the toolkit: `f32` or `f64`.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from `f64`; used for literals and RNG samples.
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable")
    }

    /// Lossy conversion from an index or count.
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Silver ratio `1 + sqrt(2)`.
pub fn rho<T: Scalar>() -> T {
    T::one() + T::SQRT_2()
}

/// `log2(1 + sqrt(2))`, roughly 1.2716.
pub fn log2_rho<T: Scalar>() -> T {
    rho::<T>().log2()
}

/// Anytime rate exponent `2 log2 rho / (1 + log2 rho)`, roughly 1.1195.
pub fn theta<T: Scalar>() -> T {
    let l = log2_rho::<T>();
    (l + l) / (T::one() + l)
}

/// Strongly convex exponent, defined as `1 / theta` (roughly 0.89322).
pub fn varsigma<T: Scalar>() -> T {
    theta::<T>().recip()
}

/// Exponent `(c + log2 rho) / (c + 1)` in the aggregate-stepsize lower bound.
pub fn aggregate_exponent<T: Scalar>(c: T) -> T {
    (c + log2_rho::<T>()) / (c + T::one())
}
