use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Floating-point type the solvers are generic over.
///
/// Implemented for `f32` and `f64`. All tolerances quoted in the test suites
/// assume `f64`; `f32` is supported for the exact recurrences but loses the
/// 1e-12 identities.
pub trait Scalar:
    Float
    + FloatConst
    + Debug
    + Display
    + Default
    + Serialize
    + DeserializeOwned
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal into the scalar type.
    fn lit(x: f64) -> Self {
        <Self as num_traits::NumCast>::from(x).expect("f64 literal representable")
    }

    fn half() -> Self {
        Self::lit(0.5)
    }

    fn two() -> Self {
        Self::one() + Self::one()
    }

    fn from_count(n: usize) -> Self {
        <Self as num_traits::NumCast>::from(n).expect("count representable")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Whether the value is a finite probability in `[0, 1]`.
    fn is_probability(self) -> bool {
        self.is_finite() && self >= Self::zero() && self <= Self::one()
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// `base^n` for a non-negative integer exponent, evaluated as
/// `sign · exp(n · ln|base|)` so that very long products stay accurate.
pub fn signed_pow<T: Scalar>(base: T, n: u64) -> T {
    if n == 0 {
        return T::one();
    }
    if base == T::zero() {
        return T::zero();
    }
    let magnitude = (T::from_count(n as usize) * base.abs().ln()).exp();
    if base < T::zero() && n % 2 == 1 {
        -magnitude
    } else {
        magnitude
    }
}

/// `(1 - x)^n` using `ln_1p` for accuracy when `x` is small.
pub fn one_minus_pow<T: Scalar>(x: T, n: u64) -> T {
    if n == 0 {
        return T::one();
    }
    let base = T::one() - x;
    if base == T::zero() {
        return T::zero();
    }
    if base < T::zero() {
        return signed_pow(base, n);
    }
    (T::from_count(n as usize) * (-x).ln_1p()).exp()
}
