//! Scalar abstraction shared by every analytic module.

use std::fmt::{Debug, Display, LowerExp};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive};

/// Real scalar field the analytic kernels are written against (`f32` or `f64`).
pub trait Scalar:
    Float + FloatConst + FromPrimitive + Debug + Display + LowerExp + Default + Send + Sync + 'static
{
}

impl<T> Scalar for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + Debug
        + Display
        + LowerExp
        + Default
        + Send
        + Sync
        + 'static
{
}

/// Converts an `f64` literal into the working scalar.
#[inline]
pub fn lit<S: Scalar>(value: f64) -> S {
    S::from_f64(value).expect("literal representable in scalar type")
}

#[inline]
pub(crate) fn real<S: Scalar>(re: S) -> Complex<S> {
    Complex::new(re, S::zero())
}

/// `exp(2πi·x)` for real `x`.
#[inline]
pub fn unit_phase<S: Scalar>(x: S) -> Complex<S> {
    let angle = S::TAU() * x;
    Complex::new(angle.cos(), angle.sin())
}

/// `value`, loosened to a small multiple of machine epsilon when the scalar
/// type cannot resolve it.
#[inline]
pub fn tolerance<S: Scalar>(value: f64) -> S {
    lit::<S>(value).max(S::epsilon() * lit(64.0))
}
