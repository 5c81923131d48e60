//! Scalar abstractions.
//!
//! Numerical code is written against [`Real`] (implemented for `f32` and
//! `f64`). Parameter classification and hypothesis gating only need ordered
//! field arithmetic and are written against [`Ordered`], which is also
//! implemented by exact rationals.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;
use std::sync::Arc;

use num_traits::{Float, FloatConst, FromPrimitive, Num, ToPrimitive};

use crate::spectral::transform::{RustFftSine, SineTransform};

/// Floating-point scalar used by the spectral machinery.
pub trait Real:
    Ordered
    + Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Default
    + Debug
    + Display
    + LowerExp
    + Sum
    + Send
    + Sync
    + 'static
{
    /// Unnormalized DST-I of length `len` for this scalar type.
    fn sine_transform(len: usize) -> Arc<dyn SineTransform<Self>>;

    /// Lossy conversion from `f64`; used for literals.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    fn sine_transform(len: usize) -> Arc<dyn SineTransform<Self>> {
        Arc::new(RustFftSine::<f64>::new(len))
    }
}

impl Real for f32 {
    fn sine_transform(len: usize) -> Arc<dyn SineTransform<Self>> {
        Arc::new(RustFftSine::<f32>::new(len))
    }
}

/// Ordered field arithmetic: enough to evaluate exponent inequalities
/// exactly when instantiated with a rational type.
pub trait Ordered: Num + PartialOrd + Clone + Debug + Display {
    /// Embeds a small non-negative integer.
    fn int(n: usize) -> Self {
        let mut acc = Self::zero();
        for _ in 0..n {
            acc = acc + Self::one();
        }
        acc
    }

    /// Best-effort conversion for reporting.
    fn approx_f64(&self) -> f64;
}

impl Ordered for f64 {
    fn int(n: usize) -> Self {
        n as f64
    }
    fn approx_f64(&self) -> f64 {
        *self
    }
}

impl Ordered for f32 {
    fn int(n: usize) -> Self {
        n as f32
    }
    fn approx_f64(&self) -> f64 {
        *self as f64
    }
}

impl Ordered for num_rational::Ratio<i64> {
    fn int(n: usize) -> Self {
        Self::from_integer(n as i64)
    }
    fn approx_f64(&self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }
}

impl Ordered for num_rational::Ratio<i128> {
    fn int(n: usize) -> Self {
        Self::from_integer(n as i128)
    }
    fn approx_f64(&self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }
}

pub(crate) fn max_of<T: Ordered>(a: T, b: T) -> T {
    if a >= b {
        a
    } else {
        b
    }
}

/// `|x|^e * sign(x)`, continuous at zero for `e > 0`.
#[inline]
pub fn signed_pow<T: Real>(x: T, e: T) -> T {
    if x == T::zero() {
        T::zero()
    } else {
        x.abs().powf(e) * x.signum()
    }
}

/// `max(x, 0)^e`.
#[inline]
pub fn pos_pow<T: Real>(x: T, e: T) -> T {
    if x > T::zero() {
        x.powf(e)
    } else {
        T::zero()
    }
}
