//! Scalar abstraction shared by the standard (f64) and extended
//! (double-double) evaluation paths.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::algebra::{EvalRatFunc, NumericRatFunc};
use crate::dd::DoubleDouble;

pub trait Real:
    Copy
    + Debug
    + PartialOrd
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Unit roundoff of the representation.
    const EPSILON: f64;

    fn from_f64(x: f64) -> Self;
    fn from_rational(q: &BigRational) -> Self;
    fn to_f64(self) -> f64;
    fn pi() -> Self;

    fn abs(self) -> Self;
    fn sqrt(self) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn atan(self) -> Self;
    fn acos(self) -> Self;
    fn asin(self) -> Self;

    /// The cached numeric form of `f` in this representation.
    fn pick(f: &EvalRatFunc) -> &NumericRatFunc<Self>;

    fn zero() -> Self {
        Self::from_f64(0.0)
    }

    fn one() -> Self {
        Self::from_f64(1.0)
    }

    fn powf(self, e: Self) -> Self {
        (e * self.ln()).exp()
    }
}

impl Real for f64 {
    const EPSILON: f64 = f64::EPSILON;

    fn from_f64(x: f64) -> Self {
        x
    }
    fn from_rational(q: &BigRational) -> Self {
        q.to_f64().unwrap_or(f64::NAN)
    }
    fn to_f64(self) -> f64 {
        self
    }
    fn pi() -> Self {
        std::f64::consts::PI
    }
    fn abs(self) -> Self {
        f64::abs(self)
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn ln(self) -> Self {
        f64::ln(self)
    }
    fn sin(self) -> Self {
        f64::sin(self)
    }
    fn cos(self) -> Self {
        f64::cos(self)
    }
    fn atan(self) -> Self {
        f64::atan(self)
    }
    fn acos(self) -> Self {
        f64::acos(self.clamp(-1.0, 1.0))
    }
    fn asin(self) -> Self {
        f64::asin(self.clamp(-1.0, 1.0))
    }
    fn pick(f: &EvalRatFunc) -> &NumericRatFunc<Self> {
        &f.f64
    }
    fn powf(self, e: Self) -> Self {
        f64::powf(self, e)
    }
}

impl Real for DoubleDouble {
    const EPSILON: f64 = 4.93e-32;

    fn from_f64(x: f64) -> Self {
        DoubleDouble::from_f64(x)
    }
    fn from_rational(q: &BigRational) -> Self {
        DoubleDouble::from_rational(q)
    }
    fn to_f64(self) -> f64 {
        DoubleDouble::to_f64(self)
    }
    fn pi() -> Self {
        DoubleDouble::PI
    }
    fn abs(self) -> Self {
        DoubleDouble::abs(self)
    }
    fn sqrt(self) -> Self {
        DoubleDouble::sqrt(self)
    }
    fn exp(self) -> Self {
        DoubleDouble::exp(self)
    }
    fn ln(self) -> Self {
        DoubleDouble::ln(self)
    }
    fn sin(self) -> Self {
        DoubleDouble::sin(self)
    }
    fn cos(self) -> Self {
        DoubleDouble::cos(self)
    }
    fn atan(self) -> Self {
        DoubleDouble::atan(self)
    }
    fn acos(self) -> Self {
        let one = DoubleDouble::ONE;
        DoubleDouble::acos(self.max(-one).min(one))
    }
    fn asin(self) -> Self {
        let one = DoubleDouble::ONE;
        DoubleDouble::asin(self.max(-one).min(one))
    }
    fn pick(f: &EvalRatFunc) -> &NumericRatFunc<Self> {
        &f.dd
    }
}
