//! Exact arithmetic: rationals, Gaussian rationals, dense polynomials,
//! rational functions and partial Bell polynomials.

mod bell;
mod gaussian;
mod modp;
mod poly;
mod powfrac;
mod ratfunc;

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

pub use num_rational::BigRational;

pub use bell::{bell_partial, bell_table, BellRing};
pub use gaussian::GaussianRational;
pub use poly::Polynomial;
pub use powfrac::PowerFraction;
pub use ratfunc::{
    integrate_e_form, substitute_minus_i_theta, EvalRatFunc, LogRational, NumericRatFunc, RationalFunction,
};

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Coefficient field for exact polynomials.
pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_int(n: i64) -> Self;

    /// Monic gcd; fields with integer structure can do better than Euclid.
    fn poly_gcd(a: &Polynomial<Self>, b: &Polynomial<Self>) -> Polynomial<Self> {
        Polynomial::gcd(a, b)
    }
}

impl Scalar for BigRational {
    fn from_int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    /// Primitive remainder sequence: coefficients stay small integers.
    fn poly_gcd(a: &Polynomial<Self>, b: &Polynomial<Self>) -> Polynomial<Self> {
        if modp::certainly_coprime(a, b) == Some(true) {
            return Polynomial::one();
        }
        let mut x = a.content_primitive().1;
        let mut y = b.content_primitive().1;
        while !y.is_zero() {
            let (_, r) = x.div_rem(&y);
            x = y;
            y = r.content_primitive().1;
        }
        x.monic()
    }
}

/// `n/d` as an exact rational.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Integer as an exact rational.
pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}
