//! Double-double arithmetic (~106-bit significand) built from error-free
//! transformations.
//!
//! A value is the unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`. The
//! transcendental functions here are accurate to a few units in the last
//! place of the double-double format for the argument ranges used by the
//! oracle (|x| up to ~1e4 for the trigonometric functions).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

#[derive(Clone, Copy, Default, PartialEq)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DoubleDouble {
    pub const ZERO: Self = Self { hi: 0.0, lo: 0.0 };
    pub const ONE: Self = Self { hi: 1.0, lo: 0.0 };
    pub const PI: Self = Self {
        hi: std::f64::consts::PI,
        lo: 1.224_646_799_147_353_2e-16,
    };
    pub const FRAC_PI_2: Self = Self {
        hi: std::f64::consts::FRAC_PI_2,
        lo: 6.123_233_995_736_766e-17,
    };
    pub const LN_2: Self = Self {
        hi: std::f64::consts::LN_2,
        lo: 2.319_046_813_846_299_6e-17,
    };
    /// Euler–Mascheroni constant.
    pub const EULER_GAMMA: Self = Self {
        hi: 0.577_215_664_901_532_9,
        lo: -4.942_915_152_430_645e-18,
    };

    // Third word of pi/2 for argument reduction.
    const FRAC_PI_2_LO2: f64 = -1.497_384_904_859_169_8e-33;

    #[inline]
    pub const fn new(hi: f64, lo: f64) -> Self {
        Self { hi, lo }
    }

    #[inline]
    pub const fn from_f64(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    /// Nearest double-double to an exact rational.
    pub fn from_rational(q: &BigRational) -> Self {
        if q.is_zero() {
            return Self::ZERO;
        }
        let hi = ratio_to_f64(q);
        if !hi.is_finite() {
            return Self::from_f64(hi);
        }
        let hi_exact = BigRational::from_float(hi).expect("finite");
        let lo = ratio_to_f64(&(q - hi_exact));
        let (h, l) = quick_two_sum(hi, lo);
        Self { hi: h, lo: l }
    }

    pub fn from_bigint(n: &BigInt) -> Self {
        Self::from_rational(&BigRational::from_integer(n.clone()))
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.hi == 0.0
    }

    #[inline]
    pub fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    #[inline]
    pub fn signum(self) -> f64 {
        if self.hi > 0.0 {
            1.0
        } else if self.hi < 0.0 {
            -1.0
        } else {
            0.0
        }
    }

    #[inline]
    pub fn mul_f64(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        let e = e + self.lo * b;
        let (h, l) = quick_two_sum(p, e);
        Self { hi: h, lo: l }
    }

    /// Exact scaling by a power of two.
    #[inline]
    pub fn ldexp(self, k: i32) -> Self {
        let f = 2f64.powi(k);
        Self {
            hi: self.hi * f,
            lo: self.lo * f,
        }
    }

    pub fn recip(self) -> Self {
        Self::ONE / self
    }

    pub fn sqr(self) -> Self {
        self * self
    }

    pub fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            if self.hi == 0.0 {
                return Self::ZERO;
            }
            return Self::from_f64(f64::NAN);
        }
        let y = Self::from_f64(self.hi.sqrt());
        y + (self - y.sqr()) / y.mul_f64(2.0)
    }

    pub fn powi(self, n: i32) -> Self {
        if n == 0 {
            return Self::ONE;
        }
        let mut base = self;
        let mut e = n.unsigned_abs();
        let mut acc = Self::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base = base.sqr();
            e >>= 1;
        }
        if n < 0 {
            acc.recip()
        } else {
            acc
        }
    }

    pub fn exp(self) -> Self {
        if self.hi > 709.7 {
            return Self::from_f64(f64::INFINITY);
        }
        if self.hi < -745.0 {
            return Self::ZERO;
        }
        if self.hi == 0.0 {
            return Self::ONE;
        }
        const SQUARINGS: i32 = 9;
        let k = (self.hi / std::f64::consts::LN_2).round();
        let r = (self - Self::LN_2.mul_f64(k)).ldexp(-SQUARINGS);
        // expm1 of the reduced argument by Taylor series
        let mut term = r;
        let mut sum = r;
        for n in 2..40 {
            term = term * r / Self::from_f64(n as f64);
            sum += term;
            if term.hi.abs() <= 1e-36 * sum.hi.abs() {
                break;
            }
        }
        // (1+p)^2 - 1 = 2p + p^2
        for _ in 0..SQUARINGS {
            sum = sum.mul_f64(2.0) + sum.sqr();
        }
        (sum + Self::ONE).ldexp(k as i32)
    }

    pub fn ln(self) -> Self {
        if self.hi <= 0.0 {
            return Self::from_f64(if self.hi == 0.0 {
                f64::NEG_INFINITY
            } else {
                f64::NAN
            });
        }
        let mut y = Self::from_f64(self.hi.ln());
        for _ in 0..2 {
            y = y + self * (-y).exp() - Self::ONE;
        }
        y
    }

    pub fn powf(self, e: Self) -> Self {
        (e * self.ln()).exp()
    }

    /// Simultaneous sine and cosine.
    pub fn sin_cos(self) -> (Self, Self) {
        if self.hi == 0.0 {
            return (Self::ZERO, Self::ONE);
        }
        let k = (self.hi / std::f64::consts::FRAC_PI_2).round();
        let (p1, e1) = two_prod(k, Self::FRAC_PI_2.hi);
        let mut r = self - Self::new(p1, e1);
        r -= Self::from_f64(k).mul_f64(Self::FRAC_PI_2.lo);
        r -= Self::from_f64(k * Self::FRAC_PI_2_LO2);
        let (s, c) = sin_cos_taylor(r);
        match (k as i64).rem_euclid(4) {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        }
    }

    pub fn sin(self) -> Self {
        self.sin_cos().0
    }

    pub fn cos(self) -> Self {
        self.sin_cos().1
    }

    pub fn atan(self) -> Self {
        Self::atan2(self, Self::ONE)
    }

    /// Four-quadrant arctangent of `y/x`.
    pub fn atan2(y: Self, x: Self) -> Self {
        if y.hi == 0.0 && x.hi == 0.0 {
            return Self::ZERO;
        }
        let mut t = Self::from_f64(y.hi.atan2(x.hi));
        for _ in 0..2 {
            let (s, c) = t.sin_cos();
            let f = x * s - y * c;
            let fp = x * c + y * s;
            t -= f / fp;
        }
        t
    }

    /// Arccosine on [-1, 1].
    pub fn acos(self) -> Self {
        let s = (Self::ONE - self.sqr()).max(Self::ZERO).sqrt();
        Self::atan2(s, self)
    }

    /// Arcsine on [-1, 1].
    pub fn asin(self) -> Self {
        let c = (Self::ONE - self.sqr()).max(Self::ZERO).sqrt();
        Self::atan2(self, c)
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }
}

fn sin_cos_taylor(r: DoubleDouble) -> (DoubleDouble, DoubleDouble) {
    let r2 = r.sqr();
    let mut s = r;
    let mut term = r;
    let mut n = 1.0;
    loop {
        term = -(term * r2) / DoubleDouble::from_f64((n + 1.0) * (n + 2.0));
        n += 2.0;
        s += term;
        if term.hi.abs() < 1e-36 || term.hi.is_nan() {
            break;
        }
    }
    let mut c = DoubleDouble::ONE;
    let mut term = DoubleDouble::ONE;
    let mut n = 0.0;
    loop {
        term = -(term * r2) / DoubleDouble::from_f64((n + 1.0) * (n + 2.0));
        n += 2.0;
        c += term;
        if term.hi.abs() < 1e-36 || term.hi.is_nan() {
            break;
        }
    }
    (s, c)
}

fn ratio_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // fall back to scaling for extreme magnitudes
        let n = q.numer().bits() as i64;
        let d = q.denom().bits() as i64;
        if n > d {
            f64::INFINITY * q.numer().sign_f64()
        } else {
            0.0
        }
    })
}

trait SignF64 {
    fn sign_f64(&self) -> f64;
}

impl SignF64 for BigInt {
    fn sign_f64(&self) -> f64 {
        match self.sign() {
            num_bigint::Sign::Minus => -1.0,
            _ => 1.0,
        }
    }
}

impl From<f64> for DoubleDouble {
    fn from(x: f64) -> Self {
        Self::from_f64(x)
    }
}

impl PartialOrd for DoubleDouble {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi)? {
            Ordering::Equal => self.lo.partial_cmp(&other.lo),
            o => Some(o),
        }
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    #[inline]
    fn add(self, b: Self) -> Self {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let s2 = s2 + t1;
        let (s1, s2) = quick_two_sum(s1, s2);
        let s2 = s2 + t2;
        let (hi, lo) = quick_two_sum(s1, s2);
        Self { hi, lo }
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    #[inline]
    fn sub(self, b: Self) -> Self {
        self + (-b)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    #[inline]
    fn mul(self, b: Self) -> Self {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Self { hi, lo }
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    fn div(self, b: Self) -> Self {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Self { hi, lo } + Self::from_f64(q3)
    }
}

impl AddAssign for DoubleDouble {
    #[inline]
    fn add_assign(&mut self, b: Self) {
        *self = *self + b;
    }
}

impl SubAssign for DoubleDouble {
    #[inline]
    fn sub_assign(&mut self, b: Self) {
        *self = *self - b;
    }
}

impl MulAssign for DoubleDouble {
    #[inline]
    fn mul_assign(&mut self, b: Self) {
        *self = *self * b;
    }
}

impl fmt::Debug for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DD({:e} + {:e})", self.hi, self.lo)
    }
}

impl fmt::Display for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_f64())
    }
}

/// Complex number over double-double components.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ComplexDD {
    pub re: DoubleDouble,
    pub im: DoubleDouble,
}

impl ComplexDD {
    pub const fn new(re: DoubleDouble, im: DoubleDouble) -> Self {
        Self { re, im }
    }

    pub fn from_f64(re: f64, im: f64) -> Self {
        Self::new(DoubleDouble::from_f64(re), DoubleDouble::from_f64(im))
    }

    pub fn norm_sqr(self) -> DoubleDouble {
        self.re.sqr() + self.im.sqr()
    }

    pub fn abs(self) -> DoubleDouble {
        self.norm_sqr().sqrt()
    }

    pub fn arg(self) -> DoubleDouble {
        DoubleDouble::atan2(self.im, self.re)
    }

    pub fn conj(self) -> Self {
        Self::new(self.re, -self.im)
    }

    pub fn scale(self, s: DoubleDouble) -> Self {
        Self::new(self.re * s, self.im * s)
    }

    /// `exp(i*phi)`.
    pub fn cis(phi: DoubleDouble) -> Self {
        let (s, c) = phi.sin_cos();
        Self::new(c, s)
    }

    pub fn exp(self) -> Self {
        Self::cis(self.im).scale(self.re.exp())
    }

    /// Principal logarithm.
    pub fn ln(self) -> Self {
        Self::new(self.norm_sqr().ln().ldexp(-1), self.arg())
    }

    /// Principal power `self^e` for real `e`.
    pub fn powf(self, e: DoubleDouble) -> Self {
        let l = self.ln();
        Self::new(l.re * e, l.im * e).exp()
    }

    pub fn to_c64(self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}

impl Add for ComplexDD {
    type Output = Self;
    fn add(self, b: Self) -> Self {
        Self::new(self.re + b.re, self.im + b.im)
    }
}

impl Sub for ComplexDD {
    type Output = Self;
    fn sub(self, b: Self) -> Self {
        Self::new(self.re - b.re, self.im - b.im)
    }
}

impl Mul for ComplexDD {
    type Output = Self;
    fn mul(self, b: Self) -> Self {
        Self::new(
            self.re * b.re - self.im * b.im,
            self.re * b.im + self.im * b.re,
        )
    }
}

impl Div for ComplexDD {
    type Output = Self;
    fn div(self, b: Self) -> Self {
        let d = b.norm_sqr();
        let n = self * b.conj();
        Self::new(n.re / d, n.im / d)
    }
}

impl Neg for ComplexDD {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

impl AddAssign for ComplexDD {
    fn add_assign(&mut self, b: Self) {
        *self = *self + b;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dd(x: f64) -> DoubleDouble {
        DoubleDouble::from_f64(x)
    }

    fn rel(a: DoubleDouble, b: DoubleDouble) -> f64 {
        ((a - b) / b).to_f64().abs()
    }

    #[test]
    fn arithmetic_round_trip() {
        let third = dd(1.0) / dd(3.0);
        let back = third * dd(3.0);
        assert!((back - dd(1.0)).to_f64().abs() < 1e-31);
        let s = dd(2.0).sqrt();
        assert!((s.sqr() - dd(2.0)).to_f64().abs() < 1e-31);
    }

    #[test]
    fn exp_ln_inverse() {
        for &x in &[1e-3, 0.5, 1.0, 7.25, 60.0, 300.0] {
            let y = dd(x).ln().exp();
            assert!(rel(y, dd(x)) < 1e-30, "x={x}");
        }
        // e^1 to 32 digits
        let e = DoubleDouble::new(std::f64::consts::E, 1.445_646_891_729_250_2e-16);
        assert!(rel(dd(1.0).exp(), e) < 1e-31);
    }

    #[test]
    fn ln2_and_pi_identities() {
        assert!(rel(dd(2.0).ln(), DoubleDouble::LN_2) < 1e-31);
        let quarter = DoubleDouble::atan(dd(1.0)).mul_f64(4.0);
        assert!(rel(quarter, DoubleDouble::PI) < 1e-31);
    }

    #[test]
    fn sin_cos_pythagoras_and_reduction() {
        for &x in &[0.1, 1.0, 3.0, 10.0, 314.159, 1000.5, -77.7] {
            let (s, c) = dd(x).sin_cos();
            let one = s.sqr() + c.sqr();
            assert!((one - dd(1.0)).to_f64().abs() < 1e-30, "x={x}");
            assert!((s.to_f64() - x.sin()).abs() < 1e-13);
            assert!((c.to_f64() - x.cos()).abs() < 1e-13);
        }
        // sin(pi) is tiny
        let s = DoubleDouble::PI.sin();
        assert!(s.to_f64().abs() < 1e-31);
    }

    #[test]
    fn acos_asin_consistent() {
        for &x in &[-0.9, -0.3, 0.0, 0.2, 0.99] {
            let a = dd(x).acos();
            assert!((a.cos() - dd(x)).to_f64().abs() < 1e-30);
            let b = dd(x).asin();
            assert!((b.sin() - dd(x)).to_f64().abs() < 1e-30);
        }
    }

    #[test]
    fn rational_conversion_keeps_low_word() {
        let q = BigRational::new(1.into(), 3.into());
        let t = DoubleDouble::from_rational(&q);
        assert!((t * dd(3.0) - dd(1.0)).to_f64().abs() < 1e-32);
    }

    #[test]
    fn complex_power_matches_f64() {
        let z = ComplexDD::from_f64(0.0, 12.5);
        let p = z.powf(dd(25.0)).to_c64();
        let q = num_complex::Complex64::new(0.0, 12.5).powf(25.0);
        assert!(((p - q) / q).norm() < 1e-13);
    }
}
