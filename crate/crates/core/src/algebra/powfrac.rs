use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;

use super::{Polynomial, RationalFunction};

type P = Polynomial<BigRational>;

/// `num / base^pow` for a fixed polynomial `base`.
///
/// Sums and products never need a gcd, which keeps long symbolic
/// recursions cheap when every denominator is a power of one polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerFraction {
    num: P,
    pow: u32,
    base: Arc<P>,
}

impl PowerFraction {
    pub fn new(num: P, pow: u32, base: Arc<P>) -> Self {
        Self { num, pow, base }.reduce()
    }

    pub fn from_poly(num: P, base: Arc<P>) -> Self {
        Self::new(num, 0, base)
    }

    /// Convert a rational function whose denominator is `c * base^p`.
    pub fn from_ratfunc(r: &RationalFunction<BigRational>, base: Arc<P>) -> Option<Self> {
        let (p, rest) = r.den().strip_factor(&base);
        if rest.degree() != Some(0) {
            return None;
        }
        let c = rest.coeff(0);
        Some(Self::new(r.num().scale(&(BigRational::from_integer(1.into()) / c)), p, base))
    }

    pub fn zero_like(&self) -> Self {
        Self {
            num: P::zero(),
            pow: 0,
            base: self.base.clone(),
        }
    }

    pub fn one_like(&self) -> Self {
        Self {
            num: P::one(),
            pow: 0,
            base: self.base.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn num(&self) -> &P {
        &self.num
    }

    pub fn pow(&self) -> u32 {
        self.pow
    }

    fn reduce(mut self) -> Self {
        if self.num.is_zero() {
            self.pow = 0;
            return self;
        }
        while self.pow > 0 {
            match self.num.exact_div(&self.base) {
                Some(q) => {
                    self.num = q;
                    self.pow -= 1;
                }
                None => break,
            }
        }
        self
    }

    fn lift(&self, pow: u32) -> P {
        &self.num * &self.base.pow(pow - self.pow)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return self.zero_like();
        }
        Self {
            num: self.num.scale(c),
            pow: self.pow,
            base: self.base.clone(),
        }
    }

    /// `(p / b^e)' = (p' b - e p b') / b^(e+1)`.
    pub fn derivative(&self) -> Self {
        if self.pow == 0 {
            return Self::new(self.num.derivative(), 0, self.base.clone());
        }
        let e = BigRational::from_integer((self.pow as i64).into());
        let top = &(&self.num.derivative() * &self.base)
            - &(&self.num * &self.base.derivative()).scale(&e);
        Self::new(top, self.pow + 1, self.base.clone())
    }

    pub fn to_ratfunc(&self) -> RationalFunction<BigRational> {
        RationalFunction::new(self.num.clone(), self.base.pow(self.pow))
    }

    /// Like [`to_ratfunc`](Self::to_ratfunc) but skips the gcd. Only valid
    /// when `base` is irreducible over Q, since then the reduced numerator
    /// shares no factor with `base^pow`.
    pub fn to_ratfunc_irreducible_base(&self) -> RationalFunction<BigRational> {
        if self.num.is_zero() {
            return RationalFunction::zero();
        }
        RationalFunction::from_coprime(self.num.clone(), self.base.pow(self.pow))
    }
}

impl<'a> Add<&'a PowerFraction> for &'a PowerFraction {
    type Output = PowerFraction;
    fn add(self, o: &PowerFraction) -> PowerFraction {
        debug_assert_eq!(self.base, o.base);
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let pow = self.pow.max(o.pow);
        PowerFraction::new(&self.lift(pow) + &o.lift(pow), pow, self.base.clone())
    }
}

impl<'a> Sub<&'a PowerFraction> for &'a PowerFraction {
    type Output = PowerFraction;
    fn sub(self, o: &PowerFraction) -> PowerFraction {
        self + &(-o)
    }
}

impl<'a> Mul<&'a PowerFraction> for &'a PowerFraction {
    type Output = PowerFraction;
    fn mul(self, o: &PowerFraction) -> PowerFraction {
        debug_assert_eq!(self.base, o.base);
        if self.is_zero() || o.is_zero() {
            return self.zero_like();
        }
        PowerFraction::new(&self.num * &o.num, self.pow + o.pow, self.base.clone())
    }
}

impl Neg for &PowerFraction {
    type Output = PowerFraction;
    fn neg(self) -> PowerFraction {
        PowerFraction {
            num: -&self.num,
            pow: self.pow,
            base: self.base.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn agrees_with_rational_functions() {
        let base = Arc::new(P::from_ints(&[1, 0, 1]));
        let a = PowerFraction::new(P::from_ints(&[0, 1]), 1, base.clone());
        let b = PowerFraction::new(P::from_ints(&[2, 0, -1]), 2, base.clone());
        let (ra, rb) = (a.to_ratfunc(), b.to_ratfunc());
        assert_eq!((&a + &b).to_ratfunc(), &ra + &rb);
        assert_eq!((&a * &b).to_ratfunc(), &ra * &rb);
        assert_eq!(a.derivative().to_ratfunc(), ra.derivative());
        assert_eq!((&a + &b).to_ratfunc_irreducible_base(), &ra + &rb);
        assert_eq!(b.derivative().to_ratfunc(), rb.derivative());
        let back = PowerFraction::from_ratfunc(&rb, base).unwrap();
        assert_eq!(back, b);
    }

    #[test]
    fn reduces_common_base_factors() {
        let base = Arc::new(P::from_ints(&[-1, 1]));
        let a = PowerFraction::new(&P::from_ints(&[-1, 1]) * &P::from_ints(&[3, 1]), 3, base);
        assert_eq!(a.pow(), 2);
        assert_eq!(a.num(), &P::from_ints(&[3, 1]));
    }
}
