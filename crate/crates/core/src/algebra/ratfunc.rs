use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::{GaussianRational, Polynomial, Scalar};
use crate::dd::{ComplexDD, DoubleDouble};
use crate::error::{Error, Result};
use crate::real::Real;

/// Ratio of polynomials kept in lowest terms with a monic denominator.
#[derive(Clone, PartialEq, Debug)]
pub struct RationalFunction<F> {
    num: Polynomial<F>,
    den: Polynomial<F>,
}

impl<F: Scalar> RationalFunction<F> {
    /// Panics if `den` is the zero polynomial.
    pub fn new(num: Polynomial<F>, den: Polynomial<F>) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        Self { num, den }.normalize()
    }

    /// Skip the gcd step; the caller guarantees `num` and `den` are coprime.
    pub(crate) fn from_coprime(num: Polynomial<F>, den: Polynomial<F>) -> Self {
        let lead = den.leading().expect("nonzero denominator").clone();
        let inv = F::one() / lead;
        Self {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    pub fn from_poly(p: Polynomial<F>) -> Self {
        Self {
            num: p,
            den: Polynomial::one(),
        }
    }

    pub fn zero() -> Self {
        Self::from_poly(Polynomial::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(Polynomial::one())
    }

    pub fn constant(c: F) -> Self {
        Self::from_poly(Polynomial::constant(c))
    }

    pub fn x() -> Self {
        Self::from_poly(Polynomial::x())
    }

    pub fn num(&self) -> &Polynomial<F> {
        &self.num
    }

    pub fn den(&self) -> &Polynomial<F> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Cancel the gcd and make the denominator monic.
    pub fn normalize(self) -> Self {
        if self.num.is_zero() {
            return Self::zero();
        }
        let g = F::poly_gcd(&self.num, &self.den);
        let (mut num, mut den) = if g.degree() == Some(0) {
            (self.num, self.den)
        } else {
            (
                self.num.exact_div(&g).expect("gcd divides numerator"),
                self.den.exact_div(&g).expect("gcd divides denominator"),
            )
        };
        let lead = den.leading().expect("nonzero denominator").clone();
        if !lead.is_one() {
            let inv = F::one() / lead;
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        Self { num, den }
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn derivative(&self) -> Self {
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        Self::new(n, &self.den * &self.den)
    }

    pub fn powi(&self, n: u32) -> Self {
        Self {
            num: self.num.pow(n),
            den: self.den.pow(n),
        }
    }

    /// Value at `x`, or `None` at a pole.
    pub fn eval(&self, x: &F) -> Option<F> {
        let d = self.den.eval(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(x) / d)
        }
    }

    pub fn recip(&self) -> Self {
        Self::new(self.den.clone(), self.num.clone())
    }
}

impl<'a, F: Scalar> Add<&'a RationalFunction<F>> for &'a RationalFunction<F> {
    type Output = RationalFunction<F>;
    fn add(self, o: &RationalFunction<F>) -> RationalFunction<F> {
        if self.den == o.den {
            return RationalFunction::new(&self.num + &o.num, self.den.clone());
        }
        RationalFunction::new(
            &(&self.num * &o.den) + &(&o.num * &self.den),
            &self.den * &o.den,
        )
    }
}

impl<'a, F: Scalar> Sub<&'a RationalFunction<F>> for &'a RationalFunction<F> {
    type Output = RationalFunction<F>;
    fn sub(self, o: &RationalFunction<F>) -> RationalFunction<F> {
        self + &(-o)
    }
}

impl<'a, F: Scalar> Mul<&'a RationalFunction<F>> for &'a RationalFunction<F> {
    type Output = RationalFunction<F>;
    fn mul(self, o: &RationalFunction<F>) -> RationalFunction<F> {
        RationalFunction::new(&self.num * &o.num, &self.den * &o.den)
    }
}

impl<'a, F: Scalar> Div<&'a RationalFunction<F>> for &'a RationalFunction<F> {
    type Output = RationalFunction<F>;
    fn div(self, o: &RationalFunction<F>) -> RationalFunction<F> {
        assert!(!o.is_zero(), "division by the zero rational function");
        RationalFunction::new(&self.num * &o.den, &self.den * &o.num)
    }
}

impl<F: Scalar> Neg for &RationalFunction<F> {
    type Output = RationalFunction<F>;
    fn neg(self) -> RationalFunction<F> {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl<F: Scalar> Add for RationalFunction<F> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        &self + &o
    }
}

impl<F: Scalar> Sub for RationalFunction<F> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        &self - &o
    }
}

impl<F: Scalar> Mul for RationalFunction<F> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        &self * &o
    }
}

impl<F: Scalar> Div for RationalFunction<F> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        &self / &o
    }
}

impl<F: Scalar> Neg for RationalFunction<F> {
    type Output = Self;
    fn neg(self) -> Self {
        -&self
    }
}

pub(crate) fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        let bits = q.numer().bits() as i64 - q.denom().bits() as i64;
        if bits > 0 {
            if q.is_negative() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            }
        } else {
            0.0
        }
    })
}

impl RationalFunction<BigRational> {
    /// Build from small integer coefficient lists, low degree first.
    pub fn from_ints(num: &[i64], den: &[i64]) -> Self {
        Self::new(Polynomial::from_ints(num), Polynomial::from_ints(den))
    }

    /// Numerator degree strictly below denominator degree (or zero).
    pub fn is_proper(&self) -> bool {
        self.num.degree() < self.den.degree()
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.num.eval_f64(x) / self.den.eval_f64(x)
    }

    pub fn eval_c64(&self, z: Complex64) -> Complex64 {
        let horner = |p: &Polynomial<BigRational>| {
            let mut acc = Complex64::new(0.0, 0.0);
            for c in p.coeffs().iter().rev() {
                acc = acc * z + rational_to_f64(c);
            }
            acc
        };
        horner(&self.num) / horner(&self.den)
    }

    pub fn to_numeric<R: Real>(&self) -> NumericRatFunc<R> {
        NumericRatFunc {
            num: self.num.coeffs().iter().map(R::from_rational).collect(),
            den: self.den.coeffs().iter().map(R::from_rational).collect(),
        }
    }

    /// Text form with the denominator written as `c*base^p` when possible,
    /// e.g. `z*(3*z + 2)/(2*(z - 1)^4)`.
    pub fn pretty(&self, var: &str, base: &Polynomial<BigRational>) -> String {
        if self.num.is_zero() {
            return "0".into();
        }
        let (p, rest) = self.den.strip_factor(base);
        let (nc, nprim) = self.num.content_primitive();
        let (dc, dprim) = rest.content_primitive();
        let c = nc / dc;
        // powers of the variable in the numerator
        let mut v = 0;
        while nprim.coeff(v).is_zero() {
            v += 1;
        }
        let core = Polynomial::new(nprim.coeffs()[v..].to_vec());
        let mut factors: Vec<String> = Vec::new();
        match v {
            0 => {}
            1 => factors.push(var.to_string()),
            _ => factors.push(format!("{var}^{v}")),
        }
        if core.degree() != Some(0) || factors.is_empty() {
            let s = core.pretty(var);
            if core.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 && !factors.is_empty() {
                factors.push(format!("({s})"));
            } else if core.degree() != Some(0) || !core.coeffs()[0].is_one() || factors.is_empty() {
                factors.push(s);
            }
        }
        let mut numtext = factors.join("*");
        let cn = c.numer().abs();
        if !cn.is_one() {
            numtext = format!("{cn}*{numtext}");
        }
        if c.is_negative() {
            numtext = format!("-{numtext}");
        }
        let mut den_factors: Vec<String> = Vec::new();
        let cd = c.denom().clone();
        if !num_traits::One::is_one(&cd) {
            den_factors.push(cd.to_string());
        }
        if dprim.degree() != Some(0) {
            den_factors.push(format!("({})", dprim.pretty(var)));
        }
        if p > 0 {
            let b = format!("({})", base.pretty(var));
            den_factors.push(if p == 1 { b } else { format!("{b}^{p}") });
        }
        match den_factors.len() {
            0 => numtext,
            1 => format!("{numtext}/{}", den_factors[0]),
            _ => format!("{numtext}/({})", den_factors.join("*")),
        }
    }
}

impl fmt::Display for RationalFunction<BigRational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})/({})", self.num.pretty("z"), self.den.pretty("z"))
    }
}

impl Serialize for RationalFunction<BigRational> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("RationalFunction", 2)?;
        st.serialize_field("num", &self.num)?;
        st.serialize_field("den", &self.den)?;
        st.end()
    }
}

/// Rational function with coefficients pre-converted to a floating type.
#[derive(Clone, Debug)]
pub struct NumericRatFunc<R> {
    num: Vec<R>,
    den: Vec<R>,
}

impl<R: Real> NumericRatFunc<R> {
    pub fn eval(&self, x: R) -> R {
        let horner = |c: &[R]| {
            let mut acc = R::zero();
            for &a in c.iter().rev() {
                acc = acc * x + a;
            }
            acc
        };
        horner(&self.num) / horner(&self.den)
    }
}

impl NumericRatFunc<f64> {
    /// Complex evaluation; for `|z| > 1` both polynomials are evaluated in
    /// `1/z` so large arguments do not overflow.
    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        if z.norm() <= 1.0 {
            let horner = |c: &[f64]| {
                let mut acc = Complex64::new(0.0, 0.0);
                for &a in c.iter().rev() {
                    acc = acc * z + a;
                }
                acc
            };
            return horner(&self.num) / horner(&self.den);
        }
        let w = z.inv();
        let reversed = |c: &[f64]| {
            let mut acc = Complex64::new(0.0, 0.0);
            for &a in c {
                acc = acc * w + a;
            }
            acc
        };
        let shift = self.num.len() as i32 - self.den.len() as i32;
        reversed(&self.num) / reversed(&self.den) * z.powi(shift)
    }
}

impl NumericRatFunc<DoubleDouble> {
    pub fn eval_complex(&self, z: ComplexDD) -> ComplexDD {
        let horner = |c: &[DoubleDouble]| {
            let mut acc = ComplexDD::default();
            for &a in c.iter().rev() {
                acc = acc * z + ComplexDD::new(a, DoubleDouble::ZERO);
            }
            acc
        };
        horner(&self.num) / horner(&self.den)
    }
}

/// Exact rational function bundled with its f64 and double-double forms.
#[derive(Clone, Debug)]
pub struct EvalRatFunc {
    pub exact: RationalFunction<BigRational>,
    pub f64: NumericRatFunc<f64>,
    pub dd: NumericRatFunc<DoubleDouble>,
}

impl EvalRatFunc {
    pub fn new(exact: RationalFunction<BigRational>) -> Self {
        Self {
            f64: exact.to_numeric(),
            dd: exact.to_numeric(),
            exact,
        }
    }

    pub fn eval<R: Real>(&self, x: R) -> R {
        R::pick(self).eval(x)
    }
}

/// `rational_part + log_coeff * ln(log_arg)`.
#[derive(Clone, PartialEq, Debug)]
pub struct LogRational {
    pub rational_part: RationalFunction<BigRational>,
    pub log_coeff: BigRational,
    pub log_arg: Polynomial<BigRational>,
}

impl LogRational {
    pub fn rational(r: RationalFunction<BigRational>) -> Self {
        Self {
            rational_part: r,
            log_coeff: BigRational::zero(),
            log_arg: Polynomial::one(),
        }
    }

    pub fn is_rational(&self) -> bool {
        self.log_coeff.is_zero()
    }

    /// Principal-branch value at complex `z`.
    pub fn eval_c64(&self, z: Complex64) -> Complex64 {
        let mut v = self.rational_part.eval_c64(z);
        if !self.log_coeff.is_zero() {
            let mut arg = Complex64::new(0.0, 0.0);
            for c in self.log_arg.coeffs().iter().rev() {
                arg = arg * z + rational_to_f64(c);
            }
            v += arg.ln() * rational_to_f64(&self.log_coeff);
        }
        v
    }
}

impl fmt::Display for LogRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let zm1 = Polynomial::from_ints(&[-1, 1]);
        if self.log_coeff.is_zero() {
            return f.write_str(&self.rational_part.pretty("z", &zm1));
        }
        let lc = &self.log_coeff;
        let log = format!("{lc}*ln({})", self.log_arg.pretty("z"));
        if self.rational_part.is_zero() {
            f.write_str(&log)
        } else {
            write!(f, "{} + {log}", self.rational_part.pretty("z", &zm1))
        }
    }
}

/// Antiderivative, vanishing at 0, of an integrand whose only poles are at
/// `t = 1`. A pole at 0 makes the integral from 0 diverge. A simple pole at
/// 1 produces a `ln(1 - z)` term, which is only legitimate for `s = 0`.
pub fn integrate_e_form(f: &RationalFunction<BigRational>, s: usize) -> Result<LogRational> {
    type P = Polynomial<BigRational>;
    let x = P::x();
    let zm1 = P::from_ints(&[-1, 1]);
    let (e0, rest) = f.den().strip_factor(&x);
    if e0 > 0 {
        return Err(Error::NonIntegrableForm(format!(
            "pole of order {e0} at t = 0"
        )));
    }
    let (e1, rest) = rest.strip_factor(&zm1);
    if rest.degree() != Some(0) {
        return Err(Error::NonIntegrableForm(format!(
            "denominator has roots other than 0 and 1: {}",
            f.den()
        )));
    }
    let e1 = e1 as usize;
    // numerator expanded about t = 1: N(1 + u) = sum n_j u^j
    let n = f.num().compose(&P::from_ints(&[1, 1])).scale(&(BigRational::one() / rest.coeff(0)));
    let mut log_coeff = BigRational::zero();
    let mut pu = Vec::new();
    for (j, c) in n.coeffs().iter().enumerate() {
        let e = j as i64 - e1 as i64 + 1;
        if e == 0 {
            log_coeff = c.clone();
            pu.push(BigRational::zero());
        } else {
            pu.push(c / BigRational::from_int(e));
        }
    }
    if s >= 1 && !log_coeff.is_zero() {
        return Err(Error::NonIntegrableForm(format!(
            "simple pole at t = 1 with residue {log_coeff} for s = {s}"
        )));
    }
    // rational part P(u) * u^(1 - e1), back in z
    let pz = P::new(pu).compose(&zm1);
    let mut rational = if e1 >= 1 {
        RationalFunction::new(pz, zm1.pow(e1 as u32 - 1))
    } else {
        RationalFunction::from_poly(&pz * &zm1)
    };
    let at0 = rational
        .eval(&BigRational::zero())
        .expect("rational part is regular at 0");
    rational = &rational - &RationalFunction::constant(at0);
    Ok(LogRational {
        rational_part: rational,
        log_coeff,
        log_arg: P::from_ints(&[1, -1]),
    })
}

/// Split `r(-iθ)` into real and imaginary parts, both rational in θ.
pub fn substitute_minus_i_theta(
    r: &RationalFunction<BigRational>,
) -> (RationalFunction<BigRational>, RationalFunction<BigRational>) {
    let lift = |p: &Polynomial<BigRational>| -> Polynomial<GaussianRational> {
        Polynomial::new(
            p.coeffs()
                .iter()
                .enumerate()
                .map(|(k, c)| {
                    let z = BigRational::zero();
                    match k % 4 {
                        0 => GaussianRational::new(c.clone(), z),
                        1 => GaussianRational::new(z, -c.clone()),
                        2 => GaussianRational::new(-c.clone(), z),
                        _ => GaussianRational::new(z, c.clone()),
                    }
                })
                .collect(),
        )
    };
    let n = lift(r.num());
    let d = lift(r.den());
    let dc = d.map(|c| c.conj());
    let top = &n * &dc;
    let bottom = (&d * &dc).map(|c| c.re.clone());
    let re = top.map(|c| c.re.clone());
    let im = top.map(|c| c.im.clone());
    (
        RationalFunction::new(re, bottom.clone()),
        RationalFunction::new(im, bottom),
    )
}
