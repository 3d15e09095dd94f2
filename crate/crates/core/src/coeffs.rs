//! Liouville–Green coefficients for the incomplete gamma equation.
//!
//! `F[s]` and `E[s]` are the coefficient functions of the recessive-at-0 /
//! recessive-at-infinity family, `L[s]` and `R[s]` their imaginary and real
//! parts on the ray `z = -iθ` (with the `(-1)^s` sign absorbed).

use std::sync::{Arc, OnceLock};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::algebra::{
    int, integrate_e_form, rat, substitute_minus_i_theta, EvalRatFunc, LogRational, Polynomial,
    PowerFraction, RationalFunction,
};
use crate::dd::{ComplexDD, DoubleDouble};
use crate::error::Result;
use crate::real::Real;

type Q = BigRational;
type P = Polynomial<Q>;
type RF = RationalFunction<Q>;

pub const DEFAULT_MAX_ORDER: usize = 12;

fn zm1() -> P {
    P::from_ints(&[-1, 1])
}

/// `f0 = (z-1)^2 / (4 z^2)`.
pub fn f0() -> RF {
    RF::new(zm1().pow(2), P::from_ints(&[0, 0, 4]))
}

/// `f1 = 1 / (2 z)`.
pub fn f1() -> RF {
    RF::from_ints(&[1], &[0, 2])
}

/// `g = -1 / (4 z^2)`.
pub fn g() -> RF {
    RF::from_ints(&[-1], &[0, 0, 4])
}

/// `φ(z) = z/(z-1)^2`.
pub fn phi() -> RF {
    RF::new(P::x(), zm1().pow(2))
}

/// `ψ(z) = -z(z+2)/(z-1)^4`.
pub fn psi() -> RF {
    RF::new(P::from_ints(&[0, -2, -1]), zm1().pow(4))
}

/// Integrand `(t-1) F(t) / (2t)` whose antiderivative from 0 is `E`.
fn e_integrand(f: &RF) -> RF {
    f * &RF::new(zm1(), P::from_ints(&[0, 2]))
}

/// Run `F_{s+1} = z/(1-z) F_s' - 1/2 Σ F_j F_{s-j}` from `f0` up to
/// `max_order`, with `F_1 = z/(1-z) F_0' - F_0^2/2 + ψ/2`.
fn run_recursion(first: &PowerFraction, psi: &PowerFraction, max_order: usize) -> Vec<PowerFraction> {
    let base = Arc::new(zm1());
    let factor = PowerFraction::new(P::from_ints(&[0, -1]), 1, base);
    let half = rat(1, 2);
    let mut f: Vec<PowerFraction> = vec![first.clone()];
    for s in 0..max_order {
        let mut conv = first.zero_like();
        for j in 0..=s {
            conv = &conv + &(&f[j] * &f[s - j]);
        }
        let mut next = &(&factor * &f[s].derivative()) - &conv.scale(&half);
        if s == 0 {
            next = &next + &psi.scale(&half);
        }
        f.push(next);
    }
    f
}

/// Memoized coefficient table up to `max_order`.
#[derive(Clone, Debug)]
pub struct LGCoefficientTable {
    max_order: usize,
    f: Vec<EvalRatFunc>,
    e: Vec<LogRational>,
    e_num: Vec<EvalRatFunc>,
    l: Vec<EvalRatFunc>,
    r: Vec<EvalRatFunc>,
}

impl LGCoefficientTable {
    pub fn new(max_order: usize) -> Result<Self> {
        let max_order = max_order.max(1);
        let base = Arc::new(zm1());
        let to_pf = |r: &RF| PowerFraction::from_ratfunc(r, base.clone()).expect("power of z - 1");
        let first = to_pf(&-phi());
        let f: Vec<EvalRatFunc> = run_recursion(&first, &to_pf(&psi()), max_order)
            .iter()
            .map(|p| EvalRatFunc::new(p.to_ratfunc_irreducible_base()))
            .collect();
        let mut e = Vec::with_capacity(max_order + 1);
        let mut e_num = Vec::with_capacity(max_order + 1);
        let mut l = vec![EvalRatFunc::new(RF::zero())];
        let mut r = vec![EvalRatFunc::new(RF::zero())];
        for (s, fs) in f.iter().enumerate() {
            let es = integrate_e_form(&e_integrand(&fs.exact), s)?;
            e_num.push(EvalRatFunc::new(es.rational_part.clone()));
            if s >= 1 {
                let (re, im) = substitute_minus_i_theta(&es.rational_part);
                let sign = if s % 2 == 0 { int(1) } else { int(-1) };
                r.push(EvalRatFunc::new(re.scale(&sign)));
                l.push(EvalRatFunc::new(im.scale(&sign)));
            }
            e.push(es);
        }
        Ok(Self {
            max_order,
            f,
            e,
            e_num,
            l,
            r,
        })
    }

    /// Shared table of order [`DEFAULT_MAX_ORDER`].
    pub fn shared() -> &'static Self {
        static TABLE: OnceLock<LGCoefficientTable> = OnceLock::new();
        TABLE.get_or_init(|| Self::new(DEFAULT_MAX_ORDER).expect("coefficient generation"))
    }

    /// The shared table when it is large enough, otherwise a fresh one.
    pub fn with_order(order: usize) -> Result<std::borrow::Cow<'static, Self>> {
        if order <= DEFAULT_MAX_ORDER {
            Ok(std::borrow::Cow::Borrowed(Self::shared()))
        } else {
            Ok(std::borrow::Cow::Owned(Self::new(order)?))
        }
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    /// `F⁻_s`.
    pub fn f(&self, s: usize) -> &RF {
        &self.f[s].exact
    }

    pub fn f_complex(&self, s: usize, z: Complex64) -> Complex64 {
        self.f[s].f64.eval_complex(z)
    }

    /// `E⁻_s(z)` in f64 complex arithmetic.
    pub fn e_complex(&self, s: usize, z: Complex64) -> Complex64 {
        let v = self.e_num[s].f64.eval_complex(z);
        let c = &self.e[s].log_coeff;
        if c.is_zero() {
            v
        } else {
            v + (Complex64::new(1.0, 0.0) - z).ln() * DoubleDouble::from_rational(c).to_f64()
        }
    }

    /// `E⁻_s(z)` in double-double complex arithmetic.
    pub fn e_complex_dd(&self, s: usize, z: ComplexDD) -> ComplexDD {
        let v = self.e_num[s].dd.eval_complex(z);
        let c = &self.e[s].log_coeff;
        if c.is_zero() {
            v
        } else {
            let l = (ComplexDD::new(DoubleDouble::ONE, DoubleDouble::ZERO) - z).ln();
            v + l.scale(DoubleDouble::from_rational(c))
        }
    }

    /// `E⁻_s`; `E⁻_0 = -ln(1-z)/2`, the rest are rational.
    pub fn e(&self, s: usize) -> &LogRational {
        &self.e[s]
    }

    /// `L_s(θ) = (-1)^s Im E⁻_s(-iθ)` for `s >= 1`.
    pub fn l(&self, s: usize) -> &RF {
        assert!(s >= 1, "L_s is defined for s >= 1");
        &self.l[s].exact
    }

    /// `R_s(θ) = (-1)^s Re E⁻_s(-iθ)` for `s >= 1`.
    pub fn r(&self, s: usize) -> &RF {
        assert!(s >= 1, "R_s is defined for s >= 1");
        &self.r[s].exact
    }

    pub fn l_eval<R: Real>(&self, s: usize, theta: R) -> R {
        self.l[s].eval(theta)
    }

    pub fn r_eval<R: Real>(&self, s: usize, theta: R) -> R {
        self.r[s].eval(theta)
    }

    /// Truncated sums `(Σ_{s=1}^n R_s/a^s, Σ_{s=1}^n L_s/a^s)`.
    pub fn eps_sums<R: Real>(&self, a: R, theta: R, n: usize) -> (R, R) {
        let n = n.min(self.max_order);
        let inv = R::one() / a;
        let mut p = R::one();
        let (mut er, mut ei) = (R::zero(), R::zero());
        for s in 1..=n {
            p = p * inv;
            er = er + self.r[s].eval(theta) * p;
            ei = ei + self.l[s].eval(theta) * p;
        }
        (er, ei)
    }
}

/// `F⁻_s` from the shared table (or a fresh one for large `s`).
pub fn gen_f(s: usize) -> Result<RF> {
    Ok(LGCoefficientTable::with_order(s)?.f(s).clone())
}

pub fn gen_e(s: usize) -> Result<LogRational> {
    Ok(LGCoefficientTable::with_order(s)?.e(s).clone())
}

pub fn gen_l(s: usize) -> Result<RF> {
    Ok(LGCoefficientTable::with_order(s.max(1))?.l(s).clone())
}

pub fn gen_r(s: usize) -> Result<RF> {
    Ok(LGCoefficientTable::with_order(s.max(1))?.r(s).clone())
}

/// Outcome of [`verify_plus_family_zero`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PlusFamilyCheck {
    pub ok: bool,
    pub first_offending: Option<usize>,
}

/// Run the recursion for the other LG solution and confirm every
/// coefficient vanishes up to `max_order`.
///
/// That solution is the elementary `z^{(1-a)/2} e^{az/2}`. Its exponent,
/// measured against `f0^{-1/4} e^{aξ}`, is computed independently and
/// converted to the `F` normalization; `F⁺_s` is the difference between
/// the recursion output and that exact exponent, and `E⁺_s` its integral.
pub fn verify_plus_family_zero(max_order: usize) -> PlusFamilyCheck {
    let base = Arc::new(zm1());
    let to_pf = |r: &RF| PowerFraction::from_ratfunc(r, base.clone()).expect("power of z - 1");
    // d/dz ln(z^{(1-a)/2} e^{az/2}) - d/dz(-ln(f0)/4 + aξ), split by powers of a
    let f0v = f0();
    let log_f0 = &f0v.derivative() / &f0v;
    let quarter = RF::constant(rat(1, 4));
    let half_over_z = RF::from_ints(&[1], &[0, 2]);
    let xi_prime = RF::new(zm1(), P::from_ints(&[0, 2]));
    let exp_a0 = &half_over_z + &(&quarter * &log_f0);
    let exp_a1 = &(&RF::constant(rat(1, 2)) - &half_over_z) - &xi_prime;
    // E' = (t-1) F / (2t)  =>  F = 2t/(t-1) E'
    let to_f = RF::new(P::from_ints(&[0, 2]), zm1());
    let exact_f0 = &to_f * &exp_a0;
    if !exp_a1.is_zero() {
        return PlusFamilyCheck {
            ok: false,
            first_offending: Some(0),
        };
    }
    let g = run_recursion(&to_pf(&phi()), &to_pf(&psi()), max_order);
    for (s, gs) in g.iter().enumerate() {
        let exact = if s == 0 { exact_f0.clone() } else { RF::zero() };
        let fp = &gs.to_ratfunc() - &exact;
        let ep = match integrate_e_form(&e_integrand(&fp), s) {
            Ok(e) => e,
            Err(_) => {
                return PlusFamilyCheck {
                    ok: false,
                    first_offending: Some(s),
                }
            }
        };
        if !fp.is_zero() || !ep.rational_part.is_zero() || !ep.log_coeff.is_zero() {
            return PlusFamilyCheck {
                ok: false,
                first_offending: Some(s),
            };
        }
    }
    PlusFamilyCheck {
        ok: true,
        first_offending: None,
    }
}

/// Order of the pole of `r` at `z = 1`.
pub fn pole_order_at_one(r: &RF) -> u32 {
    r.den().strip_factor(&zm1()).0
}
