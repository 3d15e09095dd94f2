//! Zeros of the lower-case integrals ci, si and ti.
//!
//! With `φ(θ) = aθ - arctan θ` the leading terms solve
//! `cos(φ - πα) = χ_α(a, θ)`, where
//! `χ_α = Γ(a+1) cos(π(a - 2α)/2) √(1+θ²) / (aθ)^a`; `α = 0` gives ci and
//! `α = 1/2` gives si (`χ_{1/2} = σ`).

use num_rational::BigRational;
use serde::Serialize;

use super::leading::{check_a, ZeroExpansion};
use super::ZeroFamily;
use crate::algebra::{int, Polynomial, RationalFunction};
use crate::coeffs::LGCoefficientTable;
use crate::dd::DoubleDouble;
use crate::error::{Error, Result};
use crate::gamma::ln_gamma_dd;
use crate::gti::Gti;
use crate::real::Real;

type D = DoubleDouble;

/// Threshold on `|Sx - C|` below which the tilde coefficients are not used.
pub const DEGENERACY_TAU: f64 = 0.1;

/// `|cos(π(a-2α)/2)|` below which the lower-case machinery is not used.
pub const TRIG_ZERO: f64 = 1e-14;

/// Lower bound on `|cos(πa/2)|` for the degeneracy audit.
pub const DEGENERACY_DELTA: f64 = 0.1;

/// Largest `K` with closed-form tilde coefficients.
pub const TILDE_K_MAX: usize = 5;

/// `sign * exp(log_abs)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SignedLog {
    pub sign: f64,
    pub log_abs: f64,
}

impl SignedLog {
    /// The value, or `±∞` when it overflows.
    pub fn value(&self) -> f64 {
        if self.sign == 0.0 {
            0.0
        } else if self.log_abs > 709.0 {
            self.sign * f64::INFINITY
        } else {
            self.sign * self.log_abs.exp()
        }
    }
}

/// `cos(π(a - 2α)/2)` in double-double.
fn trig_factor(a: f64, alpha: f64) -> D {
    (D::FRAC_PI_2 * (D::from_f64(a) - D::from_f64(2.0 * alpha))).cos()
}

/// Pieces of `χ_α(a, ·)` that do not depend on θ.
#[derive(Clone, Copy, Debug)]
struct Chi {
    a: f64,
    sign: f64,
    /// `ln Γ(a+1) + ln|trig|`
    head: f64,
}

impl Chi {
    fn new(a: f64, alpha: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::InvalidArgument(format!("a must be positive, got {a}")));
        }
        let t = trig_factor(a, alpha).to_f64();
        if t.abs() < TRIG_ZERO {
            return Err(Error::TrigZero { a });
        }
        let head = ln_gamma_dd(D::from_f64(a) + D::ONE).to_f64() + t.abs().ln();
        Ok(Self {
            a,
            sign: t.signum(),
            head,
        })
    }

    fn log_abs(&self, x: f64) -> f64 {
        self.head + x.hypot(1.0).ln() - self.a * (self.a * x).ln()
    }

    fn at(&self, x: f64) -> SignedLog {
        SignedLog {
            sign: self.sign,
            log_abs: self.log_abs(x),
        }
    }

    fn value(&self, x: f64) -> f64 {
        self.at(x).value()
    }

    /// Root of `|χ_α(a, x)| = 1`; `ln|χ|` decreases for `a > 1`.
    fn unit_crossing(&self) -> Result<f64> {
        let (mut lo, mut hi) = (1e-300f64, 1.0f64);
        while self.log_abs(hi) > 0.0 {
            lo = hi;
            hi *= 2.0;
            if hi > 1e300 {
                return Err(Error::BracketFailure("|χ| never drops below 1".into()));
            }
        }
        for _ in 0..2000 {
            let mid = if hi / lo > 4.0 { (lo * hi).sqrt() } else { 0.5 * (lo + hi) };
            if mid <= lo || mid >= hi {
                break;
            }
            if self.log_abs(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(hi)
    }
}

/// `χ(a, θ) = Γ(a+1) cos(πa/2) √(θ²+1) / (aθ)^a`.
pub fn chi(a: f64, theta: f64) -> Result<SignedLog> {
    chi_alpha(a, theta, 0.0)
}

/// `σ(a, θ) = Γ(a+1) sin(πa/2) √(θ²+1) / (aθ)^a`.
pub fn sigma(a: f64, theta: f64) -> Result<SignedLog> {
    chi_alpha(a, theta, 0.5)
}

/// `χ_α(a, θ) = Γ(a+1) cos(π(a-2α)/2) √(θ²+1) / (aθ)^a`.
pub fn chi_alpha(a: f64, theta: f64, alpha: f64) -> Result<SignedLog> {
    if !(theta > 0.0 && theta.is_finite()) {
        return Err(Error::InvalidArgument(format!("theta must be positive, got {theta}")));
    }
    Ok(Chi::new(a, alpha)?.at(theta))
}

/// Leading term of a lower-case zero.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LowerLeading {
    pub m: u32,
    pub root: f64,
    /// `cos(φ - πα)` at the root, equal to `χ_α`.
    pub c: f64,
    /// `sin(φ - πα)` at the root.
    pub s: f64,
    /// `j` with `φ - πα ∈ [(j-1)π, jπ]`.
    pub branch: u32,
}

impl LowerLeading {
    /// `|S x - C|`, small near a degenerate zero.
    pub fn gap(&self) -> f64 {
        (self.s * self.root - self.c).abs()
    }
}

fn phase(a: f64, x: f64) -> f64 {
    a * x - x.atan()
}

/// Residual of `φ - πα = (-1)^{j-1} arccos χ_α + 2⌊j/2⌋π` at `x`.
pub fn branch_residual(a: f64, alpha: f64, x: f64, branch: u32) -> Result<f64> {
    let chi = Chi::new(a, alpha)?.value(x);
    if chi.abs() > 1.0 {
        return Err(Error::InvalidArgument(format!("|χ| > 1 at x = {x}")));
    }
    let sign = if branch % 2 == 1 { 1.0 } else { -1.0 };
    let rhs = sign * chi.acos() + 2.0 * (branch / 2) as f64 * std::f64::consts::PI;
    Ok(phase(a, x) - std::f64::consts::PI * alpha - rhs)
}

/// First `count` roots of `cos(φ(x) - πα) = χ_α(a, x)` in increasing order.
///
/// All roots lie in `[x₀, ∞)` where `|χ_α(a, x₀)| = 1`. The scan walks
/// from `x₀` in steps of `π/32` in the phase and refines each sign change.
pub fn lower_leadings(a: f64, alpha: f64, count: u32) -> Result<Vec<LowerLeading>> {
    check_a(a)?;
    let chi = Chi::new(a, alpha)?;
    let x0 = chi.unit_crossing()?;
    let pa = std::f64::consts::PI * alpha;
    let f = |x: f64| (phase(a, x) - pa).cos() - chi.value(x);
    let step = std::f64::consts::PI / (32.0 * (a - 1.0));
    let mut out = Vec::with_capacity(count as usize);
    let mut x1 = x0;
    let mut f1 = f(x1);
    let limit = x0 + (count as f64 + 4.0) * 64.0 * step;
    while out.len() < count as usize {
        let x2 = x1 + step;
        if x2 > limit {
            return Err(Error::BracketFailure(format!("found {} of {count} roots before x = {limit}", out.len())));
        }
        let f2 = f(x2);
        if f1 == 0.0 || f1 * f2 < 0.0 {
            let root = if f1 == 0.0 { x1 } else { refine_root(&f, x1, x2, f1, f2) };
            let ph = phase(a, root) - pa;
            let c = chi.value(root);
            let branch = (ph / std::f64::consts::PI).floor().max(0.0) as u32 + 1;
            out.push(LowerLeading {
                m: out.len() as u32 + 1,
                root,
                c,
                s: ph.sin(),
                branch,
            });
        }
        x1 = x2;
        f1 = f2;
    }
    Ok(out)
}

/// Illinois regula falsi on a sign change, to full precision.
fn refine_root(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64, mut flo: f64, mut fhi: f64) -> f64 {
    let mut last = 0i8;
    for _ in 0..200 {
        let mut x = (lo * fhi - hi * flo) / (fhi - flo);
        if !(x > lo && x < hi) {
            x = 0.5 * (lo + hi);
        }
        let fx = f(x);
        if fx == 0.0 || hi - lo <= 4.0 * f64::EPSILON * hi {
            return x;
        }
        if (fx > 0.0) == (flo > 0.0) {
            lo = x;
            flo = fx;
            if last == -1 {
                fhi *= 0.5;
            }
            last = -1;
        } else {
            hi = x;
            fhi = fx;
            if last == 1 {
                flo *= 0.5;
            }
            last = 1;
        }
    }
    0.5 * (lo + hi)
}

fn nth_leading(a: f64, alpha: f64, m: u32) -> Result<LowerLeading> {
    if m == 0 {
        return Err(Error::InvalidArgument("zero index m starts at 1".into()));
    }
    Ok(*lower_leadings(a, alpha, m)?.last().expect("m >= 1"))
}

/// `c̃_{m,0}` with `C = χ(a, c̃_{m,0})` and `S` the sine of the same phase.
pub fn solve_leading_ci_lower(a: f64, m: u32) -> Result<LowerLeading> {
    nth_leading(a, 0.0, m)
}

/// `s̃_{m,0}`; here `c = Ŝ = σ` and `s = -Ĉ` with `Ĉ = cos φ`.
pub fn solve_leading_si_lower(a: f64, m: u32) -> Result<LowerLeading> {
    nth_leading(a, 0.5, m)
}

/// Leading term of the `m`th zero of `ti(a, aθ, α)`.
pub fn solve_leading_ti_lower(a: f64, m: u32, alpha: f64) -> Result<LowerLeading> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::InvalidArgument(format!("alpha must lie in [0, 1), got {alpha}")));
    }
    nth_leading(a, alpha, m)
}

/// One term `C^cp S^sp x^e (x²+1)^p` with a sparse integer polynomial.
struct Term {
    cp: u32,
    sp: u32,
    p: u32,
    poly: &'static [(u32, i64)],
}

/// `sign x² Σ terms / (den (x²+1)^P (Sx - C)^Q)`.
struct TildeForm {
    den: i64,
    pow_base: u32,
    pow_gap: u32,
    terms: &'static [Term],
}

const fn t(cp: u32, sp: u32, p: u32, poly: &'static [(u32, i64)]) -> Term {
    Term { cp, sp, p, poly }
}

static TILDE: [TildeForm; 4] = [
    TildeForm {
        den: 1,
        pow_base: 2,
        pow_gap: 1,
        terms: &[t(0, 1, 0, &[(0, -1), (2, 1)]), t(1, 0, 0, &[(1, 2)])],
    },
    TildeForm {
        den: 2,
        pow_base: 4,
        pow_gap: 3,
        terms: &[
            t(3, 0, 2, &[(1, -9), (3, 5)]),
            t(2, 1, 2, &[(0, 2), (2, -12)]),
            t(1, 0, 0, &[(1, -3), (3, 49), (5, -9), (7, -5)]),
            t(0, 1, 0, &[(4, -24), (6, 16)]),
        ],
    },
    TildeForm {
        den: -6,
        pow_base: 6,
        pow_gap: 5,
        terms: &[
            t(5, 0, 4, &[(1, -69), (3, 151)]),
            t(4, 1, 4, &[(0, 6), (2, -167), (4, 47)]),
            t(3, 0, 0, &[(1, -15), (3, 1258), (5, -3124), (7, 4962), (9, -2445), (11, -284)]),
            t(2, 1, 0, &[(2, 5), (4, -2013), (6, 6460), (8, -2252), (10, 711), (12, -79)]),
            t(1, 0, 0, &[(3, 7), (5, 1202), (7, -5076), (9, 1862), (11, 133)]),
            t(0, 1, 0, &[(6, -260), (8, 1344), (10, -732), (12, 32)]),
        ],
    },
    TildeForm {
        den: -24,
        pow_base: 8,
        pow_gap: 7,
        terms: &[
            t(7, 0, 6, &[(1, 636), (3, -4730), (5, 758)]),
            t(6, 1, 6, &[(0, -24), (2, 2892), (4, -3208)]),
            t(
                5,
                0,
                0,
                &[
                    (1, 84),
                    (3, -28256),
                    (5, 255889),
                    (7, -1221754),
                    (9, 2195479),
                    (11, -1102732),
                    (13, 352255),
                    (15, -6650),
                    (17, -2139),
                ],
            ),
            t(
                4,
                1,
                0,
                &[
                    (2, -60),
                    (4, 74008),
                    (6, -751172),
                    (8, 1672336),
                    (10, -1918916),
                    (12, 684248),
                    (14, -48444),
                    (16, 11776),
                ],
            ),
            t(
                3,
                0,
                0,
                &[
                    (3, -62),
                    (5, -92732),
                    (7, 1137554),
                    (9, -2422052),
                    (11, 1910790),
                    (13, -637108),
                    (15, 13414),
                    (17, 2004),
                ],
            ),
            t(
                2,
                1,
                0,
                &[
                    (4, 48),
                    (6, 62496),
                    (8, -875536),
                    (10, 1771712),
                    (12, -775536),
                    (14, 131872),
                    (16, -14000),
                ],
            ),
            t(1, 0, 0, &[(5, 29), (7, -22566), (9, 350055), (11, -762660), (13, 301803), (15, -6582), (17, -623)]),
            t(0, 1, 0, &[(8, 3448), (10, -57344), (12, 137808), (14, -67072), (16, 5432)]),
        ],
    },
];

fn tilde_form(k: usize) -> Result<&'static TildeForm> {
    if !(2..=TILDE_K_MAX).contains(&k) {
        return Err(Error::IndexError(format!("tilde coefficients exist for k = 2..=5, got {k}")));
    }
    Ok(&TILDE[k - 2])
}

fn eval_sparse<R: Real>(poly: &[(u32, i64)], x: R) -> R {
    poly.iter()
        .fold(R::zero(), |acc, &(e, c)| acc + R::from_f64(c as f64) * ipow(x, e))
}

fn ipow<R: Real>(x: R, n: u32) -> R {
    (0..n).fold(R::one(), |acc, _| acc * x)
}

/// `q̃_k(x)` for `k = 2..=5` at the phase cosine `C` and sine `S`.
pub fn tilde_q<R: Real>(k: usize, x: R, c: R, s: R) -> Result<R> {
    let form = tilde_form(k)?;
    let gap = s * x - c;
    if gap.abs().to_f64() < DEGENERACY_TAU {
        return Err(Error::DegenerateDenominator {
            value: gap.to_f64(),
            tau: DEGENERACY_TAU,
        });
    }
    let base = x * x + R::one();
    let mut sum = R::zero();
    for term in form.terms {
        sum = sum + ipow(c, term.cp) * ipow(s, term.sp) * ipow(base, term.p) * eval_sparse(term.poly, x);
    }
    Ok(x * x * sum / (R::from_f64(form.den as f64) * ipow(base, form.pow_base) * ipow(gap, form.pow_gap)))
}

/// `q̂_k(x)`: `q̃_k` with `C → Ŝ`, `S → -Ĉ`.
pub fn hat_q<R: Real>(k: usize, x: R, c_hat: R, s_hat: R) -> Result<R> {
    tilde_q(k, x, s_hat, R::zero() - c_hat)
}

/// Exact `q̃_k` as a rational function of `x` for rational `C`, `S`.
pub fn tilde_q_exact(k: usize, c: &BigRational, s: &BigRational) -> Result<RationalFunction<BigRational>> {
    let form = tilde_form(k)?;
    type P = Polynomial<BigRational>;
    let base = P::from_ints(&[1, 0, 1]);
    let mut sum = P::zero();
    for term in form.terms {
        let mut coeffs = vec![int(0); term.poly.iter().map(|p| p.0 as usize).max().unwrap_or(0) + 1];
        for &(e, v) in term.poly {
            coeffs[e as usize] = int(v);
        }
        let scale = num_traits::pow(c.clone(), term.cp as usize) * num_traits::pow(s.clone(), term.sp as usize);
        sum = &sum + &(&P::new(coeffs) * &base.pow(term.p)).scale(&scale);
    }
    let gap = P::new(vec![-c.clone(), s.clone()]);
    let num = &sum * &P::monomial(int(1), 2);
    let den = (&base.pow(form.pow_base) * &gap.pow(form.pow_gap)).scale(&int(form.den));
    Ok(RationalFunction::new(num, den))
}

fn lower_alpha(family: ZeroFamily) -> Result<f64> {
    match family.tag {
        Gti::LowerCi => Ok(0.0),
        Gti::LowerSi => Ok(0.5),
        _ => Err(Error::InvalidArgument(format!(
            "expand_zero_lower handles ci and si, got {}",
            family.tag
        ))),
    }
}

/// Expansion of the `m`th zero of ci or si with the tilde/hat coefficients.
/// Near a degenerate zero the coefficients are dropped and
/// `degenerate_flag` is set; `theta_assembled` is then the leading term.
pub fn expand_zero_lower(family: ZeroFamily, a: f64, m: u32, k_max: usize) -> Result<ZeroExpansion> {
    let alpha = lower_alpha(family)?;
    if !(1..=TILDE_K_MAX).contains(&k_max) {
        return Err(Error::InvalidArgument(format!("K must lie in 1..=5, got {k_max}")));
    }
    let lead = nth_leading(a, alpha, m)?;
    let cs = if family.tag == Gti::LowerSi {
        (-lead.s, lead.c)
    } else {
        (lead.c, lead.s)
    };
    let x = D::from_f64(lead.root);
    let (c, s) = (D::from_f64(lead.c), D::from_f64(lead.s));
    let degenerate = lead.gap() < DEGENERACY_TAU;
    let mut coeffs = Vec::new();
    let mut theta = x;
    if !degenerate {
        let inv = D::from_f64(a).recip();
        let mut p = inv;
        for k in 2..=k_max {
            p *= inv;
            let q = tilde_q(k, x, c, s)?;
            coeffs.push(q.to_f64());
            theta += q * p;
        }
    }
    Ok(ZeroExpansion {
        family,
        a,
        m,
        leading: lead.root,
        coeffs,
        k: k_max,
        theta_assembled: theta.to_f64(),
        cs: Some(cs),
        degenerate_flag: degenerate,
        branch: Some(lead.branch),
        theta_assembled_dd: theta,
    })
}

/// A flagged degenerate index.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DegenerateIndex {
    pub m: u32,
    pub leading: f64,
    pub gap: f64,
    /// Whether the leading term lies within 0.5 of `1/e`.
    pub near_inverse_e: bool,
}

/// The unique index with `|S x - C| < τ`, if any. Two or more such indices
/// are reported as [`Error::MultipleDegenerates`].
pub fn detect_degenerate(a: f64, leadings: &[LowerLeading]) -> Result<Option<DegenerateIndex>> {
    let t = trig_factor(a, 0.0).to_f64().abs();
    if t < DEGENERACY_DELTA {
        return Err(Error::InvalidArgument(format!(
            "degeneracy audit needs |cos(πa/2)| >= {DEGENERACY_DELTA}, got {t:.3e} at a = {a}"
        )));
    }
    let flagged: Vec<&LowerLeading> = leadings.iter().filter(|l| l.gap() < DEGENERACY_TAU).collect();
    match flagged.as_slice() {
        [] => Ok(None),
        [l] => Ok(Some(DegenerateIndex {
            m: l.m,
            leading: l.root,
            gap: l.gap(),
            near_inverse_e: (l.root - (-1f64).exp()).abs() <= 0.5,
        })),
        many => Err(Error::MultipleDegenerates {
            a,
            indices: many.iter().map(|l| l.m as usize).collect(),
        }),
    }
}

/// Phase offset `α` and whether the right-hand side `χ_α` is present.
fn fallback_alpha(family: ZeroFamily) -> (f64, bool) {
    match family.tag {
        Gti::Ci => (0.0, false),
        Gti::Si => (0.5, false),
        Gti::Ti => (family.alpha, false),
        Gti::LowerCi => (0.0, true),
        Gti::LowerSi => (0.5, true),
        Gti::LowerTi => (family.alpha, true),
    }
}

/// Solve `cos(φ(θ) - πα + 𝓔_I) = χ_α(a, θ) exp(-𝓔_R)` for `θ = leading + ε`
/// with `n`-term `𝓔` sums, by safeguarded Newton in `ε` from 0.
/// Upper-case families use a zero right-hand side.
pub fn refine_epsilon_fallback(a: f64, family: ZeroFamily, leading: f64, n: usize) -> Result<f64> {
    check_a(a)?;
    if !(leading > 0.0) {
        return Err(Error::InvalidArgument(format!("leading term must be positive, got {leading}")));
    }
    let (alpha, lower) = fallback_alpha(family);
    let chi = if lower { Some(Chi::new(a, alpha)?) } else { None };
    let table = LGCoefficientTable::with_order(n)?;
    let pa = std::f64::consts::PI * alpha;
    let f = |th: f64| -> f64 {
        let (er, ei) = table.eps_sums(a, th, n);
        let lhs = (phase(a, th) - pa + ei).cos();
        match &chi {
            Some(c) => {
                let r = c.at(th);
                lhs - r.sign * (r.log_abs - er).exp()
            }
            None => lhs,
        }
    };
    let max_step = std::f64::consts::FRAC_PI_4 / a;
    let mut th = leading;
    let mut fx = f(th);
    for _ in 0..100 {
        if fx == 0.0 {
            return Ok(th);
        }
        let h = 1e-6 * th.max(1e-3);
        let df = (f(th + h) - f(th - h)) / (2.0 * h);
        let mut step = -fx / df;
        if !step.is_finite() {
            return Err(Error::MaxIterations(0));
        }
        step = step.clamp(-max_step, max_step);
        let mut next = th + step;
        let mut fn_ = f(next);
        let mut tries = 0;
        while fn_.abs() > fx.abs() && tries < 30 {
            step *= 0.5;
            next = th + step;
            fn_ = f(next);
            tries += 1;
        }
        let done = step.abs() <= 4.0 * f64::EPSILON * th;
        th = next;
        fx = fn_;
        if done {
            return Ok(th);
        }
    }
    Err(Error::MaxIterations(100))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use crate::zeros::QTable;

    #[test]
    fn chi_properties() {
        let mut prev = f64::INFINITY;
        for i in 1..200 {
            let v = chi(10.3, i as f64 * 0.05).unwrap();
            assert!(v.log_abs < prev);
            prev = v.log_abs;
        }
        let v = chi(8.0, 2.0).unwrap();
        let expect = ln_gamma_dd(D::from_f64(9.0)).to_f64() + 0.5 * 5f64.ln() - 8.0 * 16f64.ln();
        assert_eq!(v.sign, 1.0);
        assert!((v.log_abs - expect).abs() < 1e-13);
        assert_eq!(chi(10.0, 2.0).unwrap().sign, -1.0);
        assert!(matches!(chi(9.0, 1.0), Err(Error::TrigZero { .. })));
        assert!(matches!(sigma(10.0, 1.0), Err(Error::TrigZero { .. })));
        // large-a magnitude √(2πa)/(eθ)^a √(1+θ²)
        let (a, th) = (400.5f64, 0.7f64);
        let v = chi(a, th).unwrap();
        let approx = 0.5 * (2.0 * std::f64::consts::PI * a).ln() - a * (th.ln() + 1.0)
            + 0.5 * (1.0 + th * th).ln()
            + trig_factor(a, 0.0).to_f64().abs().ln();
        assert!((v.log_abs - approx).abs() < 1e-3);
    }

    #[test]
    fn lower_leadings_solve_their_equation() {
        for &(a, alpha) in &[(10.3, 0.0), (10.3, 0.5), (9.7, 0.0), (20.5, 0.5), (10.3, 0.25)] {
            let ls = lower_leadings(a, alpha, 30).unwrap();
            for w in ls.windows(2) {
                assert!(w[0].root < w[1].root);
            }
            for l in &ls {
                assert!(branch_residual(a, alpha, l.root, l.branch).unwrap().abs() < 1e-13 * a * l.root);
                assert!((l.c * l.c + l.s * l.s - 1.0).abs() < 1e-12);
            }
        }
        let l = solve_leading_ci_lower(10.3, 2).unwrap();
        assert!((l.root - 1.1505612868078694).abs() < 1e-12);
        assert_eq!(l.branch, 4);
    }

    #[test]
    fn large_m_approaches_upper_lattice() {
        let ls = lower_leadings(20.5, 0.0, 40).unwrap();
        let last = ls.last().unwrap();
        // upper lattice index with the same phase half-period
        let c = crate::zeros::solve_leading_ci(20.5, last.branch).unwrap();
        assert!((last.root - c).abs() < 1e-12);
    }

    #[test]
    fn tilde_reduces_to_q() {
        let q = QTable::shared();
        for k in 2..=5 {
            let exact = tilde_q_exact(k, &int(0), &int(1)).unwrap();
            assert_eq!(&exact, q.q(k).unwrap(), "k = {k}");
        }
        let r = tilde_q_exact(2, &rat(1, 3), &rat(2, 3)).unwrap();
        let v = tilde_q(2, 0.9f64, 1.0 / 3.0, 2.0 / 3.0).unwrap();
        assert!((r.eval_f64(0.9) - v).abs() < 1e-14);
        assert!(matches!(tilde_q(2, 0.5f64, 0.5, 1.0), Err(Error::DegenerateDenominator { .. })));
    }

    type RF = RationalFunction<BigRational>;

    fn taylor(rf: &RF, x: f64, n: usize) -> Vec<f64> {
        let mut out = Vec::with_capacity(n);
        let mut d = rf.clone();
        let mut fact = 1.0;
        for j in 0..n {
            if j > 0 {
                fact *= j as f64;
                d = d.derivative();
            }
            out.push(d.eval_f64(x) / fact);
        }
        out
    }

    fn mul(a: &[f64], b: &[f64]) -> Vec<f64> {
        let n = a.len();
        let mut r = vec![0.0; n];
        for i in 0..n {
            for j in 0..n - i {
                r[i + j] += a[i] * b[j];
            }
        }
        r
    }

    /// `Σ c_j d^j` for a series `d` without constant term.
    fn compose(c: &[f64], d: &[f64]) -> Vec<f64> {
        let n = d.len();
        let mut r = vec![0.0; n];
        let mut p = vec![0.0; n];
        p[0] = 1.0;
        for (j, cj) in c.iter().enumerate().take(n) {
            if j > 0 {
                p = mul(&p, d);
            }
            for i in 0..n {
                r[i] += cj * p[i];
            }
        }
        r
    }

    /// `q̃_k(x)` by substituting `θ = x + Σ q̃_k h^k` into
    /// `C cos Δ - S sin Δ = C ρ` and matching powers of `h = 1/a`.
    fn tilde_by_series(x: f64, c: f64, s: f64, kmax: usize) -> Vec<f64> {
        let n = kmax;
        let t = LGCoefficientTable::shared();
        let lt: Vec<Vec<f64>> = (1..n).map(|k| taylor(t.l(k), x, n)).collect();
        let rt: Vec<Vec<f64>> = (1..n).map(|k| taylor(t.r(k), x, n)).collect();
        let mut at = taylor(&RF::from_ints(&[1], &[1, 0, 1]), x, n);
        at.insert(0, 0.0);
        for (j, h) in at.iter_mut().enumerate().skip(1) {
            *h /= j as f64;
        }
        let mut ht = taylor(&RF::from_ints(&[0, 1], &[1, 0, 1]), x, n);
        ht.insert(0, 0.0);
        for (j, h) in ht.iter_mut().enumerate().skip(1) {
            *h /= j as f64;
        }
        let fact = |j: usize| (1..=j).product::<usize>() as f64;
        let cos_c: Vec<f64> = (0..n).map(|j| if j % 2 == 0 { (-1f64).powi(j as i32 / 2) / fact(j) } else { 0.0 }).collect();
        let sin_c: Vec<f64> = (0..n).map(|j| if j % 2 == 1 { (-1f64).powi(j as i32 / 2) / fact(j) } else { 0.0 }).collect();
        let exp_c: Vec<f64> = (0..n).map(|j| 1.0 / fact(j)).collect();
        let mut q = vec![0.0; kmax + 1];
        for k in 2..=kmax {
            let mut vals = [0.0; 2];
            for (trial, v) in vals.iter_mut().enumerate() {
                let mut d = q.clone();
                d[k] = trial as f64;
                d.resize(n + 1, 0.0);
                let dd = &d[..n];
                let mut delta: Vec<f64> = d[1..=n].to_vec();
                let atan_d = compose(&at, dd);
                let mut lnrho = compose(&ht, dd);
                for i in 0..n {
                    delta[i] -= atan_d[i];
                }
                for sidx in 1..n {
                    let ei = compose(&lt[sidx - 1], dd);
                    let er = compose(&rt[sidx - 1], dd);
                    for i in sidx..n {
                        delta[i] += ei[i - sidx];
                        lnrho[i] -= er[i - sidx];
                    }
                }
                // a ln(1 + d/x)
                let mut p = vec![0.0; n + 1];
                p[0] = 1.0;
                let mut aln = vec![0.0; n + 1];
                for j in 1..=n {
                    let mut np = vec![0.0; n + 1];
                    for i in 0..=n {
                        for l in 0..=n - i {
                            np[i + l] += p[i] * d[l];
                        }
                    }
                    p = np;
                    let w = if j % 2 == 1 { 1.0 } else { -1.0 } / (j as f64 * x.powi(j as i32));
                    for i in 0..=n {
                        aln[i] += w * p[i];
                    }
                }
                for i in 0..n {
                    lnrho[i] -= aln[i + 1];
                }
                let cd = compose(&cos_c, &delta);
                let sd = compose(&sin_c, &delta);
                let rho = compose(&exp_c, &lnrho);
                *v = c * cd[k - 1] - s * sd[k - 1] - c * rho[k - 1];
            }
            q[k] = -vals[0] / (vals[1] - vals[0]);
        }
        q
    }

    #[test]
    fn series_oracle_reproduces_q() {
        let qt = QTable::shared();
        for &x in &[0.3, 0.8, 1.7] {
            let q = tilde_by_series(x, 0.0, 1.0, 8);
            for k in 2..=8 {
                let e = qt.eval(k, x).unwrap();
                assert!((q[k] - e).abs() < 1e-10 * (1.0 + e.abs()), "k = {k}, x = {x}: {} vs {e}", q[k]);
            }
        }
    }

    #[test]
    fn tilde_closed_forms_against_series() {
        for &(x, ang) in &[(0.9f64, 0.3f64), (1.4, -0.7), (0.6, 2.0), (2.5, 1.0), (0.45, 4.0)] {
            let (c, s) = (ang.cos(), ang.sin());
            let q = tilde_by_series(x, c, s, 5);
            for k in 2..=5 {
                let v = tilde_q(k, x, c, s).unwrap();
                assert!((v - q[k]).abs() < 1e-11 * (1.0 + v.abs()), "k = {k}, x = {x}: {v} vs {}", q[k]);
            }
        }
    }

    #[test]
    fn hat_matches_closed_form() {
        let (x, ch, sh) = (1.3f64, 0.8f64, 0.6f64);
        let v = hat_q(2, x, ch, sh).unwrap();
        let expect = x * x * (ch * x * x - 2.0 * sh * x - ch) / ((x * x + 1.0).powi(2) * (ch * x + sh));
        assert!((v - expect).abs() < 1e-15);
    }
}
