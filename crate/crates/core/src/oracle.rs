//! Reference values for the trigonometric integrals and incomplete gamma
//! functions, independent of the asymptotic machinery.
//!
//! All arithmetic is double-double. `Ci` and `Si` use a power series up to
//! `t = pi` and Gauss–Legendre panels on `[k pi, (k+1) pi]` beyond, so each
//! panel integrand has one sign. The precision mode only selects the
//! default tolerance and the output width.

use num_complex::Complex64;
use serde::Serialize;

use crate::dd::{ComplexDD, DoubleDouble};
use crate::error::{Error, Result};
use crate::gamma::ln_gamma_dd;
use crate::gti::{Gti, PrecisionMode};
use crate::quad::GaussLegendre;

type D = DoubleDouble;

fn dd(x: f64) -> D {
    D::from_f64(x)
}

const SERIES_EPS: f64 = 1e-34;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QuadratureConfig {
    pub panel_rule_order: usize,
    pub precision_mode: PrecisionMode,
    pub rel_tol: f64,
}

impl QuadratureConfig {
    pub fn new(panel_rule_order: usize, precision_mode: PrecisionMode, rel_tol: f64) -> Result<Self> {
        if panel_rule_order < 8 {
            return Err(Error::InvalidArgument(format!(
                "panel_rule_order must be at least 8, got {panel_rule_order}"
            )));
        }
        if !(rel_tol >= 1e-30) {
            return Err(Error::InvalidArgument(format!(
                "rel_tol must be at least 1e-30, got {rel_tol}"
            )));
        }
        Ok(Self {
            panel_rule_order,
            precision_mode,
            rel_tol,
        })
    }

    pub fn standard() -> Self {
        Self {
            panel_rule_order: 32,
            precision_mode: PrecisionMode::Standard,
            rel_tol: 1e-14,
        }
    }

    pub fn extended() -> Self {
        Self {
            panel_rule_order: 32,
            precision_mode: PrecisionMode::Extended,
            rel_tol: 1e-24,
        }
    }

    pub fn for_mode(mode: PrecisionMode) -> Self {
        match mode {
            PrecisionMode::Standard => Self::standard(),
            PrecisionMode::Extended => Self::extended(),
        }
    }
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self::standard()
    }
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{name} must be positive and finite, got {v}")))
    }
}

/// `(Ci, Si)(a, x) * exp(-log_scale)` by the power series.
fn series_ci_si_scaled(a: D, x: D, log_scale: f64) -> Result<(D, D)> {
    let mut term = D::ONE;
    let (mut ci, mut si) = (D::ZERO, D::ZERO);
    let xf = x.to_f64();
    for n in 0..2000u32 {
        let c = term / (a + dd(n as f64));
        let signed = if (n / 2) % 2 == 0 { c } else { -c };
        if n % 2 == 0 {
            ci += signed;
        } else {
            si += signed;
        }
        let size = ci.abs().max(si.abs());
        if (n as f64) > xf && c.abs().to_f64() <= SERIES_EPS * size.to_f64() {
            let pre = (a * x.ln() - dd(log_scale)).exp();
            return Ok((ci * pre, si * pre));
        }
        term = term * x / dd((n + 1) as f64);
    }
    Err(Error::ToleranceNotMet(format!("power series for Ci/Si at x = {xf} did not converge")))
}

/// `(Ci, Si)(a, x)` from the power series alone.
pub fn series_ci_si_dd(a: f64, x: f64) -> Result<(D, D)> {
    check_positive("a", a)?;
    check_positive("x", x)?;
    series_ci_si_scaled(dd(a), dd(x), 0.0)
}

/// Cumulative panel integrator for `Ci(a, x) + i Si(a, x)`.
///
/// Values are returned multiplied by `exp(-log_scale)`, which is nonzero
/// only when `x^a` would overflow. Full panels are cached so repeated
/// evaluations at nearby `x` cost one partial panel.
#[derive(Clone, Debug)]
pub struct CiSiIntegrator {
    a: D,
    log_scale: f64,
    rule: std::sync::Arc<GaussLegendre>,
    prefix: Vec<ComplexDD>,
}

impl CiSiIntegrator {
    pub fn new(a: f64, x_hint: f64, cfg: &QuadratureConfig) -> Result<Self> {
        check_positive("a", a)?;
        let log_scale = (a * x_hint.max(1.0).ln() - 300.0).max(0.0);
        Ok(Self {
            a: dd(a),
            log_scale,
            rule: GaussLegendre::get(cfg.panel_rule_order),
            prefix: Vec::new(),
        })
    }

    pub fn a(&self) -> f64 {
        self.a.to_f64()
    }

    pub fn log_scale(&self) -> f64 {
        self.log_scale
    }

    fn panel(&self, lo: D, hi: D) -> ComplexDD {
        let am1 = self.a - D::ONE;
        let ratio = (hi / lo).to_f64();
        let n = ((am1.to_f64().abs() * ratio.ln()) / 3.0).ceil().max(1.0) as usize;
        let width = (hi - lo) / dd(n as f64);
        let ls = dd(self.log_scale);
        let mut acc = ComplexDD::default();
        for j in 0..n {
            let a0 = lo + width.mul_f64(j as f64);
            let b0 = if j + 1 == n { hi } else { a0 + width };
            acc += self.rule.integrate(a0, b0, ComplexDD::default(), |t, w| {
                let amp = (am1 * t.ln() - ls).exp() * w;
                ComplexDD::cis(t).scale(amp)
            });
        }
        acc
    }

    /// Scaled `(Ci, Si)` at `x`.
    pub fn eval_scaled(&mut self, x: D) -> Result<(D, D)> {
        let xf = x.to_f64();
        check_positive("x", xf)?;
        if xf <= std::f64::consts::PI {
            return series_ci_si_scaled(self.a, x, self.log_scale);
        }
        let k = (x / D::PI).to_f64().floor().max(1.0) as usize;
        if self.prefix.is_empty() {
            let (c, s) = series_ci_si_scaled(self.a, D::PI, self.log_scale)?;
            self.prefix.push(ComplexDD::new(c, s));
        }
        while self.prefix.len() < k {
            let j = self.prefix.len();
            let p = self.panel(D::PI.mul_f64(j as f64), D::PI.mul_f64((j + 1) as f64));
            let next = self.prefix[j - 1] + p;
            self.prefix.push(next);
        }
        let base = D::PI.mul_f64(k as f64);
        let mut v = self.prefix[k - 1];
        if x > base {
            v += self.panel(base, x);
        }
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::ToleranceNotMet(format!("non-finite Ci/Si at x = {xf}")));
        }
        Ok((v.re, v.im))
    }

    /// Unscaled `(Ci, Si)` at `x`.
    pub fn eval(&mut self, x: D) -> Result<(D, D)> {
        let (c, s) = self.eval_scaled(x)?;
        let f = dd(self.log_scale).exp();
        Ok((c * f, s * f))
    }
}

/// `(Ci(a, x), Si(a, x))` in double-double.
pub fn quad_ci_si_dd(a: f64, x: f64, cfg: &QuadratureConfig) -> Result<(D, D)> {
    let mut it = CiSiIntegrator::new(a, x, cfg)?;
    it.eval(dd(x))
}

pub fn quad_ci_si(a: f64, x: f64, cfg: &QuadratureConfig) -> Result<(f64, f64)> {
    let (c, s) = quad_ci_si_dd(a, x, cfg)?;
    Ok((c.to_f64(), s.to_f64()))
}

/// `(Gamma(a) cos(pi a / 2), Gamma(a) sin(pi a / 2)) * exp(-log_scale)`.
fn complete_trig_scaled(a: D, log_scale: f64) -> (D, D) {
    let g = (ln_gamma_dd(a) - dd(log_scale)).exp();
    let (s, c) = (a * D::FRAC_PI_2).sin_cos();
    (g * c, g * s)
}

/// `(ci(a, z), si(a, z))` from the rotated contour `t = z + iu`:
/// `ci + i si = i e^{iz} ∫_0^∞ (z + iu)^{a-1} e^{-u} du`.
///
/// Independent of `Ci`, `Si` and the complete gamma function, and valid
/// for every `a` (the integral continues the definition beyond `a < 1`).
pub fn contour_ci_si_dd(a: f64, z: f64, cfg: &QuadratureConfig) -> Result<(D, D)> {
    if !a.is_finite() || a < 0.0 {
        return Err(Error::InvalidArgument(format!("a must be finite and non-negative, got {a}")));
    }
    check_positive("z", z)?;
    let rule = GaussLegendre::get(cfg.panel_rule_order);
    let am1 = dd(a) - D::ONE;
    let zc = ComplexDD::new(dd(z), D::ZERO);
    let width = (0.5 * a.sqrt()).max(1.0);
    let mut acc = ComplexDD::default();
    let mut u = 0.0;
    loop {
        let p = rule.integrate(dd(u), dd(u + width), ComplexDD::default(), |t, w| {
            let base = zc + ComplexDD::new(D::ZERO, t);
            let l = base.ln();
            ComplexDD::new(l.re * am1 - t, l.im * am1).exp().scale(w)
        });
        acc += p;
        u += width;
        if u > a + 5.0 && p.abs().to_f64() <= SERIES_EPS * acc.abs().to_f64() {
            break;
        }
        if u > 20.0 * (a + 50.0) {
            return Err(Error::ToleranceNotMet(format!("contour integral at z = {z} did not decay")));
        }
    }
    let v = ComplexDD::new(D::ZERO, D::ONE) * ComplexDD::cis(dd(z)) * acc;
    Ok((v.re, v.im))
}

/// Classical cosine integral `Ci(z) = gamma_E + ln z + ∫_0^z (cos t - 1)/t dt`.
pub fn classical_ci_dd(z: f64, cfg: &QuadratureConfig) -> Result<D> {
    check_positive("z", z)?;
    let x = dd(z);
    let head = x.min(D::PI);
    // ∫_0^head (cos t - 1)/t dt = Σ_{k≥1} (-1)^k head^{2k} / (2k (2k)!)
    let h2 = head.sqr();
    let mut term = D::ONE;
    let mut sum = D::ZERO;
    for k in 1..200u32 {
        let kk = 2.0 * k as f64;
        term = -(term * h2) / dd(kk * (kk - 1.0));
        let c = term / dd(kk);
        sum += c;
        if c.abs().to_f64() <= SERIES_EPS * sum.abs().to_f64() {
            break;
        }
    }
    let mut ci = D::EULER_GAMMA + head.ln() + sum;
    if z > std::f64::consts::PI {
        let rule = GaussLegendre::get(cfg.panel_rule_order);
        let mut lo = D::PI;
        while lo < x {
            let hi = (lo + D::PI).min(x);
            ci += rule.integrate(lo, hi, D::ZERO, |t, w| t.cos() / t * w);
            lo = hi;
        }
    }
    Ok(ci)
}

/// Scaled value of a family at `x` from a shared integrator.
fn family_scaled(
    integ: &mut CiSiIntegrator,
    family: Gti,
    alpha: f64,
    x: D,
) -> Result<D> {
    let (c, s) = integ.eval_scaled(x)?;
    let (c, s) = if family.is_upper_tail() {
        let (gc, gs) = complete_trig_scaled(integ.a, integ.log_scale);
        (gc - c, gs - s)
    } else {
        (c, s)
    };
    Ok(match family {
        Gti::Ci | Gti::LowerCi => c,
        Gti::Si | Gti::LowerSi => s,
        Gti::Ti | Gti::LowerTi => {
            let (sa, ca) = (D::PI.mul_f64(alpha)).sin_cos();
            c * ca + s * sa
        }
    })
}

/// Scaled derivative in `x`: `± x^{a-1} cos(x - pi alpha_eff)`.
fn family_derivative_scaled(integ: &CiSiIntegrator, family: Gti, alpha: f64, x: D) -> D {
    let amp = ((integ.a - D::ONE) * x.ln() - dd(integ.log_scale)).exp();
    let phase = x - D::PI.mul_f64(family.effective_alpha(alpha));
    let v = amp * phase.cos();
    if family.is_upper_tail() {
        -v
    } else {
        v
    }
}

fn family_second_derivative_scaled(integ: &CiSiIntegrator, family: Gti, alpha: f64, x: D) -> D {
    let am1 = integ.a - D::ONE;
    let amp = (am1 * x.ln() - dd(integ.log_scale)).exp();
    let phase = x - D::PI.mul_f64(family.effective_alpha(alpha));
    let (s, c) = phase.sin_cos();
    let v = amp * (am1 * c / x - s);
    if family.is_upper_tail() {
        -v
    } else {
        v
    }
}

/// Any of the six families at `x`. Lower-case families use the connection
/// with the complete gamma function and therefore hold for all `a > 0`.
pub fn oracle_gti_dd(a: f64, x: f64, family: Gti, alpha: f64, cfg: &QuadratureConfig) -> Result<D> {
    let mut integ = CiSiIntegrator::new(a, x, cfg)?;
    let v = family_scaled(&mut integ, family, alpha, dd(x))?;
    Ok(v * dd(integ.log_scale).exp())
}

/// [`oracle_gti`] with a caller-held integrator, for repeated calls at one `a`.
pub fn oracle_gti_with(integ: &mut CiSiIntegrator, family: Gti, alpha: f64, x: f64) -> Result<f64> {
    check_positive("x", x)?;
    let v = family_scaled(integ, family, alpha, dd(x))?;
    Ok((v * dd(integ.log_scale).exp()).to_f64())
}

pub fn oracle_gti(a: f64, x: f64, family: Gti, alpha: f64, cfg: &QuadratureConfig) -> Result<f64> {
    oracle_gti_dd(a, x, family, alpha, cfg).map(D::to_f64)
}

/// Which point on the imaginary axis: `-i a theta` or `+i a theta`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RaySign {
    Minus,
    Plus,
}

/// `gamma(a, ∓ i a theta)` from `Ci` and `Si`:
/// `gamma(a, -ix) = e^{-i pi a/2} (Ci + i Si)`,
/// `gamma(a, +ix) = e^{+i pi a/2} (Ci - i Si)`.
pub fn oracle_gamma_on_ray_dd(
    a: f64,
    theta: f64,
    sign: RaySign,
    cfg: &QuadratureConfig,
) -> Result<ComplexDD> {
    check_positive("theta", theta)?;
    let (c, s) = quad_ci_si_dd(a, a * theta, cfg)?;
    let half = D::FRAC_PI_2.mul_f64(a);
    Ok(match sign {
        RaySign::Minus => ComplexDD::cis(-half) * ComplexDD::new(c, s),
        RaySign::Plus => ComplexDD::cis(half) * ComplexDD::new(c, -s),
    })
}

pub fn oracle_gamma_on_ray(a: f64, theta: f64, sign: RaySign, cfg: &QuadratureConfig) -> Result<Complex64> {
    oracle_gamma_on_ray_dd(a, theta, sign, cfg).map(ComplexDD::to_c64)
}

/// Result of the power series for the lower incomplete gamma function.
#[derive(Clone, Copy, Debug)]
pub struct SeriesGamma {
    pub value: ComplexDD,
    /// Largest term magnitude relative to the final sum.
    pub cancellation: f64,
    pub terms: usize,
}

/// Cancellation gate of the standard mode.
pub fn series_gate(a: f64) -> f64 {
    a + 20.0
}

/// `gamma(a, z) = z^a Σ_k (-z)^k / (k! (a + k))`.
pub fn series_gamma_dd(a: f64, z: Complex64, cfg: &QuadratureConfig) -> Result<SeriesGamma> {
    check_positive("a", a)?;
    let r = z.norm();
    if r == 0.0 {
        return Ok(SeriesGamma {
            value: ComplexDD::default(),
            cancellation: 1.0,
            terms: 0,
        });
    }
    if cfg.precision_mode == PrecisionMode::Standard && r > series_gate(a) {
        return Err(Error::InvalidArgument(format!(
            "|z| = {r} exceeds the series gate {} in standard mode",
            series_gate(a)
        )));
    }
    let zc = ComplexDD::from_f64(z.re, z.im);
    let mz = -zc;
    let ad = dd(a);
    let mut term = ComplexDD::new(D::ONE, D::ZERO);
    let mut sum = ComplexDD::default();
    let mut max_term = 0.0f64;
    let mut k = 0usize;
    loop {
        let c = term.scale((ad + dd(k as f64)).recip());
        sum += c;
        let cm = c.abs().to_f64();
        max_term = max_term.max(cm);
        if (k as f64) > r && cm <= SERIES_EPS * sum.abs().to_f64() {
            break;
        }
        k += 1;
        if k > 100_000 {
            return Err(Error::ToleranceNotMet("gamma series did not converge".into()));
        }
        term = (term * mz).scale(dd(k as f64).recip());
    }
    let ratio = max_term / sum.abs().to_f64();
    if ratio * 2f64.powi(-104) > cfg.rel_tol {
        return Err(Error::CancellationOverflow { ratio });
    }
    let value = zc.powf(ad) * sum;
    Ok(SeriesGamma {
        value,
        cancellation: ratio,
        terms: k + 1,
    })
}

pub fn series_gamma(a: f64, z: Complex64, cfg: &QuadratureConfig) -> Result<Complex64> {
    series_gamma_dd(a, z, cfg).map(|s| s.value.to_c64())
}

/// `Gamma(a, x) = ∫_x^∞ e^{-t} t^{a-1} dt` for real `x > 0`.
pub fn quad_gamma_upper_dd(a: f64, x: f64, cfg: &QuadratureConfig) -> Result<D> {
    check_positive("a", a)?;
    check_positive("x", x)?;
    let rule = GaussLegendre::get(cfg.panel_rule_order);
    let am1 = dd(a) - D::ONE;
    let peak = a - 1.0;
    // log of the integrand maximum on [x, ∞)
    let log_scale = if x < peak {
        peak * peak.ln() - peak
    } else {
        (a - 1.0) * x.ln() - x
    };
    let ls = dd(log_scale);
    let integrand = |t: D| (am1 * t.ln() - t - ls).exp();
    let wide = (0.5 * peak.abs().sqrt()).max(1.0);
    let mut acc = D::ZERO;
    let mut t = dd(x);
    for _ in 0..200_000 {
        let width = t.to_f64().min(wide);
        let hi = t + dd(width);
        let p = rule.integrate(t, hi, D::ZERO, |s, w| integrand(s) * w);
        acc += p;
        t = hi;
        let tf = t.to_f64();
        if tf > peak && p.to_f64().abs() <= SERIES_EPS * acc.to_f64().abs() {
            // Γ(a, X) ≈ X^{a-1} e^{-X} / (1 - (a-1)/X)
            let tail = integrand(t) / (D::ONE - am1 / t);
            acc += tail;
            return Ok(acc * ls.exp());
        }
    }
    Err(Error::ToleranceNotMet(format!("upper gamma quadrature at x = {x} did not terminate")))
}

pub fn quad_gamma_upper(a: f64, x: f64, cfg: &QuadratureConfig) -> Result<f64> {
    quad_gamma_upper_dd(a, x, cfg).map(D::to_f64)
}

/// A zero located by safeguarded Newton iteration on the oracle.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct RefinedZero {
    pub family: Gti,
    pub alpha: f64,
    pub m: Option<u32>,
    /// Zero of `theta -> F(a, a theta)`.
    pub theta_star: f64,
    #[serde(skip)]
    pub theta_star_dd: D,
    /// `F(a, a theta*)` relative to the local amplitude `(a theta*)^{a-1}`.
    pub residual: f64,
    pub newton_iters: usize,
}

const MAX_NEWTON: usize = 200;

/// Refine a zero of `theta -> F(a, a theta)` from a nearby estimate.
pub fn refine_zero(
    a: f64,
    family: Gti,
    alpha: f64,
    theta0: f64,
    cfg: &QuadratureConfig,
) -> Result<RefinedZero> {
    let mut integ = CiSiIntegrator::new(a, a * theta0 + 4.0, cfg)?;
    refine_zero_with(&mut integ, family, alpha, theta0, cfg)
}

/// [`refine_zero`] reusing an integrator for the same `a`.
pub fn refine_zero_with(
    integ: &mut CiSiIntegrator,
    family: Gti,
    alpha: f64,
    theta0: f64,
    cfg: &QuadratureConfig,
) -> Result<RefinedZero> {
    let a = integ.a();
    check_positive("theta0", theta0)?;
    let x0 = dd(a * theta0);
    let mut f = |x: D| family_scaled(integ, family, alpha, x);
    let f0 = f(x0)?;
    // nearest sign change within half a period on either side
    let h = std::f64::consts::PI / 16.0;
    let mut bracket = None;
    if f0.is_zero() {
        bracket = Some((x0, x0, f0, f0));
    }
    let mut right = (x0, f0);
    let mut left = (x0, f0);
    for _ in 0..16 {
        if bracket.is_some() {
            break;
        }
        let xr = right.0 + dd(h);
        let fr = f(xr)?;
        if fr.signum() != right.1.signum() {
            bracket = Some((right.0, xr, right.1, fr));
            break;
        }
        right = (xr, fr);
        let xl = left.0 - dd(h);
        if xl.to_f64() > 0.0 {
            let fl = f(xl)?;
            if fl.signum() != left.1.signum() {
                bracket = Some((xl, left.0, fl, left.1));
                break;
            }
            left = (xl, fl);
        }
    }
    let a_d = dd(a);
    let ls = dd(integ.log_scale);
    let done = |x: D, iters: usize, fx: D| -> RefinedZero {
        let amp = ((a_d - D::ONE) * x.ln() - ls).exp();
        let theta = x / a_d;
        RefinedZero {
            family,
            alpha,
            m: None,
            theta_star: theta.to_f64(),
            theta_star_dd: theta,
            residual: (fx / amp).to_f64(),
            newton_iters: iters,
        }
    };
    let Some((mut lo, mut hi, flo, _)) = bracket else {
        // A zero of even multiplicity touches without crossing. Newton on
        // f / f' has a simple root there.
        let window = ((x0 - D::PI).max(x0.mul_f64(1e-3)), x0 + D::PI);
        let mut x = x0;
        for it in 1..=MAX_NEWTON {
            let fx = family_scaled(integ, family, alpha, x)?;
            let amp = ((a_d - D::ONE) * x.ln() - ls).exp();
            if fx.abs().to_f64() <= cfg.rel_tol * amp.to_f64() {
                return Ok(done(x, it, fx));
            }
            let d1 = family_derivative_scaled(integ, family, alpha, x);
            let d2 = family_second_derivative_scaled(integ, family, alpha, x);
            let den = d1.sqr() - fx * d2;
            if den.is_zero() {
                break;
            }
            let step = fx * d1 / den;
            x -= step;
            if x < window.0 || x > window.1 {
                break;
            }
            if step.abs().to_f64() <= 1e-30 * x.to_f64() {
                let fx = family_scaled(integ, family, alpha, x)?;
                return Ok(done(x, it, fx));
            }
        }
        return Err(Error::NoSignChange(theta0));
    };
    let mut x = if x0 >= lo && x0 <= hi { x0 } else { (lo + hi).ldexp(-1) };
    let flo_sign = flo.signum();
    for it in 1..=MAX_NEWTON {
        let fx = family_scaled(integ, family, alpha, x)?;
        let amp = ((a_d - D::ONE) * x.ln() - ls).exp();
        if fx.abs().to_f64() <= cfg.rel_tol * amp.to_f64() || lo == hi {
            return Ok(done(x, it, fx));
        }
        if fx.signum() == flo_sign {
            lo = x;
        } else {
            hi = x;
        }
        let d = family_derivative_scaled(integ, family, alpha, x);
        let newton = x - fx / d;
        let next = if d.is_zero() || !(newton > lo && newton < hi) {
            (lo + hi).ldexp(-1)
        } else {
            newton
        };
        if (next - x).abs().to_f64() <= 1e-31 * x.to_f64() {
            let fx = family_scaled(integ, family, alpha, next)?;
            return Ok(done(next, it, fx));
        }
        x = next;
    }
    Err(Error::MaxIterations(MAX_NEWTON))
}

/// `Delta(a, x) = Ci(a, x) / (x^a cos x)`.
pub fn delta_metric(a: f64, x: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let mut integ = CiSiIntegrator::new(a, x, cfg)?;
    delta_metric_with(&mut integ, x)
}

/// [`delta_metric`] reusing an integrator for the same `a`.
pub fn delta_metric_with(integ: &mut CiSiIntegrator, x: f64) -> Result<f64> {
    check_positive("theta", x)?;
    let xd = dd(x);
    let c = xd.cos();
    if c.abs().to_f64() < 1e-12 {
        return Err(Error::DerivativeNearZero { theta: x });
    }
    let (ci, _) = integ.eval_scaled(xd)?;
    let scale = (dd(integ.log_scale) - integ.a * xd.ln()).exp();
    Ok((ci * scale / c).to_f64())
}

/// `F(a, x) / (x ∂F/∂x)` for any family, the relative-error estimate of an
/// approximate zero `x`. Equals [`delta_metric`] for Ci.
pub fn delta_family_with(integ: &mut CiSiIntegrator, family: Gti, alpha: f64, x: f64) -> Result<f64> {
    check_positive("theta", x)?;
    let xd = dd(x);
    let phase = xd - D::PI.mul_f64(family.effective_alpha(alpha));
    if phase.cos().abs().to_f64() < 1e-12 {
        return Err(Error::DerivativeNearZero { theta: x });
    }
    let f = family_scaled(integ, family, alpha, xd)?;
    let d = family_derivative_scaled(integ, family, alpha, xd);
    Ok((f / (d * xd)).to_f64())
}
