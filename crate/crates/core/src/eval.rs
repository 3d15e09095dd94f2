//! Numerical evaluation of the LG expansions of `γ(a, az)`, `Γ(a, az)` and
//! of the trigonometric integrals on the positive real axis.

use num_complex::Complex64;
use serde::Serialize;

use crate::coeffs::LGCoefficientTable;
use crate::dd::{ComplexDD, DoubleDouble};
use crate::domains::{
    error_bound, in_z0_certified, in_zinf_certified, ComplexPoint, PathKind, TURNING_POINT_RADIUS,
};
use crate::error::{Error, Result};
use crate::gamma::ln_gamma_dd;
use crate::gti::{Gti, PrecisionMode};
use crate::real::Real;

type D = DoubleDouble;

/// Largest `|ln value|` stored without a separate scale.
const LOG_RANGE: f64 = 690.0;

/// Relative cancellation above which lower-case results are flagged.
pub const CANCELLATION_FLAG: f64 = 1e6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LGEvalConfig {
    pub order: usize,
    pub precision_mode: PrecisionMode,
    pub bound_requested: bool,
}

impl Default for LGEvalConfig {
    fn default() -> Self {
        Self {
            order: 5,
            precision_mode: PrecisionMode::Standard,
            bound_requested: false,
        }
    }
}

impl LGEvalConfig {
    pub fn new(order: usize, precision_mode: PrecisionMode, bound_requested: bool) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidArgument("order must be at least 1".into()));
        }
        Ok(Self {
            order,
            precision_mode,
            bound_requested,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum EvalValue {
    Real(f64),
    Complex(ComplexPoint),
}

/// `value = mantissa * exp(log_scale)`; `log_scale` is zero unless the
/// magnitude leaves the f64 range.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EvalResult {
    pub value: EvalValue,
    pub log_scale: f64,
    pub order_used: usize,
    pub eta_bound: Option<f64>,
    pub mode: PrecisionMode,
    /// Largest term over the result, for values formed by subtraction.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cancellation: Option<f64>,
    pub cancellation_warning: bool,
}

impl EvalResult {
    pub fn mantissa(&self) -> Complex64 {
        match self.value {
            EvalValue::Real(x) => Complex64::new(x, 0.0),
            EvalValue::Complex(p) => p.to_c64(),
        }
    }

    /// The value itself; may overflow when `log_scale` is nonzero.
    pub fn to_c64(&self) -> Complex64 {
        self.mantissa() * self.log_scale.exp()
    }

    pub fn to_f64(&self) -> f64 {
        self.to_c64().re
    }

    pub fn ln_abs(&self) -> f64 {
        self.mantissa().norm().ln() + self.log_scale
    }
}

fn check_theta(theta: f64) -> Result<()> {
    if theta > 0.0 && theta.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("theta must be positive and finite, got {theta}")))
    }
}

fn check_a(a: f64) -> Result<()> {
    if a > 0.0 && a.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("a must be positive and finite, got {a}")))
    }
}

/// `(Σ_{s=1}^n R_s(θ)/a^s, Σ_{s=1}^n L_s(θ)/a^s)` in any precision.
pub fn eps_sums<R: Real>(a: R, theta: R, n: usize) -> Result<(R, R)> {
    let table = LGCoefficientTable::with_order(n)?;
    Ok(table.eps_sums(a, theta, n))
}

/// `𝓔_R(a, θ)` truncated after `n` terms.
pub fn eps_r(a: f64, theta: f64, n: usize) -> Result<f64> {
    Ok(eps_sums(a, theta, n)?.0)
}

/// `𝓔_I(a, θ)` truncated after `n` terms.
pub fn eps_i(a: f64, theta: f64, n: usize) -> Result<f64> {
    Ok(eps_sums(a, theta, n)?.1)
}

/// Log-amplitude and phase of the capital trigonometric integrals:
/// `Ti(a, aθ, α) ≈ exp(amplitude_log) cos(phase)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PhaseAmplitude {
    pub amplitude_log: f64,
    pub phase: f64,
}

/// `(amplitude_log, phase)` in precision `R`, with `α` subtracted as `απ`.
pub fn phase_amplitude_in<R: Real>(a: R, theta: R, alpha: f64, n: usize) -> Result<(R, R)> {
    let (er, ei) = eps_sums(a, theta, n)?;
    let one = R::one();
    let half = R::from_f64(0.5);
    let amp = a * (a * theta).ln() + er - a.ln() - half * (theta * theta + one).ln();
    let phase = a * theta - theta.atan() - R::pi() * R::from_f64(alpha) + ei;
    Ok((amp, phase))
}

pub fn phase_amplitude(a: f64, theta: f64, alpha: f64, cfg: &LGEvalConfig) -> Result<PhaseAmplitude> {
    check_a(a)?;
    check_theta(theta)?;
    let (amp, phase) = match cfg.precision_mode {
        PrecisionMode::Standard => phase_amplitude_in(a, theta, alpha, cfg.order)?,
        PrecisionMode::Extended => {
            let (p, q) = phase_amplitude_in(D::from_f64(a), D::from_f64(theta), alpha, cfg.order)?;
            (p.to_f64(), q.to_f64())
        }
    };
    Ok(PhaseAmplitude {
        amplitude_log: amp,
        phase,
    })
}

fn from_log(log: Complex64, real: bool) -> (EvalValue, f64) {
    let (mantissa, scale) = if log.re.abs() < LOG_RANGE {
        (log.exp(), 0.0)
    } else {
        (Complex64::from_polar(1.0, log.im), log.re)
    };
    let v = if real {
        EvalValue::Real(mantissa.re)
    } else {
        EvalValue::Complex(mantissa.into())
    };
    (v, scale)
}

/// `ln` of `(az)^a / (a w) exp{-az + Σ_{s=1}^{n-1} (-1)^s E_s(z)/a^s}`
/// with `w = 1 - z` or `z - 1`.
fn lg_log(a: f64, z: Complex64, n: usize, upper: bool, mode: PrecisionMode) -> Result<Complex64> {
    let table = LGCoefficientTable::with_order(n)?;
    match mode {
        PrecisionMode::Standard => {
            let w = if upper { z - 1.0 } else { 1.0 - z };
            let mut acc = a * (a * z).ln() - a.ln() - w.ln() - a * z;
            let mut p = 1.0;
            for s in 1..n {
                p /= -a;
                acc += table.e_complex(s, z) * p;
            }
            Ok(acc)
        }
        PrecisionMode::Extended => {
            let ad = D::from_f64(a);
            let zd = ComplexDD::from_f64(z.re, z.im);
            let one = ComplexDD::new(D::ONE, D::ZERO);
            let w = if upper { zd - one } else { one - zd };
            let mut acc = (zd.scale(ad)).ln().scale(ad) - ComplexDD::new(ad.ln(), D::ZERO) - w.ln()
                - zd.scale(ad);
            let inv = -ad.recip();
            let mut p = D::ONE;
            for s in 1..n {
                p *= inv;
                acc += table.e_complex_dd(s, zd).scale(p);
            }
            Ok(acc.to_c64())
        }
    }
}

fn lg_common(a: f64, z: Complex64, cfg: &LGEvalConfig, kind: PathKind) -> Result<EvalResult> {
    check_a(a)?;
    if cfg.order == 0 {
        return Err(Error::InvalidArgument("order must be at least 1".into()));
    }
    if (z - 1.0).norm() < TURNING_POINT_RADIUS {
        return Err(Error::TurningPoint {
            re: z.re,
            im: z.im,
            radius: TURNING_POINT_RADIUS,
        });
    }
    let (certified, region) = match kind {
        PathKind::FromZero => (in_z0_certified(a, z), "Z0"),
        PathKind::FromInfinity => (in_zinf_certified(a, z), "Zinf"),
    };
    if !certified {
        return Err(Error::NotCertified {
            region,
            a,
            re: z.re,
            im: z.im,
        });
    }
    let real = z.im == 0.0 && z.re > 0.0;
    let (value, log_scale) = if z == Complex64::new(0.0, 0.0) {
        (EvalValue::Real(0.0), 0.0)
    } else {
        let log = lg_log(a, z, cfg.order, kind == PathKind::FromInfinity, cfg.precision_mode)?;
        from_log(log, real)
    };
    let eta_bound = if cfg.bound_requested {
        Some(error_bound(a, z, cfg.order, kind)?.eta_bound)
    } else {
        None
    };
    Ok(EvalResult {
        value,
        log_scale,
        order_used: cfg.order,
        eta_bound,
        mode: cfg.precision_mode,
        cancellation: None,
        cancellation_warning: false,
    })
}

/// `γ(a, az)` from the expansion recessive at `z = 0`.
pub fn eval_gamma_lg(a: f64, z: Complex64, cfg: &LGEvalConfig) -> Result<EvalResult> {
    lg_common(a, z, cfg, PathKind::FromZero)
}

/// `Γ(a, az)` from the expansion recessive at `z = +∞`.
pub fn eval_upper_gamma_lg(a: f64, z: Complex64, cfg: &LGEvalConfig) -> Result<EvalResult> {
    lg_common(a, z, cfg, PathKind::FromInfinity)
}

/// `(ln Γ(a), Γ(a) cos(π(a/2 - α)))`-style pieces in double-double:
/// returns `(ln Γ(a), cos(π a/2 - π α_eff))`.
fn complete_part(a: f64, alpha_eff: f64) -> (D, D) {
    let ad = D::from_f64(a);
    let arg = D::FRAC_PI_2 * ad - D::PI.mul_f64(alpha_eff);
    (ln_gamma_dd(ad), arg.cos())
}

/// Any of the six trigonometric integrals at `z = aθ` from the LG phase
/// and amplitude. Lower-case families subtract from the complete value
/// `Γ(a) cos(πa/2 - πα)` for every `a > 0`.
pub fn eval_gti(a: f64, theta: f64, family: Gti, alpha: f64, cfg: &LGEvalConfig) -> Result<EvalResult> {
    check_a(a)?;
    check_theta(theta)?;
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::InvalidArgument(format!("alpha must lie in [0, 1), got {alpha}")));
    }
    let alpha_eff = family.effective_alpha(alpha);
    let ext = cfg.precision_mode == PrecisionMode::Extended;
    // capital value as (log amplitude, trig factor)
    let (amp, trig) = if ext {
        let (p, q) = phase_amplitude_in(D::from_f64(a), D::from_f64(theta), alpha_eff, cfg.order)?;
        (p, q.cos())
    } else {
        let (p, q) = phase_amplitude_in(a, theta, alpha_eff, cfg.order)?;
        (D::from_f64(p), D::from_f64(q.cos()))
    };
    let (mantissa, log_scale, cancellation) = if family.is_upper_tail() {
        let (lg, c) = complete_part(a, alpha_eff);
        let scale = lg.max(amp);
        let first = (lg - scale).exp() * c;
        let second = (amp - scale).exp() * trig;
        let m = first - second;
        let big = first.abs().max(second.abs()).to_f64();
        let ratio = if m.is_zero() { f64::INFINITY } else { big / m.abs().to_f64() };
        (m, scale, Some(ratio))
    } else {
        (trig, amp, None)
    };
    let (value, log_scale) = if log_scale.to_f64().abs() < LOG_RANGE {
        ((mantissa * log_scale.exp()).to_f64(), 0.0)
    } else {
        (mantissa.to_f64(), log_scale.to_f64())
    };
    let eta_bound = if cfg.bound_requested {
        let z = Complex64::new(0.0, -theta);
        Some(error_bound(a, z, cfg.order + 1, PathKind::FromZero)?.eta_bound)
    } else {
        None
    };
    Ok(EvalResult {
        value: EvalValue::Real(value),
        log_scale,
        order_used: cfg.order,
        eta_bound,
        mode: cfg.precision_mode,
        cancellation,
        cancellation_warning: cancellation.is_some_and(|r| r > CANCELLATION_FLAG),
    })
}

/// Large-argument gate for [`eval_fg_largez`].
pub fn largez_gate(a: f64) -> f64 {
    2.0 * (1.0 - a).abs() + 10.0
}

/// `(F(a, z), G(a, z))` from their large-`z` expansions with Pochhammer
/// coefficients `(1-a)_k`, truncated at the first term below
/// `tol * |sum|` or at the smallest term.
pub fn eval_fg_largez(a: f64, z: f64, tol: f64) -> Result<(f64, f64)> {
    if !(z > 0.0 && z.is_finite()) || !a.is_finite() {
        return Err(Error::InvalidArgument(format!("need finite a and z > 0, got a = {a}, z = {z}")));
    }
    if z < largez_gate(a) {
        return Err(Error::InvalidArgument(format!(
            "z = {z} is below the large-argument gate {}",
            largez_gate(a)
        )));
    }
    // Σ_k (-i)^k (1-a)_k / z^k = f - i g
    let (mut f, mut g) = (0.0f64, 0.0f64);
    let mut term = 1.0f64;
    let mut prev = f64::INFINITY;
    let mut k = 0usize;
    loop {
        let mag = term.abs();
        if mag > prev {
            let size = f.abs().max(g.abs());
            if prev > tol * size {
                return Err(Error::DivergenceGate { smallest: prev / size });
            }
            break;
        }
        match k % 4 {
            0 => f += term,
            1 => g += term,
            2 => f -= term,
            _ => g -= term,
        }
        let size = f.abs().max(g.abs());
        if mag <= tol * size || term == 0.0 {
            break;
        }
        prev = mag;
        term *= (1.0 - a + k as f64) / z;
        k += 1;
        if k > 10_000 {
            return Err(Error::DivergenceGate { smallest: mag / size });
        }
    }
    let p = z.powf(a - 1.0);
    Ok((f * p, g * p))
}

/// `(ci(a, z), si(a, z))` for large `z`.
pub fn assemble_ci_si_largez(a: f64, z: f64) -> Result<(f64, f64)> {
    let (f, g) = eval_fg_largez(a, z, 1e-17)?;
    let (s, c) = z.sin_cos();
    Ok((-f * s + g * c, f * c + g * s))
}

/// `ti(a, z, α)` for large `z`.
pub fn ti_largez(a: f64, z: f64, alpha: f64) -> Result<f64> {
    let (f, g) = eval_fg_largez(a, z, 1e-17)?;
    let (s, c) = (z - std::f64::consts::PI * alpha).sin_cos();
    Ok(-f * s + g * c)
}
