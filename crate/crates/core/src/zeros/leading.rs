//! Leading terms of the zero expansions and their assembly.

use serde::Serialize;

use super::qtable::QTable;
use super::ZeroFamily;
use crate::dd::DoubleDouble;
use crate::error::{Error, Result};
use crate::gti::Gti;

type D = DoubleDouble;

pub(crate) fn check_a(a: f64) -> Result<()> {
    if a > 1.0 && a.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("zero expansions need a > 1, got {a}")))
    }
}

fn check_m(m: u32) -> Result<()> {
    if m == 0 {
        return Err(Error::InvalidArgument("zero index m starts at 1".into()));
    }
    Ok(())
}

/// Root of `a c - arctan c = rhs` for `a > 1`, `rhs > 0`.
///
/// The function is increasing and convex on `(0, ∞)`, so Newton from the
/// right end of the bracket `(0, rhs/(a-1))` converges monotonically.
pub fn solve_phase(a: f64, rhs: f64) -> Result<D> {
    check_a(a)?;
    if !(rhs > 0.0) {
        return Err(Error::NonpositiveRhs { rhs });
    }
    let hi = rhs / (a - 1.0);
    let g = |c: f64| a * c - c.atan() - rhs;
    if !(g(hi) >= 0.0) {
        return Err(Error::BracketFailure(format!("no sign change on (0, {hi}] for rhs = {rhs}")));
    }
    let mut c = hi;
    for _ in 0..200 {
        let step = g(c) / (a - 1.0 / (1.0 + c * c));
        let next = (c - step).max(0.5 * c);
        let done = (next - c).abs() <= 1e-15 * c;
        c = next;
        if done {
            break;
        }
    }
    // two Newton steps in double-double
    let (ad, rd) = (D::from_f64(a), D::from_f64(rhs));
    let mut cd = D::from_f64(c);
    for _ in 0..2 {
        let gd = ad * cd - cd.atan() - rd;
        let dg = ad - (D::ONE + cd.sqr()).recip();
        cd -= gd / dg;
    }
    if !(cd.to_f64() > 0.0 && cd.to_f64() <= hi * (1.0 + 1e-12)) {
        return Err(Error::BracketFailure(format!("Newton left (0, {hi}] for rhs = {rhs}")));
    }
    Ok(cd)
}

/// `c_{m,0}`: root of `a c - arctan c = (m - 1/2)π`.
pub fn solve_leading_ci(a: f64, m: u32) -> Result<f64> {
    Ok(leading_dd(ZeroFamily::ci(), a, m)?.to_f64())
}

/// `s_{m,0}`: root of `a s - arctan s = mπ`.
pub fn solve_leading_si(a: f64, m: u32) -> Result<f64> {
    Ok(leading_dd(ZeroFamily::si(), a, m)?.to_f64())
}

/// `t_{m,0}`: root of `a t - arctan t = (m - l + α - 1/2)π` with `l = 0`
/// for `α <= 1/2` and `l = 1` otherwise.
pub fn solve_leading_ti(a: f64, m: u32, alpha: f64) -> Result<f64> {
    Ok(leading_dd(ZeroFamily::ti(alpha)?, a, m)?.to_f64())
}

/// Right-hand side `(m - l + α_eff - 1/2)` in units of π.
fn rhs_over_pi(family: ZeroFamily, m: u32) -> Result<f64> {
    let m = m as f64;
    Ok(match family.tag {
        Gti::Ci => m - 0.5,
        Gti::Si => m,
        Gti::Ti => {
            let l = if family.alpha <= 0.5 { 0.0 } else { 1.0 };
            m - l + family.alpha - 0.5
        }
        _ => {
            return Err(Error::InvalidArgument(format!(
                "{} is not an upper-case family",
                family.tag
            )))
        }
    })
}

fn leading_dd(family: ZeroFamily, a: f64, m: u32) -> Result<D> {
    check_m(m)?;
    let r = rhs_over_pi(family, m)?;
    if !(r > 0.0) {
        return Err(Error::NonpositiveRhs { rhs: r * std::f64::consts::PI });
    }
    // exact rhs in double-double
    let rhs = D::PI * D::from_f64(r);
    let c = solve_phase(a, rhs.to_f64())?;
    let ad = D::from_f64(a);
    let mut cd = c;
    for _ in 0..2 {
        let gd = ad * cd - cd.atan() - rhs;
        cd = cd - gd / (ad - (D::ONE + cd.sqr()).recip());
    }
    Ok(cd)
}

/// Truncated uniform expansion of one zero.
#[derive(Clone, Debug, Serialize)]
pub struct ZeroExpansion {
    pub family: ZeroFamily,
    pub a: f64,
    pub m: u32,
    pub leading: f64,
    /// Coefficients for `k = 2..=K`.
    pub coeffs: Vec<f64>,
    #[serde(rename = "K")]
    pub k: usize,
    pub theta_assembled: f64,
    /// `(C, S)` for ci zeros, `(Ĉ, Ŝ)` for si zeros.
    #[serde(rename = "CS", skip_serializing_if = "Option::is_none")]
    pub cs: Option<(f64, f64)>,
    pub degenerate_flag: bool,
    /// Half-period of the leading phase holding the zero (lower-case families).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub branch: Option<u32>,
    #[serde(skip)]
    pub theta_assembled_dd: D,
}

impl ZeroExpansion {
    /// The zero in the original variable, `z = aθ`.
    pub fn z_assembled(&self) -> D {
        self.theta_assembled_dd.mul_f64(self.a)
    }
}

/// `θ ≈ c_{m,0} + Σ_{k=2}^K q_k(c_{m,0}) / a^k` for Ci, Si or Ti zeros,
/// assembled in double-double.
pub fn expand_zero(family: ZeroFamily, a: f64, m: u32, k_max: usize) -> Result<ZeroExpansion> {
    check_a(a)?;
    if k_max < 1 {
        return Err(Error::InvalidArgument("K must be at least 1".into()));
    }
    let lead = leading_dd(family, a, m)?;
    let table = QTable::with_k(k_max.max(2))?;
    let inv = D::from_f64(a).recip();
    let mut p = inv;
    let mut sum = D::ZERO;
    let mut coeffs = Vec::new();
    for k in 2..=k_max {
        p *= inv;
        let c = table.eval(k, lead)?;
        coeffs.push(c.to_f64());
        sum += c * p;
    }
    let theta = lead + sum;
    Ok(ZeroExpansion {
        family,
        a,
        m,
        leading: lead.to_f64(),
        coeffs,
        k: k_max,
        theta_assembled: theta.to_f64(),
        cs: None,
        degenerate_flag: false,
        branch: None,
        theta_assembled_dd: theta,
    })
}
