//! Asymptotic expansions of the positive zeros of the six integrals.

mod leading;
mod lower;
mod qtable;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gti::Gti;

pub use leading::{
    expand_zero, solve_leading_ci, solve_leading_si, solve_leading_ti, solve_phase, ZeroExpansion,
};
pub use lower::{
    branch_residual, chi, chi_alpha, detect_degenerate, expand_zero_lower, hat_q, lower_leadings,
    refine_epsilon_fallback, sigma, solve_leading_ci_lower, solve_leading_si_lower,
    solve_leading_ti_lower, tilde_q, tilde_q_exact, DegenerateIndex, LowerLeading, SignedLog,
    DEGENERACY_DELTA, DEGENERACY_TAU, TILDE_K_MAX, TRIG_ZERO,
};
pub use qtable::{gen_q, QRow, QTable, DEFAULT_K};

/// Which zeros: the integral and, for Ti/ti, the phase `α`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ZeroFamily {
    pub tag: Gti,
    pub alpha: f64,
}

impl ZeroFamily {
    pub fn new(tag: Gti, alpha: f64) -> Result<Self> {
        let has_alpha = matches!(tag, Gti::Ti | Gti::LowerTi);
        if has_alpha {
            if !(0.0..1.0).contains(&alpha) {
                return Err(Error::InvalidArgument(format!("alpha must lie in [0, 1), got {alpha}")));
            }
        } else if alpha != 0.0 {
            return Err(Error::InvalidArgument(format!("alpha applies to Ti and ti only, got {alpha} for {tag}")));
        }
        Ok(Self { tag, alpha })
    }

    pub fn ci() -> Self {
        Self { tag: Gti::Ci, alpha: 0.0 }
    }

    pub fn si() -> Self {
        Self { tag: Gti::Si, alpha: 0.0 }
    }

    pub fn ti(alpha: f64) -> Result<Self> {
        Self::new(Gti::Ti, alpha)
    }

    pub fn ci_lower() -> Self {
        Self { tag: Gti::LowerCi, alpha: 0.0 }
    }

    pub fn si_lower() -> Self {
        Self { tag: Gti::LowerSi, alpha: 0.0 }
    }

    pub fn ti_lower(alpha: f64) -> Result<Self> {
        Self::new(Gti::LowerTi, alpha)
    }
}

/// Expansion of one zero for any family. ci/si fall back to the capital
/// machinery when their trigonometric prefactor vanishes, where the two
/// integrals differ only in sign. ti uses the leading term refined by the
/// ε-equation with `k` terms.
pub fn expand_zero_gti(family: Gti, a: f64, m: u32, k: usize, alpha: f64) -> Result<ZeroExpansion> {
    let capital = |tag| ZeroFamily::new(tag, alpha);
    match family {
        Gti::Ci | Gti::Si | Gti::Ti => expand_zero(capital(family)?, a, m, k),
        Gti::LowerCi | Gti::LowerSi => {
            let fam = ZeroFamily::new(family, 0.0)?;
            match expand_zero_lower(fam, a, m, k) {
                Err(Error::TrigZero { .. }) => {
                    let tag = if family == Gti::LowerCi { Gti::Ci } else { Gti::Si };
                    let mut e = expand_zero(capital(tag)?, a, m, k)?;
                    e.family = fam;
                    Ok(e)
                }
                other => other,
            }
        }
        Gti::LowerTi => {
            let fam = ZeroFamily::ti_lower(alpha)?;
            match solve_leading_ti_lower(a, m, alpha) {
                Ok(lead) => {
                    let theta = refine_epsilon_fallback(a, fam, lead.root, k)?;
                    Ok(ZeroExpansion {
                        family: fam,
                        a,
                        m,
                        leading: lead.root,
                        coeffs: Vec::new(),
                        k,
                        theta_assembled: theta,
                        cs: Some((lead.c, lead.s)),
                        degenerate_flag: false,
                        branch: Some(lead.branch),
                        theta_assembled_dd: crate::dd::DoubleDouble::from_f64(theta),
                    })
                }
                Err(Error::TrigZero { .. }) => {
                    let mut e = expand_zero(capital(Gti::Ti)?, a, m, k)?;
                    e.family = fam;
                    Ok(e)
                }
                Err(e) => Err(e),
            }
        }
    }
}
