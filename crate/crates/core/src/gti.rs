//! Function families and precision modes shared by evaluators, oracles and
//! zero solvers.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// One of the six generalised trigonometric integrals.
///
/// Capitals integrate from 0, lower case from the argument to infinity.
/// `Ti` and `ti` take the extra parameter `alpha` and equal
/// `Ci cos(pi alpha) + Si sin(pi alpha)` and its lower-case analogue.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Gti {
    Ci,
    Si,
    Ti,
    #[serde(rename = "ci")]
    LowerCi,
    #[serde(rename = "si")]
    LowerSi,
    #[serde(rename = "ti")]
    LowerTi,
}

impl Gti {
    pub const ALL: [Gti; 6] = [
        Gti::Ci,
        Gti::Si,
        Gti::Ti,
        Gti::LowerCi,
        Gti::LowerSi,
        Gti::LowerTi,
    ];

    pub fn is_upper_tail(self) -> bool {
        matches!(self, Gti::LowerCi | Gti::LowerSi | Gti::LowerTi)
    }

    /// Effective `alpha` so that the family equals the Ti / ti combination.
    pub fn effective_alpha(self, alpha: f64) -> f64 {
        match self {
            Gti::Ci | Gti::LowerCi => 0.0,
            Gti::Si | Gti::LowerSi => 0.5,
            Gti::Ti | Gti::LowerTi => alpha,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Gti::Ci => "Ci",
            Gti::Si => "Si",
            Gti::Ti => "Ti",
            Gti::LowerCi => "ci",
            Gti::LowerSi => "si",
            Gti::LowerTi => "ti",
        }
    }
}

impl fmt::Display for Gti {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Gti {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        Ok(match s {
            "Ci" => Gti::Ci,
            "Si" => Gti::Si,
            "Ti" => Gti::Ti,
            "ci" | "ci_lower" => Gti::LowerCi,
            "si" | "si_lower" => Gti::LowerSi,
            "ti" | "ti_lower" => Gti::LowerTi,
            _ => return Err(Error::InvalidArgument(format!("unknown family '{s}'"))),
        })
    }
}

/// Working precision.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PrecisionMode {
    #[default]
    Standard,
    Extended,
}

impl fmt::Display for PrecisionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PrecisionMode::Standard => "standard",
            PrecisionMode::Extended => "extended",
        })
    }
}
