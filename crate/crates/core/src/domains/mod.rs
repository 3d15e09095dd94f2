//! Geometry of the asymptotic domains: `ξ`, the monotonicity functional
//! `Ξ`, certified subsets of the domains of validity, L-shaped integration
//! paths, the computable error bounds and level curves of `Re ξ`.

mod bounds;
mod level;
mod path;

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use bounds::{error_bound, eta_from_components, ErrorBoundReport};
pub use level::{level_curves, Grid, Polyline};
pub use path::{build_l_path, PathKind, PathSpec, Segment, TAIL_START, TURNING_POINT_RADIUS};

/// A finite point of the complex plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexPoint {
    pub re: f64,
    pub im: f64,
}

impl ComplexPoint {
    pub fn new(re: f64, im: f64) -> Result<Self> {
        if re.is_finite() && im.is_finite() {
            Ok(Self { re, im })
        } else {
            Err(Error::InvalidArgument(format!("non-finite point {re}{im:+}i")))
        }
    }

    pub fn to_c64(self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

impl From<Complex64> for ComplexPoint {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl fmt::Display for ComplexPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:+}i", self.re, self.im)
    }
}

/// `ξ(z) = (z - 1)/2 - ln(z)/2` on the principal branch.
pub fn xi(z: Complex64) -> Result<Complex64> {
    if z.im == 0.0 && z.re <= 0.0 {
        return Err(Error::BranchCut { re: z.re, im: z.im });
    }
    Ok(0.5 * (z - 1.0) - 0.5 * z.ln())
}

fn check_regular(z: Complex64) -> Result<()> {
    if z == Complex64::new(0.0, 0.0) || z == Complex64::new(1.0, 0.0) {
        return Err(Error::Singular { re: z.re, im: z.im });
    }
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::InvalidArgument(format!("non-finite point {z}")));
    }
    Ok(())
}

/// `Ξ(a, z) = Re{a (z - 1 - ln z)/2 - ln(1 - z)/2}`.
///
/// Only real parts of logarithms enter, so the value does not depend on
/// the branch.
pub fn big_xi(a: f64, z: Complex64) -> Result<f64> {
    check_regular(z)?;
    Ok(0.5 * a * (z.re - 1.0 - z.norm().ln()) - 0.5 * (Complex64::new(1.0, 0.0) - z).norm().ln())
}

/// `∂Ξ/∂x = a (1 - x/|z|^2)/2 - (x - 1)/(2 |z - 1|^2)`.
pub fn dxi_dx(a: f64, z: Complex64) -> Result<f64> {
    check_regular(z)?;
    let (x, y) = (z.re, z.im);
    Ok(0.5 * a * (1.0 - x / (x * x + y * y)) - (x - 1.0) / (2.0 * ((x - 1.0).powi(2) + y * y)))
}

/// `∂Ξ/∂y = -a y/(2 |z|^2) - y/(2 |z - 1|^2)`.
pub fn dxi_dy(a: f64, z: Complex64) -> Result<f64> {
    check_regular(z)?;
    let (x, y) = (z.re, z.im);
    Ok(-a * y / (2.0 * (x * x + y * y)) - y / (2.0 * ((x - 1.0).powi(2) + y * y)))
}

/// Stationary points `x∓(a)` of `Ξ(a, ·)` on the positive real axis.
pub fn x_pm(a: f64) -> (f64, f64) {
    let r = (4.0 * a + 1.0).sqrt() / (2.0 * a);
    let c = 1.0 + 1.0 / (2.0 * a);
    // the product of the roots is 1; use it for the smaller one
    let plus = c + r;
    (1.0 / plus, plus)
}

/// Points reachable from 0 by a horizontal then vertical path along which
/// `Ξ` does not increase: `Re z <= x⁻(a)`.
pub fn in_z0_certified(a: f64, z: Complex64) -> bool {
    a > 0.0 && z.re.is_finite() && z.im.is_finite() && z.re <= x_pm(a).0
}

/// Points reachable from `+∞`: `Re z >= x⁺(a)`, or `|Im z| >= 1/2` when
/// `a >= 2.7` (then a horizontal line suffices).
pub fn in_zinf_certified(a: f64, z: Complex64) -> bool {
    a > 0.0
        && z.re.is_finite()
        && z.im.is_finite()
        && (z.re >= x_pm(a).1 || (z.im.abs() >= 0.5 && a >= 2.7))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xi_values() {
        assert_eq!(xi(Complex64::new(1.0, 0.0)).unwrap(), Complex64::new(0.0, 0.0));
        let e = std::f64::consts::E;
        let v = xi(Complex64::new(e, 0.0)).unwrap();
        assert!((v.re - (0.5 * (e - 1.0) - 0.5)).abs() < 1e-15);
        assert!((v.re - 0.35914).abs() < 1e-5);
        assert!(matches!(xi(Complex64::new(-1.0, 0.0)), Err(Error::BranchCut { .. })));
        let z = Complex64::new(2.0, 1.0);
        let h = 1e-6;
        let fd = (xi(z + h).unwrap() - xi(z - h).unwrap()) / (2.0 * h);
        assert!((fd - (z - 1.0) / (2.0 * z)).norm() < 1e-9);
    }

    #[test]
    fn x_pm_values_and_rate() {
        let (m, p) = x_pm(4.0);
        assert!((m - 0.6096118).abs() < 1e-7);
        assert!((p - 1.6403882).abs() < 1e-7);
        for &a in &[0.01, 0.5, 3.0, 1e6] {
            let (m, p) = x_pm(a);
            assert!(m < 1.0 && 1.0 < p);
            assert!(dxi_dx(a, Complex64::new(m, 0.0)).unwrap().abs() < 1e-9 * a.max(1.0));
            assert!(dxi_dx(a, Complex64::new(p, 0.0)).unwrap().abs() < 1e-9 * a.max(1.0));
        }
        // 1 ± a^{-1/2}: fitted exponent of x⁺ - 1 over decades of a
        let d: Vec<f64> = [1e2, 1e3, 1e4].iter().map(|&a| (x_pm(a).1 - 1.0).ln()).collect();
        let slope = (d[2] - d[0]) / (2.0 * 10f64.ln());
        assert!((slope + 0.5).abs() < 0.1);
    }

    #[test]
    fn partials_match_finite_differences() {
        let mut seed = 12345u64;
        let mut rnd = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (seed >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..50 {
            let a = 0.5 + 30.0 * rnd();
            let z = Complex64::new(-3.0 + 7.0 * rnd(), -3.0 + 6.0 * rnd());
            if (z - 1.0).norm() < 0.2 || z.norm() < 0.2 {
                continue;
            }
            let h = 1e-5;
            let fx = (big_xi(a, z + h).unwrap() - big_xi(a, z - h).unwrap()) / (2.0 * h);
            let iy = Complex64::new(0.0, h);
            let fy = (big_xi(a, z + iy).unwrap() - big_xi(a, z - iy).unwrap()) / (2.0 * h);
            let gx = dxi_dx(a, z).unwrap();
            let gy = dxi_dy(a, z).unwrap();
            assert!((fx - gx).abs() <= 1e-8 * gx.abs().max(1.0), "{a} {z}");
            assert!((fy - gy).abs() <= 1e-8 * gy.abs().max(1.0), "{a} {z}");
        }
        assert_eq!(dxi_dy(3.0, Complex64::new(2.5, 0.0)).unwrap(), 0.0);
    }

    #[test]
    fn xi_blows_up_at_zero_and_infinity() {
        let near0 = big_xi(3.0, Complex64::new(1e-8, 0.0)).unwrap();
        let far = big_xi(3.0, Complex64::new(1e8, 0.0)).unwrap();
        assert!(near0 > 20.0 && far > 1e7);
        assert!(matches!(big_xi(3.0, Complex64::new(1.0, 0.0)), Err(Error::Singular { .. })));
    }

    #[test]
    fn monotonicity_on_real_axis() {
        let a = 10.0;
        let (m, p) = x_pm(a);
        for i in 1..50 {
            let t = i as f64 / 50.0;
            let neg = -5.0 * t;
            assert!(dxi_dx(a, Complex64::new(neg, 0.0)).unwrap() > 0.0);
            let inner = 0.01 + t * (m - 0.01);
            assert!(dxi_dx(a, Complex64::new(inner, 0.0)).unwrap() < 0.0);
            // Ξ has a logarithmic peak at the turning point
            let left = (m + 0.01) + t * (0.99 - (m + 0.01));
            assert!(dxi_dx(a, Complex64::new(left, 0.0)).unwrap() > 0.0);
            let right = 1.01 + t * ((p - 0.01) - 1.01);
            assert!(dxi_dx(a, Complex64::new(right, 0.0)).unwrap() < 0.0);
            let outer = p + 0.01 + 10.0 * t;
            assert!(dxi_dx(a, Complex64::new(outer, 0.0)).unwrap() > 0.0);
        }
    }

    #[test]
    fn certified_predicates() {
        for &a in &[0.1, 1.0, 30.0] {
            for &t in &[-5.0, -0.1, 0.3, 40.0] {
                assert!(in_z0_certified(a, Complex64::new(0.0, t)));
            }
            assert!(!in_z0_certified(a, Complex64::new(1.0, 0.0)));
            assert!(!in_zinf_certified(a, Complex64::new(1.0, 0.0)));
        }
        assert!(in_zinf_certified(3.0, Complex64::new(-5.0, 0.7)));
        assert!(!in_zinf_certified(2.0, Complex64::new(-5.0, 0.7)));
    }
}
