use num_complex::Complex64;
use serde::Serialize;

use super::path::{build_l_path, PathKind, PathSpec};
use crate::coeffs::LGCoefficientTable;
use crate::error::{Error, Result};
use crate::quad::adaptive;

const KAPPA_SAMPLES: usize = 512;
const QUAD_REL_TOL: f64 = 1e-10;
const QUAD_DEPTH: usize = 60;

/// Components and value of the error bound for the truncated LG expansion.
#[derive(Clone, Debug, Serialize)]
pub struct ErrorBoundReport {
    pub a: f64,
    pub n: usize,
    pub kappa0: f64,
    pub kappa2: f64,
    #[serde(rename = "Phi_n")]
    pub phi_n: f64,
    #[serde(rename = "Psi_n")]
    pub psi_n: f64,
    pub extra_integral: f64,
    pub eta_bound: f64,
    pub path: PathSpec,
}

/// Assemble the bound on `|η_n|` from its components.
pub fn eta_from_components(
    a: f64,
    n: usize,
    kappa0: f64,
    kappa2: f64,
    phi_n: f64,
    psi_n: f64,
    extra: f64,
) -> f64 {
    let an = a.powi(n as i32);
    let lead = kappa0 / an * phi_n;
    let exponent = (2.0 + 2.0 * kappa0 + kappa0 * kappa2 / a) * psi_n / a
        + kappa0 / a * extra
        + kappa0 / an * phi_n;
    lead * exponent.exp()
}

/// Sup of `f` over `[0, 1]` by sampling plus golden-section refinement.
fn sup_on_unit(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    let n = KAPPA_SAMPLES;
    let h = (hi - lo) / n as f64;
    let (mut best, mut arg) = (f64::NEG_INFINITY, 0usize);
    for i in 0..=n {
        let v = f(lo + i as f64 * h);
        if v > best {
            best = v;
            arg = i;
        }
    }
    let mut a = lo + (arg.saturating_sub(1)) as f64 * h;
    let mut b = (lo + (arg + 1) as f64 * h).min(hi);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..60 {
        let c = b - g * (b - a);
        let d = a + g * (b - a);
        let (fc, fd) = (f(c), f(d));
        best = best.max(fc).max(fd);
        if fc > fd {
            b = d;
        } else {
            a = c;
        }
    }
    best
}

/// Sup of `g(t)` over the path (tail included).
fn path_sup(path: &PathSpec, g: &dyn Fn(Complex64) -> f64) -> f64 {
    let mut best = f64::NEG_INFINITY;
    for seg in &path.segments {
        best = best.max(sup_on_unit(&|s| g(seg.at(s)), 0.0, 1.0));
    }
    if path.tail_start.is_some() {
        best = best.max(sup_on_unit(&|u| g(path.tail_point(u.max(1e-300)).unwrap()), 0.0, 1.0));
    }
    if path.segments.is_empty() && path.tail_start.is_none() {
        best = g(path.endpoint.to_c64());
    }
    best
}

/// `∫ |g(t)| |dt|` over the path; the tail uses `t = T/u + i y`.
fn path_integral(path: &PathSpec, g: &dyn Fn(Complex64) -> f64) -> Result<f64> {
    let mut total = 0.0;
    for seg in &path.segments {
        let len = seg.length();
        total += len * adaptive(|s| g(seg.at(s)), 0.0, 1.0, 1e-300, QUAD_REL_TOL, QUAD_DEPTH)?;
    }
    if let Some(t) = path.tail_start {
        let y = path.tail_im;
        total += adaptive(
            |u| {
                if u <= 0.0 {
                    return 0.0;
                }
                g(Complex64::new(t / u, y)) * t / (u * u)
            },
            0.0,
            1.0,
            1e-300,
            QUAD_REL_TOL,
            QUAD_DEPTH,
        )?;
    }
    Ok(total)
}

/// Computable bound on the relative error `η_n` of the `n`-term LG
/// expansion at `z`, along the certified L-shaped path of the given kind.
pub fn error_bound(a: f64, z: Complex64, n: usize, kind: PathKind) -> Result<ErrorBoundReport> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::InvalidArgument(format!("a must be positive, got {a}")));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let path = build_l_path(kind, a, z)?;
    let table = LGCoefficientTable::with_order(n)?;
    let one = Complex64::new(1.0, 0.0);
    let w = |t: Complex64| (t - one) / t;

    let kappa0 = path_sup(&path, &|t| 1.0 / (one + t / (2.0 * a * (t - one).powi(2))).norm());
    let kappa2 = path_sup(&path, &|t| (t / (t - one).powi(2)).norm());

    let phi_integrand = |t: Complex64| {
        let wt = w(t);
        let f: Vec<Complex64> = (0..=n).map(|s| table.f_complex(s, t)).collect();
        let mut v = (wt * f[n]).norm();
        let mut p = 1.0;
        for s in 1..n {
            p /= a;
            let mut inner = 0.0;
            for k in s..n {
                inner += (wt * f[k] * f[s + n - k - 1]).norm();
            }
            v += 0.5 * p * inner;
        }
        v
    };
    let psi_integrand = |t: Complex64| {
        let wt = w(t);
        let mut v = 0.0;
        let mut p = 1.0;
        for s in 0..n.saturating_sub(1) {
            v += p * (wt * table.f_complex(s + 1, t)).norm();
            p /= a;
        }
        2.0 * v
    };
    let extra_integrand = |t: Complex64| ((t + one) / (t - one).powi(3)).norm();

    let phi_n = path_integral(&path, &phi_integrand)?;
    let psi_n = path_integral(&path, &psi_integrand)?;
    let extra_integral = path_integral(&path, &extra_integrand)?;
    let eta_bound = eta_from_components(a, n, kappa0, kappa2, phi_n, psi_n, extra_integral);
    Ok(ErrorBoundReport {
        a,
        n,
        kappa0,
        kappa2,
        phi_n,
        psi_n,
        extra_integral,
        eta_bound,
        path,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_length_path_gives_zero_bound() {
        let r = error_bound(10.0, Complex64::new(0.0, 0.0), 3, PathKind::FromZero).unwrap();
        assert_eq!(r.phi_n, 0.0);
        assert_eq!(r.psi_n, 0.0);
        assert_eq!(r.eta_bound, 0.0);
        assert_eq!(r.kappa0, 1.0);
    }

    #[test]
    fn components_reassemble() {
        let r = error_bound(30.0, Complex64::new(0.0, 2.0), 3, PathKind::FromZero).unwrap();
        assert!(r.eta_bound.is_finite() && r.eta_bound > 0.0);
        let again = eta_from_components(r.a, r.n, r.kappa0, r.kappa2, r.phi_n, r.psi_n, r.extra_integral);
        assert_eq!(again, r.eta_bound);
        for v in [r.kappa0, r.kappa2, r.phi_n, r.psi_n, r.extra_integral] {
            assert!(v >= 0.0);
        }
    }

    #[test]
    fn kappa0_tends_to_one() {
        let z = Complex64::new(-1.0, 1.5);
        let k: Vec<f64> = [10.0, 100.0, 1000.0, 10000.0]
            .iter()
            .map(|&a| error_bound(a, z, 2, PathKind::FromZero).unwrap().kappa0)
            .collect();
        assert!((k[3] - 1.0).abs() < (k[0] - 1.0).abs());
        assert!((k[3] - 1.0).abs() < 1e-3);
    }

    #[test]
    fn bound_decreases_with_order_and_a() {
        let z = Complex64::new(3.0, 0.0);
        let b2 = error_bound(30.0, z, 2, PathKind::FromInfinity).unwrap().eta_bound;
        let b4 = error_bound(30.0, z, 4, PathKind::FromInfinity).unwrap().eta_bound;
        let b2big = error_bound(60.0, z, 2, PathKind::FromInfinity).unwrap().eta_bound;
        assert!(b4 < b2 && b2big < b2);
    }
}
