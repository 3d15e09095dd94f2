//! Log-gamma by a shifted Stirling series in double-double.

use std::sync::OnceLock;

use crate::algebra::rat;
use crate::dd::DoubleDouble;

const SHIFT_TO: f64 = 30.0;

fn stirling_coeffs() -> &'static [DoubleDouble] {
    static C: OnceLock<Vec<DoubleDouble>> = OnceLock::new();
    C.get_or_init(|| {
        // B_{2k} for k = 1..15
        let b: [(i64, i64); 15] = [
            (1, 6),
            (-1, 30),
            (1, 42),
            (-1, 30),
            (5, 66),
            (-691, 2730),
            (7, 6),
            (-3617, 510),
            (43867, 798),
            (-174611, 330),
            (854513, 138),
            (-236364091, 2730),
            (8553103, 6),
            (-23749461029, 870),
            (8615841276005, 14322),
        ];
        b.iter()
            .enumerate()
            .map(|(i, &(n, d))| {
                let k = 2 * (i as i64 + 1);
                DoubleDouble::from_rational(&(rat(n, d) / rat(k * (k - 1), 1)))
            })
            .collect()
    })
}

fn half_ln_2pi() -> DoubleDouble {
    static C: OnceLock<DoubleDouble> = OnceLock::new();
    *C.get_or_init(|| (DoubleDouble::LN_2 + DoubleDouble::PI.ln()).ldexp(-1))
}

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma_dd(x: DoubleDouble) -> DoubleDouble {
    assert!(x.hi > 0.0, "ln_gamma_dd needs x > 0");
    let mut y = x;
    let mut prod = DoubleDouble::ONE;
    let mut log_prod = DoubleDouble::ZERO;
    while y.hi < SHIFT_TO {
        prod *= y;
        y += DoubleDouble::ONE;
        if prod.hi > 1e280 {
            log_prod += prod.ln();
            prod = DoubleDouble::ONE;
        }
    }
    log_prod += prod.ln();
    let inv = y.recip();
    let inv2 = inv.sqr();
    let mut series = DoubleDouble::ZERO;
    let mut p = inv;
    for c in stirling_coeffs() {
        series += *c * p;
        p *= inv2;
    }
    (y - DoubleDouble::from_f64(0.5)) * y.ln() - y + half_ln_2pi() + series - log_prod
}

pub fn gamma_dd(x: DoubleDouble) -> DoubleDouble {
    ln_gamma_dd(x).exp()
}

pub fn ln_gamma(x: f64) -> f64 {
    ln_gamma_dd(DoubleDouble::from_f64(x)).to_f64()
}

pub fn gamma(x: f64) -> f64 {
    gamma_dd(DoubleDouble::from_f64(x)).to_f64()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: DoubleDouble, b: DoubleDouble) -> f64 {
        ((a - b) / b).to_f64().abs()
    }

    #[test]
    fn factorials() {
        let mut f = DoubleDouble::ONE;
        for n in 1..=25 {
            let g = gamma_dd(DoubleDouble::from_f64(n as f64));
            assert!(rel(g, f) < 1e-29, "n={n}");
            f = f.mul_f64(n as f64);
        }
    }

    #[test]
    fn half_integer() {
        let g = gamma_dd(DoubleDouble::from_f64(0.5));
        assert!(rel(g, DoubleDouble::PI.sqrt()) < 1e-29);
    }

    #[test]
    fn recurrence_and_f64_accuracy() {
        for &x in &[0.3, 0.7, 2.5, 10.3, 20.5, 77.7, 150.0] {
            let xd = DoubleDouble::from_f64(x);
            let l1 = ln_gamma_dd(xd + DoubleDouble::ONE);
            let l0 = ln_gamma_dd(xd) + xd.ln();
            let d = (l1 - l0).to_f64().abs();
            assert!(d < 1e-28 * l1.to_f64().abs().max(1.0), "x={x} d={d:e}");
        }
        assert!((gamma(4.5) - 11.631_728_396_567_448).abs() < 1e-14 * 11.63);
    }
}
