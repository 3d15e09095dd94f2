//! Quadrature rules: Gauss–Legendre in double-double and adaptive
//! Gauss–Kronrod (7, 15) in f64.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::dd::DoubleDouble;
use crate::error::{Error, Result};

/// Gauss–Legendre nodes and weights on [-1, 1].
#[derive(Debug)]
pub struct GaussLegendre {
    pub nodes: Vec<DoubleDouble>,
    pub weights: Vec<DoubleDouble>,
}

fn legendre(n: usize, x: DoubleDouble) -> (DoubleDouble, DoubleDouble) {
    let mut p0 = DoubleDouble::ONE;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((x * p1).mul_f64(2.0 * kf - 1.0) - p0.mul_f64(kf - 1.0)) / DoubleDouble::from_f64(kf);
        p0 = p1;
        p1 = p2;
    }
    // P_n'(x) = n (x P_n - P_{n-1}) / (x^2 - 1)
    let dp = (x * p1 - p0).mul_f64(n as f64) / (x.sqr() - DoubleDouble::ONE);
    (p1, dp)
}

impl GaussLegendre {
    fn compute(n: usize) -> Self {
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for i in 0..n {
            let guess = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut x = DoubleDouble::from_f64(guess);
            for _ in 0..100 {
                let (p, dp) = legendre(n, x);
                let dx = p / dp;
                x -= dx;
                if dx.to_f64().abs() < 1e-33 {
                    break;
                }
            }
            let (_, dp) = legendre(n, x);
            let w = DoubleDouble::from_f64(2.0) / ((DoubleDouble::ONE - x.sqr()) * dp.sqr());
            nodes.push(x);
            weights.push(w);
        }
        Self { nodes, weights }
    }

    /// Shared rule with `n` points.
    pub fn get(n: usize) -> Arc<Self> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussLegendre>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().expect("quadrature cache poisoned");
        guard
            .entry(n)
            .or_insert_with(|| Arc::new(Self::compute(n)))
            .clone()
    }

    /// `∫_a^b f` with the rule mapped onto [a, b].
    pub fn integrate<T, F>(&self, a: DoubleDouble, b: DoubleDouble, zero: T, mut f: F) -> T
    where
        T: std::ops::Add<Output = T> + Copy,
        F: FnMut(DoubleDouble, DoubleDouble) -> T,
    {
        let half = (b - a).ldexp(-1);
        let mid = a + half;
        let mut acc = zero;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc = acc + f(mid + half * *x, half * *w);
        }
        acc
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Adaptive Gauss–Kronrod integral of `f` over `[a, b]`.
pub fn adaptive<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_depth: usize,
) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let mut stack = vec![(a, b, 0usize)];
    let mut total = 0.0;
    let mut comp = 0.0;
    let (whole, _) = gk15(&mut f, a, b);
    let scale = whole.abs();
    while let Some((lo, hi, depth)) = stack.pop() {
        let (v, err) = gk15(&mut f, lo, hi);
        let width_frac = (hi - lo).abs() / (b - a).abs();
        let allowed = (abs_tol + rel_tol * scale) * width_frac.max(1e-12);
        if !v.is_finite() {
            return Err(Error::QuadratureFailure(format!(
                "non-finite integrand on [{lo}, {hi}]"
            )));
        }
        if err <= allowed || (hi - lo).abs() < 1e-14 * (1.0 + lo.abs()) {
            let y = v - comp;
            let t = total + y;
            comp = (t - total) - y;
            total = t;
        } else if depth >= max_depth {
            return Err(Error::QuadratureFailure(format!(
                "refinement depth {max_depth} exceeded on [{lo}, {hi}]"
            )));
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((lo, mid, depth + 1));
            stack.push((mid, hi, depth + 1));
        }
    }
    Ok(total)
}
