use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{big_xi, in_z0_certified, in_zinf_certified, x_pm, ComplexPoint};
use crate::error::{Error, Result};

/// Radius of the disc around `z = 1` that paths must avoid.
pub const TURNING_POINT_RADIUS: f64 = 0.1;

/// Distance beyond `max(Re z, x⁺)` where the finite horizontal leg of a
/// path from infinity ends and the mapped tail begins.
pub const TAIL_START: f64 = 10.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PathKind {
    FromZero,
    FromInfinity,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub start: ComplexPoint,
    pub end: ComplexPoint,
}

impl Segment {
    fn new(start: Complex64, end: Complex64) -> Self {
        Self {
            start: start.into(),
            end: end.into(),
        }
    }

    pub fn at(&self, s: f64) -> Complex64 {
        let (a, b) = (self.start.to_c64(), self.end.to_c64());
        a + (b - a) * s
    }

    pub fn length(&self) -> f64 {
        (self.end.to_c64() - self.start.to_c64()).norm()
    }

    fn distance_to(&self, p: Complex64) -> f64 {
        let (a, b) = (self.start.to_c64(), self.end.to_c64());
        let d = b - a;
        let len2 = d.norm_sqr();
        if len2 == 0.0 {
            return (p - a).norm();
        }
        let s = (((p - a) * d.conj()).re / len2).clamp(0.0, 1.0);
        (p - (a + d * s)).norm()
    }
}

/// An L-shaped path to `endpoint`.
///
/// For [`PathKind::FromInfinity`] the path starts with the tail
/// `{t + i tail_im : t >= tail_start}`, traversed from `+∞` down to
/// `tail_start`, followed by the finite segments.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathSpec {
    pub kind: PathKind,
    pub segments: Vec<Segment>,
    pub endpoint: ComplexPoint,
    pub tail_start: Option<f64>,
    pub tail_im: f64,
}

impl PathSpec {
    /// Point of the tail at parameter `u ∈ (0, 1]`: `t = T/u + i y`.
    pub fn tail_point(&self, u: f64) -> Option<Complex64> {
        self.tail_start.map(|t| Complex64::new(t / u, self.tail_im))
    }

    /// `n` points ordered from the start of the path to its end. Points at
    /// `0` and `∞` are skipped.
    pub fn sample(&self, n: usize) -> Vec<Complex64> {
        let mut pts = Vec::new();
        if self.tail_start.is_some() {
            for i in 1..=n {
                let u = i as f64 / n as f64;
                pts.push(self.tail_point(u).unwrap());
            }
        }
        for seg in &self.segments {
            for i in 0..=n {
                let p = seg.at(i as f64 / n as f64);
                if p != Complex64::new(0.0, 0.0) {
                    pts.push(p);
                }
            }
        }
        pts
    }

    /// Whether `Ξ(a, ·)` does not increase from the start of the path to
    /// its end at `n` samples per piece.
    pub fn xi_audit(&self, a: f64, n: usize) -> Result<bool> {
        let pts = self.sample(n);
        let mut prev = f64::INFINITY;
        for p in pts {
            let v = big_xi(a, p)?;
            if v > prev + 1e-12 * prev.abs().max(1.0) {
                return Ok(false);
            }
            prev = v;
        }
        Ok(true)
    }

    pub fn min_distance_to_turning_point(&self) -> f64 {
        let one = Complex64::new(1.0, 0.0);
        let mut d = self
            .segments
            .iter()
            .map(|s| s.distance_to(one))
            .fold(f64::INFINITY, f64::min);
        if let Some(t) = self.tail_start {
            let tail = Segment::new(Complex64::new(t, self.tail_im), Complex64::new(1e300, self.tail_im));
            d = d.min(tail.distance_to(one));
        }
        d
    }
}

/// Horizontal-then-vertical path from 0 or `+∞` to `z`.
pub fn build_l_path(kind: PathKind, a: f64, z: Complex64) -> Result<PathSpec> {
    let zero = Complex64::new(0.0, 0.0);
    let corner = Complex64::new(z.re, 0.0);
    let mut segments = Vec::new();
    let mut push = |s: Complex64, e: Complex64| {
        if s != e {
            segments.push(Segment::new(s, e));
        }
    };
    let (tail_start, tail_im) = match kind {
        PathKind::FromZero => {
            if !in_z0_certified(a, z) {
                return Err(Error::NotCertified {
                    region: "Z0",
                    a,
                    re: z.re,
                    im: z.im,
                });
            }
            push(zero, corner);
            push(corner, z);
            (None, 0.0)
        }
        PathKind::FromInfinity => {
            if !in_zinf_certified(a, z) {
                return Err(Error::NotCertified {
                    region: "Zinf",
                    a,
                    re: z.re,
                    im: z.im,
                });
            }
            let xp = x_pm(a).1;
            let t = z.re.max(xp) + TAIL_START;
            if z.re >= xp {
                push(Complex64::new(t, 0.0), corner);
                push(corner, z);
                (Some(t), 0.0)
            } else {
                push(Complex64::new(t, z.im), z);
                (Some(t), z.im)
            }
        }
    };
    let path = PathSpec {
        kind,
        segments,
        endpoint: z.into(),
        tail_start,
        tail_im,
    };
    if path.min_distance_to_turning_point() < TURNING_POINT_RADIUS {
        return Err(Error::TurningPoint {
            re: z.re,
            im: z.im,
            radius: TURNING_POINT_RADIUS,
        });
    }
    Ok(path)
}
