use std::collections::HashMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::ComplexPoint;
use crate::error::{Error, Result};

/// Rectangular sampling grid for contouring.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub nx: usize,
    pub ny: usize,
    /// Radius of the excluded disc around `z = 0`.
    pub exclude_radius: f64,
}

impl Default for Grid {
    fn default() -> Self {
        Self {
            x_min: -3.0,
            x_max: 5.0,
            y_min: 0.0,
            y_max: 4.0,
            nx: 800,
            ny: 800,
            exclude_radius: 0.02,
        }
    }
}

impl Grid {
    fn validate(&self) -> Result<()> {
        if !(self.x_min < self.x_max && self.y_min < self.y_max) || self.nx < 2 || self.ny < 2 {
            return Err(Error::InvalidArgument("grid needs x_min < x_max, y_min < y_max and at least 2 points per axis".into()));
        }
        Ok(())
    }

    fn point(&self, i: usize, j: usize) -> Complex64 {
        Complex64::new(
            self.x_min + (self.x_max - self.x_min) * i as f64 / (self.nx - 1) as f64,
            self.y_min + (self.y_max - self.y_min) * j as f64 / (self.ny - 1) as f64,
        )
    }
}

/// One connected piece of a level curve.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Polyline {
    pub curve_id: usize,
    pub c: f64,
    pub points: Vec<ComplexPoint>,
}

/// `Re ξ(z) = (x - 1)/2 - ln|z|/2`, continuous across the cut.
fn re_xi(z: Complex64) -> f64 {
    0.5 * (z.re - 1.0) - 0.5 * z.norm().ln()
}

/// Edge of the grid, named by its lower-left vertex and direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct Edge {
    i: usize,
    j: usize,
    vertical: bool,
}

/// Level curves `Re ξ = c` for each `c` by marching squares. Cells touching
/// the excluded disc around the origin are skipped.
pub fn level_curves(c_values: &[f64], grid: &Grid) -> Result<Vec<Polyline>> {
    grid.validate()?;
    let (nx, ny) = (grid.nx, grid.ny);
    let mut vals = vec![f64::NAN; nx * ny];
    for j in 0..ny {
        for i in 0..nx {
            let z = grid.point(i, j);
            if z.norm() > grid.exclude_radius {
                vals[j * nx + i] = re_xi(z);
            }
        }
    }
    let v = |i: usize, j: usize| vals[j * nx + i];
    let mut out = Vec::new();
    for &c in c_values {
        let cross = |e: Edge| -> Complex64 {
            let (i2, j2) = if e.vertical { (e.i, e.j + 1) } else { (e.i + 1, e.j) };
            let (f1, f2) = (v(e.i, e.j) - c, v(i2, j2) - c);
            let s = if f1 == f2 { 0.5 } else { f1 / (f1 - f2) };
            let (p, q) = (grid.point(e.i, e.j), grid.point(i2, j2));
            p + (q - p) * s
        };
        let mut adj: HashMap<Edge, Vec<Edge>> = HashMap::new();
        let mut link = |a: Edge, b: Edge| {
            adj.entry(a).or_default().push(b);
            adj.entry(b).or_default().push(a);
        };
        for j in 0..ny - 1 {
            for i in 0..nx - 1 {
                let corners = [v(i, j), v(i + 1, j), v(i + 1, j + 1), v(i, j + 1)];
                if corners.iter().any(|x| x.is_nan()) {
                    continue;
                }
                let mut idx = 0;
                for (k, x) in corners.iter().enumerate() {
                    if *x >= c {
                        idx |= 1 << k;
                    }
                }
                let bottom = Edge { i, j, vertical: false };
                let right = Edge { i: i + 1, j, vertical: true };
                let top = Edge { i, j: j + 1, vertical: false };
                let left = Edge { i, j, vertical: true };
                let centre_above = corners.iter().sum::<f64>() / 4.0 >= c;
                match idx {
                    0 | 15 => {}
                    1 | 14 => link(left, bottom),
                    2 | 13 => link(bottom, right),
                    3 | 12 => link(left, right),
                    4 | 11 => link(right, top),
                    6 | 9 => link(bottom, top),
                    7 | 8 => link(left, top),
                    5 => {
                        if centre_above {
                            link(left, top);
                            link(bottom, right);
                        } else {
                            link(left, bottom);
                            link(right, top);
                        }
                    }
                    10 => {
                        if centre_above {
                            link(left, bottom);
                            link(right, top);
                        } else {
                            link(left, top);
                            link(bottom, right);
                        }
                    }
                    _ => unreachable!(),
                }
            }
        }
        // walk chains, starting from open ends first
        let mut seen: HashMap<Edge, bool> = HashMap::new();
        let mut starts: Vec<Edge> = adj.iter().filter(|(_, n)| n.len() == 1).map(|(e, _)| *e).collect();
        starts.sort_by_key(|e| (e.j, e.i, e.vertical));
        let mut rest: Vec<Edge> = adj.keys().copied().collect();
        rest.sort_by_key(|e| (e.j, e.i, e.vertical));
        starts.extend(rest);
        for s in starts {
            if seen.contains_key(&s) {
                continue;
            }
            let mut chain = vec![s];
            seen.insert(s, true);
            let mut cur = s;
            loop {
                let next = adj[&cur].iter().find(|e| !seen.contains_key(e)).copied();
                match next {
                    Some(nx_e) => {
                        seen.insert(nx_e, true);
                        chain.push(nx_e);
                        cur = nx_e;
                    }
                    None => {
                        if adj[&cur].contains(&s) && chain.len() > 2 {
                            chain.push(s);
                        }
                        break;
                    }
                }
            }
            if chain.len() >= 2 {
                out.push(Polyline {
                    curve_id: out.len(),
                    c,
                    points: chain.into_iter().map(|e| cross(e).into()).collect(),
                });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_grid(y_min: f64) -> Grid {
        Grid {
            x_min: -3.0,
            x_max: 5.0,
            y_min,
            y_max: 4.0,
            nx: 161,
            ny: if y_min < 0.0 { 161 } else { 81 },
            exclude_radius: 0.02,
        }
    }

    #[test]
    fn stokes_curve_through_turning_point() {
        let curves = level_curves(&[0.0], &small_grid(0.0)).unwrap();
        let near_one = curves
            .iter()
            .flat_map(|c| c.points.iter())
            .any(|p| (p.to_c64() - Complex64::new(1.0, 0.0)).norm() < 0.06);
        assert!(near_one);
        for c in &curves {
            for p in &c.points {
                assert!(re_xi(p.to_c64()).abs() < 2e-3);
            }
        }
    }

    #[test]
    fn symmetric_under_conjugation() {
        let curves = level_curves(&[0.5, -0.2], &small_grid(-4.0)).unwrap();
        let pts: Vec<Complex64> = curves.iter().flat_map(|c| c.points.iter().map(|p| p.to_c64())).collect();
        for p in pts.iter().step_by(7) {
            let q = p.conj();
            let best = pts.iter().map(|r| (r - q).norm()).fold(f64::INFINITY, f64::min);
            assert!(best < 1e-9, "{p}");
        }
    }
}
