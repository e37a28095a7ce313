//! Floating-point cross-checks for the exact pipeline.
//!
//! Nothing here feeds back into the symbolic computations; these routines only
//! confirm them, and they share no code with the exact root machinery.

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactpoly::{Polynomial, RationalFunction};

pub const DEFAULT_GRID: usize = 4096;
pub const MAX_GRID: usize = 1 << 20;

fn to_f64(p: &Polynomial) -> Vec<f64> {
    p.coeffs()
        .iter()
        .map(|c| c.to_f64().unwrap_or(f64::NAN))
        .collect()
}

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

fn sign(x: f64) -> i8 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NumericRootCount {
    pub count: usize,
    pub samples: usize,
    /// Half-width of the sampled interval.
    pub bound: f64,
}

/// Counts sign changes of `p` on a grid that is geometric in `|z|` on each side
/// of zero, out to a root bound. Exact zeros at grid points are skipped over.
pub fn numeric_root_count(p: &Polynomial, samples: usize) -> NumericRootCount {
    let c = to_f64(p);
    let Some(&lead) = c.last() else {
        return NumericRootCount {
            count: 0,
            samples: 0,
            bound: 0.0,
        };
    };
    let bound = 1.0
        + c[..c.len() - 1]
            .iter()
            .map(|a| (a / lead).abs())
            .fold(0.0, f64::max);
    let side = (samples.saturating_sub(1) / 2).max(2);
    // Smallest sampled magnitude relative to the bound.
    let floor: f64 = 2f64.powi(-40);
    let mut grid = Vec::with_capacity(2 * side + 1);
    for i in 0..side {
        let t = i as f64 / (side - 1) as f64;
        grid.push(-bound * floor.powf(t));
    }
    grid.push(0.0);
    for i in (0..side).rev() {
        let t = i as f64 / (side - 1) as f64;
        grid.push(bound * floor.powf(t));
    }
    let mut count = 0;
    let mut last = 0i8;
    for &x in &grid {
        let s = sign(horner(&c, x));
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    NumericRootCount {
        count,
        samples: grid.len(),
        bound,
    }
}

/// Root count on successively doubled grids until it equals `expected` or the
/// grid cap is reached; returns the last numeric count.
pub fn refine_root_count(p: &Polynomial, expected: usize) -> NumericRootCount {
    let mut n = DEFAULT_GRID;
    loop {
        let r = numeric_root_count(p, n);
        if r.count == expected || n >= MAX_GRID {
            return r;
        }
        n *= 2;
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentCount {
    pub spheres: usize,
    pub tori: usize,
}

struct Homogeneous {
    num: Vec<f64>,
    den: Vec<f64>,
    order_at_infinity: i64,
    num_scale: f64,
    den_scale: f64,
}

impl Homogeneous {
    fn new(g: &RationalFunction) -> Self {
        let num = to_f64(g.numerator());
        let den = to_f64(g.denominator());
        Homogeneous {
            num_scale: num.iter().map(|a| a.abs()).sum(),
            den_scale: den.iter().map(|a| a.abs()).sum(),
            order_at_infinity: den.len() as i64 - num.len() as i64,
            num,
            den,
        }
    }

    /// `Σ a_i s^i c^(d−i)`
    fn eval(coeffs: &[f64], s: f64, c: f64) -> f64 {
        let d = coeffs.len().saturating_sub(1);
        coeffs
            .iter()
            .enumerate()
            .map(|(i, a)| a * s.powi(i as i32) * c.powi((d - i) as i32))
            .sum()
    }

    /// Sign of `g(tan φ)`, or `None` when the sample is too close to a zero or pole.
    fn sign_at(&self, phi: f64) -> Option<i8> {
        let (s, c) = phi.sin_cos();
        let eps = 1e-12;
        let n = Self::eval(&self.num, s, c);
        let d = Self::eval(&self.den, s, c);
        if n.abs() <= eps * self.num_scale || d.abs() <= eps * self.den_scale {
            return None;
        }
        let mut sg = sign(n) * sign(d);
        if self.order_at_infinity % 2 != 0 {
            if c.abs() <= eps {
                return None;
            }
            sg *= sign(c);
        }
        Some(sg)
    }
}

/// Counts maximal positive arcs of `g` on the projective line by sampling a
/// uniform angular grid, `z = tan φ` with `φ ∈ [0, π)`.
pub fn numeric_component_count(g: &RationalFunction, samples: usize) -> Result<ComponentCount> {
    if g.order_at_infinity() < 0 {
        return Err(Error::input("oracle", "g has a pole at infinity"));
    }
    let h = Homogeneous::new(g);
    let n = samples.max(256);
    let pitch = std::f64::consts::PI / n as f64;
    let mut signs = Vec::with_capacity(n);
    for i in 0..n {
        let phi = pitch * (i as f64 + 0.5);
        let s = h
            .sign_at(phi)
            .or_else(|| h.sign_at(phi + pitch / 3.0))
            .ok_or_else(|| {
                Error::OracleInconclusive(format!(
                    "sample at angle {phi} stays within rounding of a zero"
                ))
            })?;
        signs.push(s);
    }
    let positive = signs.iter().filter(|&&s| s > 0).count();
    if positive == n {
        return Ok(ComponentCount {
            spheres: 0,
            tori: 1,
        });
    }
    let spheres = (0..n)
        .filter(|&i| signs[i] > 0 && signs[(i + n - 1) % n] < 0)
        .count();
    Ok(ComponentCount { spheres, tori: 0 })
}

/// Component count on doubled grids until it equals `expected` or the cap is reached.
pub fn refine_component_count(
    g: &RationalFunction,
    expected: ComponentCount,
) -> Result<(ComponentCount, usize)> {
    let mut n = DEFAULT_GRID;
    loop {
        let r = numeric_component_count(g, n)?;
        if r == expected || n >= MAX_GRID {
            return Ok((r, n));
        }
        n *= 2;
    }
}
