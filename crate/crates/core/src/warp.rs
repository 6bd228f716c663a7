//! Warping of the triangle `0 <= u <= v <= 1` into the complex plane.
//!
//! Both maps send the diagonal to the origin and a cornerpoint at distance
//! `d` from the diagonal to a complex number of modulus `d`. [`Transform::T`]
//! rotates by an angle equal to the distance of the point from the origin of
//! the plane; [`Transform::R`] sends segments orthogonal to the diagonal onto
//! rays from the origin.

use std::collections::HashMap;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::diagram::PersistenceDiagram;
use crate::error::{Error, Result};

/// Slack for normalization round-off at the triangle boundary.
pub const TRIANGLE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Transform {
    T,
    R,
}

impl Transform {
    pub fn apply(self, u: f64, v: f64) -> Result<Complex64> {
        match self {
            Transform::T => warp_t(u, v),
            Transform::R => warp_r(u, v),
        }
    }
}

impl std::str::FromStr for Transform {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "T" | "t" => Ok(Transform::T),
            "R" | "r" => Ok(Transform::R),
            other => Err(Error::InvalidArgument(format!(
                "unknown transform `{other}`, expected T or R"
            ))),
        }
    }
}

fn check_triangle(u: f64, v: f64) -> Result<()> {
    let tol = TRIANGLE_TOLERANCE;
    let inside = u >= -tol && v <= 1.0 + tol && u <= v + tol;
    if inside {
        Ok(())
    } else {
        Err(Error::Domain { u, v })
    }
}

pub fn warp_t(u: f64, v: f64) -> Result<Complex64> {
    check_triangle(u, v)?;
    let half = (v - u) / 2.0;
    let alpha = u.hypot(v);
    let (sin, cos) = alpha.sin_cos();
    Ok(Complex64::new(half * (cos - sin), half * (cos + sin)))
}

pub fn warp_r(u: f64, v: f64) -> Result<Complex64> {
    check_triangle(u, v)?;
    let radius = (v - u) * FRAC_1_SQRT_2;
    let theta = PI * (u + v);
    let (sin, cos) = theta.sin_cos();
    Ok(Complex64::new(radius * cos, radius * sin))
}

/// Image of a diagram under a warping transform: distinct complex values
/// with multiplicities.
#[derive(Debug, Clone, PartialEq)]
pub struct WarpedMultiset {
    points: Vec<(Complex64, u32)>,
    source_count: usize,
}

impl WarpedMultiset {
    pub fn points(&self) -> &[(Complex64, u32)] {
        &self.points
    }

    /// Cornerpoint count of the source diagram, multiplicities included.
    pub fn source_count(&self) -> usize {
        self.source_count
    }

    pub fn total_multiplicity(&self) -> usize {
        self.points.iter().map(|&(_, m)| m as usize).sum()
    }
}

fn bits(z: Complex64) -> (u64, u64) {
    // +0.0 and -0.0 must share a key
    ((z.re + 0.0).to_bits(), (z.im + 0.0).to_bits())
}

/// Maps every cornerpoint of a finitized, normalized diagram, merging
/// coincident images.
pub fn warp_diagram(diagram: &PersistenceDiagram, transform: Transform) -> Result<WarpedMultiset> {
    if diagram.has_cornerlines() {
        return Err(Error::NotFinitized);
    }
    let mut points: Vec<(Complex64, u32)> = Vec::with_capacity(diagram.len());
    let mut index: HashMap<(u64, u64), usize> = HashMap::with_capacity(diagram.len());
    for p in diagram.points() {
        let z = transform.apply(p.birth, p.death)?;
        match index.get(&bits(z)) {
            Some(&i) => points[i].1 += p.multiplicity,
            None => {
                index.insert(bits(z), points.len());
                points.push((z, p.multiplicity));
            }
        }
    }
    Ok(WarpedMultiset {
        points,
        source_count: diagram.count(),
    })
}
