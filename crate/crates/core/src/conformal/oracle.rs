//! Closed-form maps used to validate the numerical engine.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The quadrant `{Re z > u, Im z > -w}` with corner `u - i w`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadrantMapParams {
    pub u: f64,
    pub w: f64,
}

impl QuadrantMapParams {
    pub fn new(u: f64, w: f64) -> Result<Self> {
        if !(u > 0.0 && w >= 1.0) {
            return Err(Error::Config(format!("quadrant needs u > 0 and w >= 1, got u = {u}, w = {w}")));
        }
        Ok(QuadrantMapParams { u, w })
    }

    pub fn corner(&self) -> Complex64 {
        Complex64::new(self.u, -self.w)
    }

    /// `explicit_quadrant_map(0)`, the image of the disk center.
    pub fn center(&self) -> Complex64 {
        self.corner() + omega()
    }
}

fn omega() -> Complex64 {
    Complex64::new(1.0, 1.0) / 2f64.sqrt()
}

/// `f(z) = omega sqrt((1 + z)/(1 - z)) + u - i w` with the principal root.
pub fn explicit_quadrant_map(p: &QuadrantMapParams, z: Complex64) -> Result<Complex64> {
    if z.norm() >= 1.0 {
        return Err(Error::OutsideDisk(z.norm()));
    }
    Ok(omega() * ((1.0 + z) / (1.0 - z)).sqrt() + p.corner())
}

/// Algebraic inverse: `s = (zeta - u + i w)(1 - i)/sqrt 2`, `z = (s^2 - 1)/(s^2 + 1)`.
pub fn explicit_quadrant_inverse(p: &QuadrantMapParams, zeta: Complex64) -> Result<Complex64> {
    if !(zeta.re > p.u && zeta.im > -p.w) {
        return Err(Error::OutsideQuadrant(zeta.to_string()));
    }
    let s2 = explicit_quadrant_s2(p, zeta);
    Ok((s2 - 1.0) / (s2 + 1.0))
}

/// `1 - explicit_quadrant_inverse(zeta)` without cancellation: `2 / (s^2 + 1)`.
pub fn explicit_quadrant_gap(p: &QuadrantMapParams, zeta: Complex64) -> Result<Complex64> {
    if !(zeta.re > p.u && zeta.im > -p.w) {
        return Err(Error::OutsideQuadrant(zeta.to_string()));
    }
    Ok(2.0 / (explicit_quadrant_s2(p, zeta) + 1.0))
}

fn explicit_quadrant_s2(p: &QuadrantMapParams, zeta: Complex64) -> Complex64 {
    let s = (zeta - p.corner()) * Complex64::new(1.0, -1.0) / 2f64.sqrt();
    s * s
}

/// `z -> 2z/(1 - z)`, the normalized map onto `{Re z > -1}`.
pub fn half_plane_map(z: Complex64) -> Complex64 {
    2.0 * z / (1.0 - z)
}

/// `zeta -> zeta/(zeta + 2)`.
pub fn half_plane_inverse(zeta: Complex64) -> Complex64 {
    zeta / (zeta + 2.0)
}

/// Semigroup orbit of 0 for the half-plane: `t/(t + 2)`.
pub fn half_plane_orbit(t: f64) -> f64 {
    t / (t + 2.0)
}
