//! Semigroup trajectories `phi_t(z) = g^{-1}(g(z) + t)` and their slopes at
//! the Denjoy-Wolff point 1.

use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::conformal::ConformalMap;
use crate::error::{Error, Result};

/// Orbit samples of one start point.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub z0: Complex64,
    pub t_grid: Vec<f64>,
    pub points: Vec<Complex64>,
    /// `1 - points[k]`, computed without cancellation.
    pub gaps: Vec<Complex64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlopeCurve {
    pub t_grid: Vec<f64>,
    pub theta: Vec<f64>,
    /// Denjoy-Wolff point; always 1 under the map normalization.
    pub tau: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlopeInterval {
    pub lo: f64,
    pub hi: f64,
    pub tail_start: f64,
}

impl SlopeInterval {
    pub fn contains_interval(&self, lo: f64, hi: f64) -> bool {
        self.lo <= lo && hi <= self.hi
    }
}

/// Time discretization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TimeGrid {
    /// `0, t0, t0 r, t0 r^2, ...` with `count` positive samples ending at `t_max`.
    Geometric { t0: f64, t_max: f64, count: usize },
    /// `count + 1` equally spaced samples on `[0, t_max]`.
    Linear { t_max: f64, count: usize },
}

impl Default for TimeGrid {
    fn default() -> Self {
        TimeGrid::Geometric { t0: 0.01, t_max: 100.0, count: 200 }
    }
}

impl TimeGrid {
    pub fn points(&self) -> Result<Vec<f64>> {
        match *self {
            TimeGrid::Geometric { t0, t_max, count } => {
                if !(t0 > 0.0 && t_max > t0 && count >= 2) {
                    return Err(Error::Config(format!(
                        "geometric grid needs 0 < t0 < t_max and count >= 2, got t0 = {t0}, t_max = {t_max}, count = {count}"
                    )));
                }
                let ratio = (t_max / t0).ln() / (count - 1) as f64;
                let mut out = vec![0.0];
                out.extend((0..count).map(|k| t0 * (ratio * k as f64).exp()));
                *out.last_mut().unwrap() = t_max;
                Ok(out)
            }
            TimeGrid::Linear { t_max, count } => {
                if !(t_max > 0.0 && count >= 1) {
                    return Err(Error::Config(format!(
                        "linear grid needs t_max > 0 and count >= 1, got t_max = {t_max}, count = {count}"
                    )));
                }
                Ok((0..=count).map(|k| t_max * k as f64 / count as f64).collect())
            }
        }
    }
}

/// Samples `phi_t(z0)` on `t_grid` by continuation along the horizontal ray
/// from `g(z0)`.
pub fn trajectory(map: &ConformalMap, z0: Complex64, t_grid: &[f64]) -> Result<Trajectory> {
    if !(z0.norm() < 1.0) {
        return Err(Error::OutsideDisk(z0.norm()));
    }
    if t_grid.iter().any(|t| !(t.is_finite() && *t >= 0.0)) || t_grid.windows(2).any(|p| p[1] <= p[0]) {
        return Err(Error::Config("time grid must be increasing, finite and nonnegative".into()));
    }
    let zeta0 = map.forward(z0)?;
    let bound = map.polygon().trusted_bound();
    if let Some(&t_max) = t_grid.last() {
        if zeta0.re + t_max > bound {
            return Err(Error::LeavesTrustedRegion { re: zeta0.re + t_max, bound });
        }
    }
    let mut cursor = map.cursor_at(zeta0, z0);
    let mut points = Vec::with_capacity(t_grid.len());
    let mut gaps = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        if t == 0.0 {
            points.push(z0);
            gaps.push(1.0 - z0);
            continue;
        }
        let p = map.inverse_along(zeta0 + t, &mut cursor)?;
        points.push(p.z);
        gaps.push(p.gap);
    }
    Ok(Trajectory { z0, t_grid: t_grid.to_vec(), points, gaps })
}

/// `theta_k = Arg(1 - points[k])`.
pub fn slope_curve(traj: &Trajectory) -> SlopeCurve {
    SlopeCurve {
        t_grid: traj.t_grid.clone(),
        theta: traj.gaps.iter().map(|g| g.arg()).collect(),
        tau: Complex64::new(1.0, 0.0),
    }
}

/// Extremes of `theta` over `t >= (1 - tail_fraction) t_max`.
pub fn slope_interval(curve: &SlopeCurve, tail_fraction: f64) -> Result<SlopeInterval> {
    if !(tail_fraction > 0.0 && tail_fraction < 1.0) {
        return Err(Error::Config(format!("tail_fraction = {tail_fraction} must lie in (0, 1)")));
    }
    let t_max = curve.t_grid.last().copied().unwrap_or(0.0);
    let tail_start = (1.0 - tail_fraction) * t_max;
    slope_interval_from(curve, tail_start)
}

/// Extremes of `theta` over `t >= tail_start`.
pub fn slope_interval_from(curve: &SlopeCurve, tail_start: f64) -> Result<SlopeInterval> {
    let window: Vec<f64> =
        curve.t_grid.iter().zip(&curve.theta).filter(|(t, _)| **t >= tail_start).map(|(_, th)| *th).collect();
    if window.len() < 10 {
        return Err(Error::TooFewSamples { got: window.len(), need: 10 });
    }
    let lo = window.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = window.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(SlopeInterval { lo, hi, tail_start })
}

/// Infinitesimal generator `G = 1/g'`.
pub fn generator(map: &ConformalMap, z: Complex64) -> Result<Complex64> {
    Ok(1.0 / map.derivative(z)?)
}

/// `max_k |g'(phi_k) (phi(t_k + h) - phi(t_k - h)) / 2h - 1|` over the
/// positive grid times, where `h` is the finest step of the grid.
pub fn generator_deviation(map: &ConformalMap, traj: &Trajectory) -> Result<f64> {
    let h = traj.t_grid.windows(2).map(|p| p[1] - p[0]).fold(f64::INFINITY, f64::min);
    if !h.is_finite() {
        return Err(Error::TooFewSamples { got: traj.t_grid.len(), need: 2 });
    }
    let zeta0 = map.forward(traj.z0)?;
    let mut cursor = map.cursor_at(zeta0, traj.z0);
    let mut worst: f64 = 0.0;
    for &t in traj.t_grid.iter().filter(|t| **t >= h) {
        let before = map.inverse_along(zeta0 + (t - h), &mut cursor)?;
        let here = map.inverse_along(zeta0 + t, &mut cursor)?;
        let after = map.inverse_along(zeta0 + (t + h), &mut cursor)?;
        // differences of the gaps keep the digits lost in 1 - z
        let dphi = before.gap - after.gap;
        worst = worst.max((map.derivative_at(&here) * dphi / (2.0 * h) - 1.0).norm());
    }
    Ok(worst)
}

/// True when the orbit ends within `tol` of 1 and `|1 - phi_t|` settles into
/// a decrease over the last quarter of the grid: the final value is the
/// smallest of the quarter and the second half of the quarter is
/// non-increasing.
pub fn dw_check(traj: &Trajectory, tol: f64) -> bool {
    let n = traj.gaps.len();
    if n < 2 {
        return false;
    }
    let mags: Vec<f64> = traj.gaps.iter().map(|g| g.norm()).collect();
    let last = mags[n - 1];
    if !(last < tol) {
        return false;
    }
    let start = n - (n / 4).max(2);
    let quarter = &mags[start..];
    if quarter[..quarter.len() - 1].iter().any(|&m| m <= last) {
        return false;
    }
    let mid = quarter.len() / 2;
    quarter[mid..].windows(2).all(|p| p[1] <= p[0] * (1.0 + 1e-12))
}

/// Writes `t, re_w, im_w, theta` rows in full precision.
pub fn write_csv<W: Write>(traj: &Trajectory, out: &mut W) -> std::io::Result<()> {
    writeln!(out, "t, re_w, im_w, theta")?;
    for ((t, p), g) in traj.t_grid.iter().zip(&traj.points).zip(&traj.gaps) {
        writeln!(out, "{:.17e}, {:.17e}, {:.17e}, {:.17e}", t, p.re, p.im, g.arg())?;
    }
    Ok(())
}
