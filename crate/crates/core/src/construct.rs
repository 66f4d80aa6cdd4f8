//! Numerical search for staircases whose orbit of 0 swings between slopes
//! close to `-pi/2` and `pi/2`.
//!
//! Stages are indexed by the witness index `n >= 2`: even `n` extends the
//! staircase downwards and asks for `theta(xi_n) <= -(pi/2)(1 - eps_n)`, odd
//! `n` extends it upwards and asks for `theta(xi_n) >= (pi/2)(1 - eps_n)`.
//! The default schedule is `eps_n = 1/(2 floor(n/2))`.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::conformal::{build_map_warm, ConformalMap, MapSettings, MapTolerances, RealAxisCursor};
use crate::dynamics::{slope_curve, slope_interval_from, trajectory, SlopeInterval};
use crate::error::{Error, Result};
use crate::staircase::{build_params, realize, realize_with_closing, StaircaseParams, StaircasePolygon};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    Up,
    Down,
}

impl Direction {
    /// Down for even witness indices, Up for odd ones.
    pub fn for_index(n: usize) -> Direction {
        if n.is_multiple_of(2) {
            Direction::Down
        } else {
            Direction::Up
        }
    }

    pub fn flip(self) -> Direction {
        match self {
            Direction::Up => Direction::Down,
            Direction::Down => Direction::Up,
        }
    }

    fn sign(self) -> f64 {
        match self {
            Direction::Up => 1.0,
            Direction::Down => -1.0,
        }
    }
}

/// Default `eps_n = 1/(2 floor(n/2))` for witness index `n >= 2`.
pub fn default_epsilon(n: usize) -> f64 {
    1.0 / (2.0 * (n / 2).max(1) as f64)
}

/// `(pi/2)(1 - eps)`.
pub fn threshold(epsilon: f64) -> f64 {
    FRAC_PI_2 * (1.0 - epsilon)
}

/// True when `theta` clears the threshold of `epsilon` in `direction`.
pub fn clears(direction: Direction, epsilon: f64, theta: f64) -> bool {
    direction.sign() * theta >= threshold(epsilon)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SearchConfig {
    /// First extension length; defaults to `max(v_last, w_last)`.
    pub m0: Option<f64>,
    pub growth: f64,
    /// `M_max = cap_factor * M0`.
    pub cap_factor: f64,
    /// Number of witness candidates per scan.
    pub xi_points: usize,
    pub resolution: usize,
    /// Tail of the continued domain used to re-check a witness, and of the
    /// final domain, as a multiple of the last extension length.
    pub tail_factor: f64,
    pub tolerances: MapTolerances,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            m0: None,
            growth: 2.0,
            cap_factor: 65536.0,
            xi_points: 48,
            resolution: 8,
            tail_factor: 2.0,
            tolerances: MapTolerances::default(),
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if let Some(m0) = self.m0 {
            if !(m0 > 0.0 && m0.is_finite()) {
                return Err(Error::Config(format!("m0 = {m0} must be positive")));
            }
        }
        if !(self.growth > 1.0 && self.growth.is_finite()) {
            return Err(Error::Config(format!("growth = {} must exceed 1", self.growth)));
        }
        if !(self.cap_factor >= 1.0) {
            return Err(Error::Config(format!("cap_factor = {} must be at least 1", self.cap_factor)));
        }
        if self.xi_points < 2 {
            return Err(Error::Config("xi_points must be at least 2".into()));
        }
        if !(self.tail_factor > 0.0) {
            return Err(Error::Config(format!("tail_factor = {} must be positive", self.tail_factor)));
        }
        if self.resolution < crate::conformal::MIN_RESOLUTION {
            return Err(Error::ResolutionTooLow { got: self.resolution, min: crate::conformal::MIN_RESOLUTION });
        }
        Ok(())
    }

    fn settings(&self, resolution: usize) -> MapSettings {
        MapSettings::new(resolution).with_tolerances(self.tolerances)
    }
}

#[derive(Debug, Clone)]
pub struct ExtensionQuery {
    pub prefix: StaircaseParams,
    pub direction: Direction,
    pub epsilon: f64,
    pub search: SearchConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtensionResult {
    #[serde(rename = "M")]
    pub m: f64,
    pub xi: f64,
    pub theta: f64,
    pub map_accuracy: f64,
}

/// Heights of the extension rectangle `R(u_last, u_last + M, v, w)`.
pub fn extension_heights(prefix: &StaircaseParams, direction: Direction, m: f64) -> (f64, f64) {
    match direction {
        Direction::Up => (prefix.v_last() + m, prefix.w_last()),
        Direction::Down => (prefix.v_last(), prefix.w_last() + m),
    }
}

/// Candidate witnesses `u_last + M 2^{-s}`, `s` evenly spaced from 10 down to
/// 1, increasing and strictly inside the trusted half of the extension.
pub fn xi_grid(u_last: f64, m: f64, points: usize) -> Vec<f64> {
    (0..points)
        .map(|k| {
            let s = 10.0 - 9.0 * k as f64 / (points - 1) as f64;
            u_last + m * (-s * std::f64::consts::LN_2).exp()
        })
        .collect()
}

fn slopes_on(map: &ConformalMap, xs: &[f64]) -> Result<Vec<f64>> {
    let mut cursor = RealAxisCursor::new();
    xs.iter().map(|&x| Ok(map.inverse_along(Complex64::new(x, 0.0), &mut cursor)?.slope())).collect()
}

fn slope_at(map: &ConformalMap, x: f64) -> Result<f64> {
    Ok(map.inverse_full(Complex64::new(x, 0.0))?.slope())
}

/// Extension search: grows `M` geometrically, scanning each bounded domain
/// (prefix plus the extension rectangle as its closing wall) for the smallest
/// witness. A witness is accepted once it clears the threshold by
/// `2 accuracy` at doubled resolution and also on the domain where the
/// extension is continued by a tail of `tail_factor * M`.
pub fn find_extension(q: &ExtensionQuery) -> Result<ExtensionResult> {
    q.prefix.validate()?;
    q.search.validate()?;
    if !(q.epsilon > 0.0 && q.epsilon < 1.0) {
        return Err(Error::Config(format!("epsilon = {} must lie in (0, 1)", q.epsilon)));
    }
    let cfg = &q.search;
    let m0 = cfg.m0.unwrap_or_else(|| q.prefix.v_last().max(q.prefix.w_last()));
    let m_max = cfg.cap_factor * m0;
    let u_last = q.prefix.u_last();
    let settings = cfg.settings(cfg.resolution);
    let mut best = f64::NEG_INFINITY;
    let mut warm: Option<ConformalMap> = None;
    let mut m = m0;
    while m <= m_max * (1.0 + 1e-12) {
        let (v, w) = extension_heights(&q.prefix, q.direction, m);
        let poly = realize_with_closing(&q.prefix, m, v, w)?;
        let map = build_map_warm(&poly, &settings, warm.as_ref())?;
        let xs = xi_grid(u_last, m, cfg.xi_points);
        let thetas = slopes_on(&map, &xs)?;
        for (&xi, &theta) in xs.iter().zip(&thetas) {
            best = best.max(q.direction.sign() * theta);
            if !clears(q.direction, q.epsilon, theta) {
                continue;
            }
            if let Some(result) = confirm(q, m, xi, theta, &map, &poly)? {
                return Ok(result);
            }
        }
        warm = Some(map);
        m *= cfg.growth;
    }
    Err(Error::CapExceeded { m_max, best, threshold: threshold(q.epsilon) })
}

fn confirm(
    q: &ExtensionQuery,
    m: f64,
    xi: f64,
    theta: f64,
    map: &ConformalMap,
    poly: &StaircasePolygon,
) -> Result<Option<ExtensionResult>> {
    let cfg = &q.search;
    let fine = build_map_warm(poly, &cfg.settings(2 * cfg.resolution), Some(map))?;
    let accuracy = map.accuracy().max(fine.accuracy());
    let theta_fine = slope_at(&fine, xi)?;
    let margin = q.direction.sign() * theta_fine - threshold(q.epsilon);
    if margin < 2.0 * accuracy {
        return Ok(None);
    }
    let (v, w) = extension_heights(&q.prefix, q.direction, m);
    let stage = q.prefix.with_stage(q.prefix.u_last() + m, v, w)?;
    let continued = realize(&stage, cfg.tail_factor * m)?;
    let cmap = build_map_warm(&continued, &cfg.settings(cfg.resolution), Some(map))?;
    let theta_cont = slope_at(&cmap, xi)?;
    if q.direction.sign() * theta_cont - threshold(q.epsilon) < 2.0 * accuracy.max(cmap.accuracy()) {
        return Ok(None);
    }
    Ok(Some(ExtensionResult { m, xi, theta, map_accuracy: accuracy.max(cmap.accuracy()) }))
}

/// One accepted stage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageRecord {
    pub n: usize,
    pub direction: Direction,
    pub epsilon_n: f64,
    /// Extension rectangle `R(u_n, u_n + M_n, v_n, w_n)`.
    pub u_n: f64,
    pub v_n: f64,
    pub w_n: f64,
    #[serde(rename = "M_n")]
    pub m_n: f64,
    pub xi_n: f64,
    pub theta_n: f64,
    pub map_accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstructionCertificate {
    pub stages: Vec<StageRecord>,
    pub final_params: StaircaseParams,
    /// Closing tail of the final domain.
    pub tail_length: f64,
    pub resolution: usize,
}

impl ConstructionCertificate {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn max_accuracy(&self) -> f64 {
        self.stages.iter().map(|s| s.map_accuracy).fold(0.0, f64::max)
    }

    /// The final staircase closed by the certificate's tail.
    pub fn final_polygon(&self, tail_scale: f64) -> Result<StaircasePolygon> {
        realize(&self.final_params, tail_scale * self.tail_length)
    }
}

/// The staircase `u = [1, 2]`, `v = w = [1]` that the construction starts from.
pub fn default_prefix() -> StaircaseParams {
    build_params(vec![1.0, 2.0], vec![1.0], vec![1.0]).expect("valid base prefix")
}

/// Runs `stage_count` alternating extension searches from `prefix`,
/// starting at witness index 2.
pub fn build_counterexample(
    stage_count: usize,
    eps_schedule: Option<&[f64]>,
    cfg: &SearchConfig,
    prefix: Option<StaircaseParams>,
) -> Result<ConstructionCertificate> {
    if stage_count < 2 {
        return Err(Error::Config(format!("stage_count = {stage_count} must be at least 2")));
    }
    if let Some(eps) = eps_schedule {
        if eps.len() < stage_count {
            return Err(Error::Config(format!("eps schedule has {} entries for {stage_count} stages", eps.len())));
        }
    }
    cfg.validate()?;
    let mut params = prefix.unwrap_or_else(default_prefix);
    params.validate()?;
    let mut stages = Vec::with_capacity(stage_count);
    for i in 0..stage_count {
        let n = i + 2;
        let direction = Direction::for_index(n);
        let epsilon = eps_schedule.map(|e| e[i]).unwrap_or_else(|| default_epsilon(n));
        let query = ExtensionQuery { prefix: params.clone(), direction, epsilon, search: cfg.clone() };
        let found = find_extension(&query).map_err(|e| Error::StageFailed { stage: n, source: Box::new(e) })?;
        let (v, w) = extension_heights(&params, direction, found.m);
        let u_n = params.u_last();
        params = params.with_stage(u_n + found.m, v, w)?;
        stages.push(StageRecord {
            n,
            direction,
            epsilon_n: epsilon,
            u_n,
            v_n: v,
            w_n: w,
            m_n: found.m,
            xi_n: found.xi,
            theta_n: found.theta,
            map_accuracy: found.map_accuracy,
        });
    }
    let last_m = stages.last().map(|s| s.m_n).unwrap_or(1.0);
    Ok(ConstructionCertificate {
        stages,
        final_params: params,
        tail_length: cfg.tail_factor * last_m,
        resolution: cfg.resolution,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageCheck {
    pub n: usize,
    pub xi: f64,
    pub threshold: f64,
    pub theta_certified: f64,
    pub theta_recomputed: f64,
    pub delta: f64,
    pub interlacing: bool,
    pub clears_threshold: bool,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub strictness: f64,
    pub resolution: usize,
    pub tail_length: f64,
    pub map_accuracy: f64,
    pub params_valid: bool,
    pub stages: Vec<StageCheck>,
    pub passed: bool,
    /// Set when the final domain could not be mapped.
    pub error: Option<String>,
}

/// Recomputes every witness slope on the final domain with resolution and
/// tail scaled by `strictness`, and checks interlacing and thresholds.
pub fn verify_certificate(cert: &ConstructionCertificate, strictness: f64) -> VerificationReport {
    verify_with(cert, strictness, &MapTolerances::default())
}

pub fn verify_with(cert: &ConstructionCertificate, strictness: f64, tolerances: &MapTolerances) -> VerificationReport {
    let strictness = if strictness.is_finite() && strictness >= 1.0 { strictness } else { 1.0 };
    let resolution = ((cert.resolution as f64) * strictness).ceil() as usize;
    let tail_length = cert.tail_length * strictness;
    let params_valid = cert.final_params.validate().is_ok() && stages_match_params(cert);
    let mut report = VerificationReport {
        strictness,
        resolution,
        tail_length,
        map_accuracy: f64::NAN,
        params_valid,
        stages: Vec::new(),
        passed: false,
        error: None,
    };
    let map = realize(&cert.final_params, tail_length).and_then(|poly| {
        build_map_warm(&poly, &MapSettings::new(resolution).with_tolerances(*tolerances), None)
    });
    let map = match map {
        Ok(m) => m,
        Err(e) => {
            report.error = Some(e.to_string());
            return report;
        }
    };
    report.map_accuracy = map.accuracy();
    let checks: Vec<StageCheck> = cert
        .stages
        .par_iter()
        .map(|s| {
            let interlacing = s.u_n < s.xi_n && s.xi_n < s.u_n + s.m_n;
            let theta = slope_at(&map, s.xi_n).unwrap_or(f64::NAN);
            let clears_threshold = theta.is_finite() && clears(s.direction, s.epsilon_n, theta);
            StageCheck {
                n: s.n,
                xi: s.xi_n,
                threshold: s.direction.sign() * threshold(s.epsilon_n),
                theta_certified: s.theta_n,
                theta_recomputed: theta,
                delta: theta - s.theta_n,
                interlacing,
                clears_threshold,
                passed: interlacing && clears_threshold,
            }
        })
        .collect();
    report.passed = params_valid && !checks.is_empty() && checks.iter().all(|c| c.passed);
    report.stages = checks;
    report
}

/// Stage rectangles must be the trailing stages of `final_params`, with
/// increasing witness indices and the documented directions.
fn stages_match_params(cert: &ConstructionCertificate) -> bool {
    let p = &cert.final_params;
    let k = cert.stages.len();
    if p.stage_count() < k {
        return false;
    }
    let off = p.stage_count() - k;
    cert.stages.iter().enumerate().all(|(i, s)| {
        let j = off + i;
        s.direction == Direction::for_index(s.n)
            && (i == 0 || s.n == cert.stages[i - 1].n + 1)
            && s.u_n == p.u[j]
            && s.u_n + s.m_n == p.u[j + 1]
            && s.v_n == p.v[j]
            && s.w_n == p.w[j]
    })
}

/// Slope interval of the orbit of 0 on the final domain over
/// `t in [xi_first, xi_last]`, sampled with `samples` geometric points.
pub fn certificate_slope_interval(
    cert: &ConstructionCertificate,
    resolution: usize,
    samples: usize,
) -> Result<SlopeInterval> {
    let first = cert.stages.first().ok_or_else(|| Error::Config("certificate has no stages".into()))?;
    let last = cert.stages.last().unwrap();
    let poly = cert.final_polygon(1.0)?;
    let map = build_map_warm(&poly, &MapSettings::new(resolution), None)?;
    let (a, b) = (first.xi_n, last.xi_n);
    let mut grid = vec![0.0];
    let count = samples.max(10);
    grid.extend((0..count).map(|k| a * (b / a).powf(k as f64 / (count - 1) as f64)));
    *grid.last_mut().unwrap() = b;
    let traj = trajectory(&map, Complex64::new(0.0, 0.0), &grid)?;
    slope_interval_from(&slope_curve(&traj), a)
}
