//! Normalized Riemann maps of the unit disk onto rectilinear polygons.
//!
//! A [`ConformalMap`] `g` satisfies `g(0) = center` (the origin for staircase
//! domains) and sends `z = 1` to the point where the positive real ray from
//! the center leaves the polygon, the finite-domain form of
//! `g^{-1}(t) -> 1` as `t -> +inf`.
//!
//! Internally the disk is replaced by the upper half-plane through
//! `w = i (1 + z)/(1 - z)`: `w = i` is the preimage of the center and
//! `w = inf` the exit point, so points deep in the tail have large `w`
//! instead of crowding against `z = 1`.

mod oracle;
mod quadrature;
mod sc;

pub use oracle::{
    explicit_quadrant_gap, explicit_quadrant_inverse, explicit_quadrant_map, half_plane_inverse,
    half_plane_map, half_plane_orbit, QuadrantMapParams,
};
pub use quadrature::{gauss_jacobi, GaussRule};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::staircase::{contains, StaircasePolygon};
use sc::{cdiv, ParamProblem, ScMap};

/// Smallest accepted resolution (Gauss nodes per quadrature panel).
pub const MIN_RESOLUTION: usize = 4;
/// Default resolution.
pub const DEFAULT_RESOLUTION: usize = 8;
/// `derivative` and `generator` refuse points with `|z| > 1 - DERIVATIVE_MARGIN`.
pub const DERIVATIVE_MARGIN: f64 = 1e-10;
/// Lower bound reported for `accuracy`; the Newton and parameter solvers do
/// not resolve below this level.
pub const ACCURACY_FLOOR: f64 = 1e-10;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Tolerances and budgets for mapping and oracle comparisons.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MapTolerances {
    /// Half-plane oracle tolerance.
    pub tau1: f64,
    /// Quadrant oracle tolerance.
    pub tau2: f64,
    /// Newton iteration budget for one inversion step.
    pub newton_budget: usize,
    /// Max residual accepted from the parameter problem.
    pub solver_tol: f64,
    /// Iteration cap of the parameter solver.
    pub solver_iterations: usize,
}

impl Default for MapTolerances {
    fn default() -> Self {
        MapTolerances { tau1: 1e-3, tau2: 1e-3, newton_budget: 100, solver_tol: 1e-12, solver_iterations: 200 }
    }
}

#[derive(Debug, Clone)]
pub struct MapSettings {
    pub resolution: usize,
    /// Image of the disk center.
    pub center: Complex64,
    pub tolerances: MapTolerances,
}

impl MapSettings {
    pub fn new(resolution: usize) -> Self {
        MapSettings { resolution, center: Complex64::new(0.0, 0.0), tolerances: MapTolerances::default() }
    }

    pub fn with_center(mut self, center: Complex64) -> Self {
        self.center = center;
        self
    }

    pub fn with_tolerances(mut self, tolerances: MapTolerances) -> Self {
        self.tolerances = tolerances;
        self
    }
}

/// A numerical Riemann map `g` of the unit disk onto a polygon.
#[derive(Debug, Clone)]
pub struct ConformalMap {
    sc: ScMap,
    polygon: StaircasePolygon,
    center: Complex64,
    /// Abscissa where the real ray from the center leaves the polygon.
    exit: f64,
    accuracy: f64,
    budget: usize,
}

/// Result of an inversion: the disk point, `1 - z` computed without
/// cancellation, and the half-plane coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Preimage {
    pub z: Complex64,
    pub gap: Complex64,
    pub w: Complex64,
}

impl Preimage {
    /// `Arg(1 - z)`, the slope angle at the Denjoy-Wolff point 1.
    pub fn slope(&self) -> f64 {
        self.gap.arg()
    }
}

/// Warm-start state for inversions along a path; owned by the caller.
#[derive(Debug, Clone, Default)]
pub struct RealAxisCursor {
    last: Option<(Complex64, Complex64)>,
}

impl RealAxisCursor {
    pub fn new() -> Self {
        Self::default()
    }
}

/// Builds the map at `resolution` with the default normalization.
pub fn build_map(poly: &StaircasePolygon, resolution: usize) -> Result<ConformalMap> {
    build_map_with(poly, &MapSettings::new(resolution))
}

/// Builds the map and populates `accuracy` from a doubled-resolution rebuild.
pub fn build_map_with(poly: &StaircasePolygon, settings: &MapSettings) -> Result<ConformalMap> {
    build_map_warm(poly, settings, None)
}

/// Like [`build_map_with`], seeding the parameter problem from a map with the
/// same vertex structure when one is given.
pub fn build_map_warm(
    poly: &StaircasePolygon,
    settings: &MapSettings,
    warm: Option<&ConformalMap>,
) -> Result<ConformalMap> {
    let mut coarse = build_raw(poly, settings, warm.map(Seed::Map))?;
    let fine_settings = MapSettings { resolution: 2 * settings.resolution, ..settings.clone() };
    let fine = build_raw(poly, &fine_settings, Some(Seed::Prevertices(&coarse.sc.kernel.x)))?;
    let estimate = compare_maps(&coarse, &fine)?;
    coarse.accuracy = estimate.max(ACCURACY_FLOOR);
    Ok(coarse)
}

/// Resolution-doubling Cauchy estimate: the largest disk-distance between the
/// maps at `resolution` and `2 resolution` over a fixed probe set.
pub fn accuracy_estimate(poly: &StaircasePolygon, resolution: usize) -> Result<f64> {
    accuracy_estimate_with(poly, &MapSettings::new(resolution))
}

pub fn accuracy_estimate_with(poly: &StaircasePolygon, settings: &MapSettings) -> Result<f64> {
    let coarse = build_raw(poly, settings, None)?;
    let fine_settings = MapSettings { resolution: 2 * settings.resolution, ..settings.clone() };
    let fine = build_raw(poly, &fine_settings, Some(Seed::Prevertices(&coarse.sc.kernel.x)))?;
    compare_maps(&coarse, &fine)
}

fn compare_maps(coarse: &ConformalMap, fine: &ConformalMap) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for z in standard_grid() {
        let zeta = coarse.forward(z)?;
        let w_guess = fine.disk_to_half_plane(z);
        let w = fine
            .sc
            .newton(zeta, w_guess, fine.budget)
            .map(Ok)
            .unwrap_or_else(|| fine.solve_from_center(zeta))?;
        worst = worst.max((fine.half_plane_to_disk(w) - z).norm());
    }
    let mut c1 = RealAxisCursor::new();
    let mut c2 = RealAxisCursor::new();
    for t in coarse.probe_line() {
        let a = coarse.inverse_along(t, &mut c1)?;
        let b = fine.inverse_along(t, &mut c2)?;
        worst = worst.max((a.z - b.z).norm());
    }
    Ok(worst)
}

/// The grid `{0.1 k exp(i pi m / 8) : 0 <= k <= 9, 0 <= m < 16}`.
pub fn standard_grid() -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0)];
    for k in 1..=9 {
        for m in 0..16 {
            out.push(Complex64::from_polar(0.1 * k as f64, std::f64::consts::PI * m as f64 / 8.0));
        }
    }
    out
}

/// Starting point for the parameter problem.
#[derive(Clone, Copy)]
enum Seed<'a> {
    Prevertices(&'a [f64]),
    /// A solved map whose polygon has the same edge directions; the solver
    /// follows the straight-line deformation of the vertices.
    Map(&'a ConformalMap),
}

fn build_raw(poly: &StaircasePolygon, settings: &MapSettings, seed: Option<Seed>) -> Result<ConformalMap> {
    if settings.resolution < MIN_RESOLUTION {
        return Err(Error::ResolutionTooLow { got: settings.resolution, min: MIN_RESOLUTION });
    }
    poly.validate()?;
    let center = settings.center;
    if !contains(poly, center) {
        return Err(Error::OutsideDomain(format!("map center {center}")));
    }
    let (exit_edge, exit_x) = poly
        .ray_exit(center)
        .ok_or_else(|| Error::GeometryNotJordan("horizontal ray from the center does not leave the polygon".into()))?;
    let n = poly.vertices.len();
    let ordered: Vec<Complex64> = (0..n).map(|k| poly.vertices[(exit_edge + 1 + k) % n]).collect();
    let exit = Complex64::new(exit_x, center.im);
    let tol = &settings.tolerances;

    let mut last_err = None;
    let mut solved = None;
    let mut warm_x = None;
    match seed {
        Some(Seed::Map(m)) if same_shape(&m.sc.vertices, &ordered) && m.center == center => {
            let start = m.sc.vertices.clone();
            let start_exit = Complex64::new(m.exit, m.center.im);
            let path = |s: f64| {
                let v = start.iter().zip(&ordered).map(|(a, b)| a + (b - a) * s).collect();
                (v, start_exit + (exit - start_exit) * s)
            };
            match follow(path, m.sc.kernel.x.clone(), center, settings.resolution, 1.0, tol) {
                Ok(found) => solved = Some(found),
                Err(e) => last_err = Some(e),
            }
        }
        Some(Seed::Map(m)) => warm_x = Some(m.sc.kernel.x.as_slice()),
        Some(Seed::Prevertices(x)) => warm_x = Some(x),
        None => {}
    }
    if solved.is_none() {
        let guess = ParamProblem::initial_guess(&ordered, center, exit);
        let warm_ok = warm_x.filter(|x| x.len() == n && x.windows(2).all(|p| p[1] > p[0]));
        let starts: Vec<&[f64]> = warm_ok.into_iter().chain(std::iter::once(guess.as_slice())).collect();
        for x0 in starts {
            let problem = ParamProblem::new(ordered.clone(), center, exit, settings.resolution, pivot_index(x0));
            match problem.solve(problem.y_from_x(x0), tol.solver_tol, DIRECT_ITERATIONS.min(tol.solver_iterations)) {
                Ok((y, res)) => {
                    solved = Some((problem, y, res));
                    break;
                }
                Err(e) => last_err = Some(e),
            }
        }
    }
    if solved.is_none() {
        match solve_compressed(&ordered, exit, center, settings.resolution, tol) {
            Ok(found) => solved = Some(found),
            Err(e) => last_err = Some(e),
        }
    }
    let Some((problem, y, res)) = solved else {
        return Err(last_err.unwrap_or_else(|| Error::NoConvergence("parameter problem".into())));
    };
    let sc = problem.finish(&y, res, settings.resolution);
    Ok(ConformalMap {
        sc,
        polygon: poly.clone(),
        center,
        exit: exit_x,
        accuracy: f64::NAN,
        budget: tol.newton_budget,
    })
}

/// Same vertex count and every edge pointing the same way, so that each
/// convex combination of the two outlines is again rectilinear with the same
/// turning sequence.
fn same_shape(a: &[Complex64], b: &[Complex64]) -> bool {
    let n = a.len();
    n == b.len()
        && (0..n).all(|k| {
            let da = a[(k + 1) % n] - a[k];
            let db = b[(k + 1) % n] - b[k];
            da.re.signum() == db.re.signum()
                && da.im.signum() == db.im.signum()
                && (da.re == 0.0) == (db.re == 0.0)
                && (da.im == 0.0) == (db.im == 0.0)
        })
}

/// Iteration budget for a cold solve before falling back to a homotopy.
const DIRECT_ITERATIONS: usize = 60;

/// Tracks a solution along `path(s)`, `s` from 0 to 1, starting from
/// prevertices `x` that solve the problem at `s = 0`.
fn follow<P>(
    path: P,
    mut x: Vec<f64>,
    center: Complex64,
    resolution: usize,
    mut ds: f64,
    tol: &MapTolerances,
) -> Result<(ParamProblem, Vec<f64>, f64)>
where
    P: Fn(f64) -> (Vec<Complex64>, Complex64),
{
    const STEP_ITERATIONS: usize = 40;
    let mut s = 0.0;
    loop {
        let next = (s + ds).min(1.0);
        let (v, e) = path(next);
        let problem = ParamProblem::new(v, center, e, resolution, pivot_index(&x));
        let y0 = problem.y_from_x(&x);
        // a failed long jump is expensive, so only the final point gets the full budget
        match problem.solve(y0, 1e-8, STEP_ITERATIONS) {
            Ok((y, _)) if next >= 1.0 => {
                let (y, res) = problem.solve(y, tol.solver_tol, tol.solver_iterations)?;
                return Ok((problem, y, res));
            }
            Ok((y, _)) => {
                x = problem.x_from_y(&y);
                s = next;
                ds = (2.0 * ds).min(1.0 - s);
            }
            Err(e) => {
                ds *= 0.25;
                if ds < 1e-5 {
                    return Err(e);
                }
            }
        }
    }
}

/// `sign(t) ((1 + |t|)^s - 1) / s`, tending to `sign(t) ln(1 + |t|)` at 0.
fn compress(t: f64, s: f64) -> f64 {
    let l = t.abs().ln_1p();
    let c = if s == 0.0 { l } else { (s * l).exp_m1() / s };
    c.copysign(t)
}

/// Cold start for polygons with a large spread of scales: every coordinate,
/// measured from the center, passes through a monotone compression that
/// ranges from logarithmic to the identity. Monotone coordinate maps keep
/// the outline simple with the same turning sequence throughout.
fn solve_compressed(
    ordered: &[Complex64],
    exit: Complex64,
    center: Complex64,
    resolution: usize,
    tol: &MapTolerances,
) -> Result<(ParamProblem, Vec<f64>, f64)> {
    let squash = |z: Complex64, s: f64| {
        let d = z - center;
        center + Complex64::new(compress(d.re, s), compress(d.im, s))
    };
    let path = |s: f64| {
        if s >= 1.0 {
            (ordered.to_vec(), exit)
        } else {
            (ordered.iter().map(|&z| squash(z, s)).collect(), squash(exit, s))
        }
    };
    let (v0, e0) = path(0.0);
    let guess = ParamProblem::initial_guess(&v0, center, e0);
    let problem = ParamProblem::new(v0, center, e0, resolution, pivot_index(&guess));
    let (y, _) = problem
        .solve(problem.y_from_x(&guess), 1e-8, tol.solver_iterations)
        .or_else(|_| problem.solve_by_continuation(problem.y_from_x(&guess), 1e-8, tol.solver_iterations))?;
    follow(path, problem.x_from_y(&y), center, resolution, 0.25, tol)
}

fn pivot_index(x: &[f64]) -> usize {
    (0..x.len()).min_by(|&a, &b| x[a].abs().total_cmp(&x[b].abs())).unwrap_or(0)
}

impl ConformalMap {
    pub fn resolution(&self) -> usize {
        self.sc.resolution
    }

    pub fn accuracy(&self) -> f64 {
        self.accuracy
    }

    /// The unimodular constant `b` with `g(z) = h(b z)`, where `h` is the
    /// Riemann map with `h(0) = center` and `h'(0) > 0`.
    pub fn b(&self) -> Complex64 {
        let d = self.sc.deriv(I) * 2.0 * I;
        d / d.norm()
    }

    pub fn polygon(&self) -> &StaircasePolygon {
        &self.polygon
    }

    pub fn center(&self) -> Complex64 {
        self.center
    }

    /// Abscissa of the boundary point `g(1)`.
    pub fn exit(&self) -> f64 {
        self.exit
    }

    /// Max residual of the side-length system.
    pub fn solver_residual(&self) -> f64 {
        self.sc.residual
    }

    pub fn prevertices(&self) -> &[f64] {
        &self.sc.kernel.x
    }

    pub(crate) fn disk_to_half_plane(&self, z: Complex64) -> Complex64 {
        I * (1.0 + z) / (1.0 - z)
    }

    pub(crate) fn half_plane_to_disk(&self, w: Complex64) -> Complex64 {
        cdiv(w - I, w + I)
    }

    /// `1 - z` for the disk point of `w`.
    pub(crate) fn gap_of(&self, w: Complex64) -> Complex64 {
        cdiv(2.0 * I, w + I)
    }

    fn preimage(&self, w: Complex64) -> Preimage {
        Preimage { z: self.half_plane_to_disk(w), gap: self.gap_of(w), w }
    }

    /// `g(z)`.
    pub fn forward(&self, z: Complex64) -> Result<Complex64> {
        if !(z.norm() < 1.0) {
            return Err(Error::OutsideDisk(z.norm()));
        }
        Ok(self.sc.eval(self.disk_to_half_plane(z)))
    }

    /// `g'(z)` from the closed-form Schwarz-Christoffel derivative.
    pub fn derivative(&self, z: Complex64) -> Result<Complex64> {
        let r = z.norm();
        if !(r < 1.0 - DERIVATIVE_MARGIN) {
            return Err(Error::TooCloseToBoundary { modulus: r, margin: DERIVATIVE_MARGIN });
        }
        let dw_dz = 2.0 * I / ((1.0 - z) * (1.0 - z));
        Ok(self.sc.deriv(self.disk_to_half_plane(z)) * dw_dz)
    }

    /// `g'` at an inversion result. Working from `w` and `1 - z` keeps full
    /// relative precision next to the exit point, where `derivative` refuses.
    pub fn derivative_at(&self, p: &Preimage) -> Complex64 {
        self.sc.deriv(p.w) * cdiv(2.0 * I, p.gap * p.gap)
    }

    /// `g^{-1}(zeta)`.
    pub fn inverse(&self, zeta: Complex64) -> Result<Complex64> {
        Ok(self.inverse_full(zeta)?.z)
    }

    pub fn inverse_full(&self, zeta: Complex64) -> Result<Preimage> {
        if !contains(&self.polygon, zeta) {
            return Err(Error::OutsideDomain(zeta.to_string()));
        }
        Ok(self.preimage(self.solve_from_center(zeta)?))
    }

    /// `g^{-1}(t)` for real `t`, warm-started from the cursor's last point.
    pub fn inverse_real_axis(&self, t: f64, cursor: &mut RealAxisCursor) -> Result<Complex64> {
        Ok(self.inverse_along(Complex64::new(t, 0.0), cursor)?.z)
    }

    /// Inversion by continuation from the cursor's last point along a
    /// straight segment (or from the center when the segment leaves the
    /// polygon or the cursor is fresh).
    pub fn inverse_along(&self, zeta: Complex64, cursor: &mut RealAxisCursor) -> Result<Preimage> {
        if !contains(&self.polygon, zeta) {
            return Err(Error::OutsideDomain(zeta.to_string()));
        }
        let w = match cursor.last {
            Some((from, w_from)) if self.polygon.segment_inside(from, zeta) => {
                self.sc.track(w_from, from, zeta, self.budget)?
            }
            _ => self.solve_from_center(zeta)?,
        };
        cursor.last = Some((zeta, w));
        Ok(self.preimage(w))
    }

    /// Seeds a cursor at a known pair `(zeta, z)` with `g(z) = zeta`.
    pub fn cursor_at(&self, zeta: Complex64, z: Complex64) -> RealAxisCursor {
        RealAxisCursor { last: Some((zeta, self.disk_to_half_plane(z))) }
    }

    fn solve_from_center(&self, zeta: Complex64) -> Result<Complex64> {
        let c = self.center;
        let w0 = self.sc.newton(c, I, self.budget).unwrap_or(I);
        let corners = [Complex64::new(zeta.re, c.im), Complex64::new(c.re, zeta.im)];
        for corner in corners {
            let legs = [(c, corner), (corner, zeta)];
            if legs.iter().all(|&(a, b)| a == b || self.polygon.segment_inside(a, b)) {
                let mut w = w0;
                for (a, b) in legs {
                    if a != b {
                        w = self.sc.track(w, a, b, self.budget)?;
                    }
                }
                return Ok(w);
            }
        }
        self.multistart(zeta)
    }

    /// Newton from a coarse set of half-plane seeds; univalence makes any
    /// converged root the preimage.
    fn multistart(&self, zeta: Complex64) -> Result<Complex64> {
        let x = &self.sc.kernel.x;
        let mut seeds = vec![I];
        for p in x.windows(2) {
            let mid = 0.5 * (p[0] + p[1]);
            let half = 0.5 * (p[1] - p[0]);
            seeds.push(Complex64::new(mid, half));
            seeds.push(Complex64::new(mid, 0.1 * half));
        }
        for s in seeds {
            if let Some(w) = self.sc.newton(zeta, s, self.budget) {
                return Ok(w);
            }
        }
        Err(Error::NoConvergence(format!("no seed converged for {zeta}")))
    }

    /// Points on the horizontal line through the center up to the trusted bound.
    fn probe_line(&self) -> Vec<Complex64> {
        let c = self.center;
        let end = self.polygon.trusted_bound();
        (1..=8)
            .map(|j| Complex64::new(c.re + (end - c.re) * j as f64 / 8.0, c.im))
            .filter(|&p| contains(&self.polygon, p))
            .collect()
    }

    pub fn metadata(&self) -> MapMetadata {
        let b = self.b();
        MapMetadata {
            resolution: self.resolution(),
            accuracy: self.accuracy,
            b: [b.re, b.im],
            center: [self.center.re, self.center.im],
            exit: self.exit,
            solver_residual: self.sc.residual,
            polygon: self.polygon.clone(),
        }
    }
}

/// Serializable description of a built map.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MapMetadata {
    pub resolution: usize,
    pub accuracy: f64,
    pub b: [f64; 2],
    pub center: [f64; 2],
    pub exit: f64,
    pub solver_residual: f64,
    pub polygon: StaircasePolygon,
}
