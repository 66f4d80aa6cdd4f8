//! Staircase (comb) domains built from unions of axis-parallel rectangles.
//!
//! A domain is fixed by abscissas `u` and the heights `v` (above the real
//! axis) and depths `w` (below it) of the stage rectangles
//! `R(u[j], u[j+1], v[j], w[j])`, glued to the base box `R(-1, u[0], 1, 1)`.
//! The infinite domain is approximated by closing it with one more rectangle
//! of length `tail_length`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Finite prefix of the sequences `(u_n)`, `(v_n)`, `(w_n)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StaircaseParams {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub w: Vec<f64>,
}

/// Validates and assembles staircase parameters. No normalization is applied.
pub fn build_params(u: Vec<f64>, v: Vec<f64>, w: Vec<f64>) -> Result<StaircaseParams> {
    let params = StaircaseParams { u, v, w };
    params.validate()?;
    Ok(params)
}

impl StaircaseParams {
    pub fn validate(&self) -> Result<()> {
        let (u, v, w) = (&self.u, &self.v, &self.w);
        if u.is_empty() || u.len() != v.len() + 1 || u.len() != w.len() + 1 {
            return Err(Error::LengthMismatch { u: u.len(), v: v.len(), w: w.len() });
        }
        if u.iter().chain(v).chain(w).any(|x| !x.is_finite()) {
            return Err(Error::DegenerateGeometry("non-finite parameter".into()));
        }
        if u[0] <= 0.0 {
            return Err(Error::NonMonotoneU(format!("u[0] = {} must be > 0", u[0])));
        }
        if let Some(i) = u.windows(2).position(|p| p[1] <= p[0]) {
            return Err(Error::NonMonotoneU(format!(
                "u[{}] = {} is not below u[{}] = {}",
                i,
                u[i],
                i + 1,
                u[i + 1]
            )));
        }
        for (which, seq) in [("v", v), ("w", w)] {
            if let Some((index, &value)) = seq.iter().enumerate().find(|(_, &x)| x < 1.0) {
                return Err(Error::HeightBelowOne { which, index, value });
            }
        }
        for (which, seq) in [("v", v), ("w", w)] {
            if let Some(i) = seq.windows(2).position(|p| p[1] < p[0]) {
                return Err(Error::NonMonotoneHeights { which, index: i + 1 });
            }
        }
        Ok(())
    }

    pub fn stage_count(&self) -> usize {
        self.v.len()
    }

    pub fn u_last(&self) -> f64 {
        *self.u.last().expect("validated params have at least one abscissa")
    }

    /// Height of the last stage, or of the base box when there are no stages.
    pub fn v_last(&self) -> f64 {
        self.v.last().copied().unwrap_or(1.0)
    }

    pub fn w_last(&self) -> f64 {
        self.w.last().copied().unwrap_or(1.0)
    }

    /// Appends the stage `R(u_last, u_next, v, w)`.
    pub fn with_stage(&self, u_next: f64, v: f64, w: f64) -> Result<StaircaseParams> {
        let mut next = self.clone();
        next.u.push(u_next);
        next.v.push(v);
        next.w.push(w);
        next.validate()?;
        Ok(next)
    }

    /// Mirror image under complex conjugation (heights and depths swapped).
    pub fn conjugate(&self) -> StaircaseParams {
        StaircaseParams { u: self.u.clone(), v: self.w.clone(), w: self.v.clone() }
    }

    /// The stage rectangles, base box first.
    pub fn rects(&self) -> Vec<Rect> {
        let mut out = vec![Rect { u1: -1.0, u2: self.u[0], v: 1.0, w: 1.0 }];
        out.extend(
            self.u
                .windows(2)
                .zip(self.v.iter().zip(&self.w))
                .map(|(p, (&v, &w))| Rect { u1: p[0], u2: p[1], v, w }),
        );
        out
    }
}

/// The point set `{z : u1 < Re z <= u2, -w < Im z < v}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub u1: f64,
    pub u2: f64,
    pub v: f64,
    pub w: f64,
}

impl Rect {
    pub fn contains(&self, z: Complex64) -> bool {
        self.u1 < z.re && z.re <= self.u2 && -self.w < z.im && z.im < self.v
    }
}

/// Which of the intended infinite sequences `v`, `w` tend to infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct DeclaredLimits {
    pub v_unbounded: bool,
    pub w_unbounded: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SemigroupType {
    Parabolic,
    Hyperbolic,
}

/// Parabolic as soon as one side of the comb is unbounded; with both sides
/// bounded the domain sits in a horizontal strip, which makes it hyperbolic.
pub fn classify(_params: &StaircaseParams, declared: DeclaredLimits) -> SemigroupType {
    if declared.v_unbounded || declared.w_unbounded {
        SemigroupType::Parabolic
    } else {
        SemigroupType::Hyperbolic
    }
}

/// A truncated staircase domain as a positively oriented rectilinear polygon.
#[derive(Debug, Clone, PartialEq)]
pub struct StaircasePolygon {
    pub vertices: Vec<Complex64>,
    /// Abscissa where the closing rectangle starts.
    pub tail_start: f64,
    pub tail_length: f64,
    pub stage_count: usize,
    /// Stage data including the closing rectangle as its final stage, when
    /// the polygon was realized from parameters.
    pub outline: Option<StaircaseParams>,
}

/// Closes `params` with `R(u_last, u_last + tail_length, v_last, w_last)`.
pub fn realize(params: &StaircaseParams, tail_length: f64) -> Result<StaircasePolygon> {
    realize_with_closing(params, tail_length, params.v_last(), params.w_last())
}

/// Like [`realize`], with explicit height and depth of the closing rectangle.
pub fn realize_with_closing(
    params: &StaircaseParams,
    tail_length: f64,
    closing_v: f64,
    closing_w: f64,
) -> Result<StaircasePolygon> {
    params.validate()?;
    if !(tail_length > 0.0) || !tail_length.is_finite() {
        return Err(Error::DegenerateGeometry(format!("tail_length = {tail_length} must be > 0")));
    }
    let outline = params.with_stage(params.u_last() + tail_length, closing_v, closing_w)?;
    let vertices = outline_vertices(&outline)?;
    Ok(StaircasePolygon {
        vertices,
        tail_start: params.u_last(),
        tail_length,
        stage_count: params.stage_count(),
        outline: Some(outline),
    })
}

fn outline_vertices(outline: &StaircaseParams) -> Result<Vec<Complex64>> {
    let rects = outline.rects();
    let end = outline.u_last();
    let mut raw = Vec::with_capacity(4 * rects.len());
    // bottom, left to right
    for r in &rects {
        raw.push(Complex64::new(r.u1, -r.w));
        raw.push(Complex64::new(r.u2, -r.w));
    }
    // top, right to left
    for r in rects.iter().rev() {
        raw.push(Complex64::new(r.u2, r.v));
        raw.push(Complex64::new(r.u1, r.v));
    }
    debug_assert_eq!(raw[2 * rects.len() - 1].re, end);
    let vertices = simplify_loop(raw);
    for i in 0..vertices.len() {
        for j in i + 1..vertices.len() {
            if vertices[i] == vertices[j] {
                return Err(Error::DegenerateGeometry(format!("duplicate vertex {}", vertices[i])));
            }
        }
    }
    Ok(vertices)
}

/// Drops repeated points and the middle point of collinear triples.
fn simplify_loop(raw: Vec<Complex64>) -> Vec<Complex64> {
    let mut pts: Vec<Complex64> = Vec::with_capacity(raw.len());
    for p in raw {
        if pts.last() != Some(&p) {
            pts.push(p);
        }
    }
    while pts.len() > 1 && pts.first() == pts.last() {
        pts.pop();
    }
    loop {
        let n = pts.len();
        if n < 3 {
            return pts;
        }
        let drop = (0..n).find(|&i| {
            let a = pts[(i + n - 1) % n];
            let b = pts[i];
            let c = pts[(i + 1) % n];
            (a.re == b.re && b.re == c.re) || (a.im == b.im && b.im == c.im) || a == b
        });
        match drop {
            Some(i) => {
                pts.remove(i);
            }
            None => return pts,
        }
    }
}

impl StaircasePolygon {
    /// Wraps an explicit vertex loop, checking that it is a positively oriented
    /// rectilinear Jordan polygon in canonical (no collinear triple) form.
    pub fn from_vertices(vertices: Vec<Complex64>, tail_start: f64, tail_length: f64) -> Result<Self> {
        validate_loop(&vertices)?;
        Ok(StaircasePolygon { vertices, tail_start, tail_length, stage_count: 0, outline: None })
    }

    pub fn validate(&self) -> Result<()> {
        validate_loop(&self.vertices)
    }

    pub fn edges(&self) -> impl Iterator<Item = (Complex64, Complex64)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// Right end of the closing rectangle.
    pub fn tail_end(&self) -> f64 {
        self.tail_start + self.tail_length
    }

    /// Abscissas up to which horizontal translation stays inside the domain.
    pub fn trusted_bound(&self) -> f64 {
        self.tail_start + 0.5 * self.tail_length
    }

    pub fn signed_area(&self) -> f64 {
        0.5 * self.edges().map(|(a, b)| a.re * b.im - b.re * a.im).sum::<f64>()
    }

    pub fn on_boundary(&self, z: Complex64) -> bool {
        self.edges().any(|(a, b)| on_segment(a, b, z))
    }

    /// The mirror polygon `conj(P)`, re-oriented positively.
    pub fn conjugate(&self) -> StaircasePolygon {
        let mut vertices: Vec<Complex64> = self.vertices.iter().map(|z| z.conj()).collect();
        vertices.reverse();
        StaircasePolygon {
            vertices,
            tail_start: self.tail_start,
            tail_length: self.tail_length,
            stage_count: self.stage_count,
            outline: self.outline.as_ref().map(StaircaseParams::conjugate),
        }
    }

    /// The vertical edge where the horizontal ray from `start` first leaves the
    /// polygon: `(index of the edge's lower vertex, crossing abscissa)`.
    pub fn ray_exit(&self, start: Complex64) -> Option<(usize, f64)> {
        let n = self.vertices.len();
        let mut best: Option<(usize, f64)> = None;
        for i in 0..n {
            let (a, b) = (self.vertices[i], self.vertices[(i + 1) % n]);
            if a.re != b.re || a.re <= start.re {
                continue;
            }
            let (lo, hi) = (a.im.min(b.im), a.im.max(b.im));
            if lo < start.im && start.im < hi && best.is_none_or(|(_, x)| a.re < x) {
                best = Some((i, a.re));
            }
        }
        best
    }

    /// True when the closed segment `[a, b]` lies in the interior.
    pub fn segment_inside(&self, a: Complex64, b: Complex64) -> bool {
        if !contains(self, a) || !contains(self, b) {
            return false;
        }
        !self.edges().any(|(p, q)| segments_touch(a, b, p, q))
    }
}

/// Strict interior test (even-odd rule); boundary points are outside.
pub fn contains(poly: &StaircasePolygon, z: Complex64) -> bool {
    if poly.on_boundary(z) {
        return false;
    }
    let mut inside = false;
    for (a, b) in poly.edges() {
        if a.re != b.re {
            continue;
        }
        // vertical edge, half-open in y so shared endpoints count once
        let (lo, hi) = (a.im.min(b.im), a.im.max(b.im));
        if a.re > z.re && lo <= z.im && z.im < hi {
            inside = !inside;
        }
    }
    inside
}

fn on_segment(a: Complex64, b: Complex64, z: Complex64) -> bool {
    if a.re == b.re {
        z.re == a.re && z.im >= a.im.min(b.im) && z.im <= a.im.max(b.im)
    } else if a.im == b.im {
        z.im == a.im && z.re >= a.re.min(b.re) && z.re <= a.re.max(b.re)
    } else {
        false
    }
}

fn cross(o: Complex64, a: Complex64, b: Complex64) -> f64 {
    (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re)
}

fn within_box(p: Complex64, a: Complex64, b: Complex64) -> bool {
    p.re >= a.re.min(b.re) && p.re <= a.re.max(b.re) && p.im >= a.im.min(b.im) && p.im <= a.im.max(b.im)
}

/// Closed segments intersect (including touching at endpoints).
fn segments_touch(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> bool {
    let d1 = cross(c, d, a);
    let d2 = cross(c, d, b);
    let d3 = cross(a, b, c);
    let d4 = cross(a, b, d);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    (d1 == 0.0 && within_box(a, c, d))
        || (d2 == 0.0 && within_box(b, c, d))
        || (d3 == 0.0 && within_box(c, a, b))
        || (d4 == 0.0 && within_box(d, a, b))
}

fn validate_loop(vertices: &[Complex64]) -> Result<()> {
    let n = vertices.len();
    if n < 4 {
        return Err(Error::GeometryNotJordan(format!("{n} vertices")));
    }
    if vertices.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::GeometryNotJordan("non-finite vertex".into()));
    }
    for i in 0..n {
        let (a, b, c) = (vertices[i], vertices[(i + 1) % n], vertices[(i + 2) % n]);
        if a == b {
            return Err(Error::GeometryNotJordan(format!("repeated vertex {a}")));
        }
        if a.re != b.re && a.im != b.im {
            return Err(Error::GeometryNotJordan(format!("edge {a} -> {b} is not axis-parallel")));
        }
        if (a.re == b.re) == (b.re == c.re) {
            return Err(Error::GeometryNotJordan(format!("collinear edges meet at {b}")));
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if adjacent {
                continue;
            }
            let (a, b) = (vertices[i], vertices[(i + 1) % n]);
            let (c, d) = (vertices[j], vertices[(j + 1) % n]);
            if segments_touch(a, b, c, d) {
                return Err(Error::GeometryNotJordan(format!("edges {i} and {j} intersect")));
            }
        }
    }
    let area: f64 = (0..n)
        .map(|i| {
            let (a, b) = (vertices[i], vertices[(i + 1) % n]);
            a.re * b.im - b.re * a.im
        })
        .sum();
    if area <= 0.0 {
        return Err(Error::GeometryNotJordan("vertex loop is not positively oriented".into()));
    }
    Ok(())
}

/// Text form shared by parameter and polygon files; vertices are flattened
/// as `[re0, im0, re1, im1, ...]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolygonRecord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail_v: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail_w: Option<f64>,
    pub tail_start: f64,
    pub tail_length: f64,
    pub stage_count: usize,
    pub vertices: Vec<f64>,
}

impl From<&StaircasePolygon> for PolygonRecord {
    fn from(p: &StaircasePolygon) -> Self {
        let (mut u, mut v, mut w, mut tail_v, mut tail_w) = (None, None, None, None, None);
        if let Some(o) = &p.outline {
            let k = o.v.len() - 1;
            u = Some(o.u[..=k].to_vec());
            v = Some(o.v[..k].to_vec());
            w = Some(o.w[..k].to_vec());
            tail_v = Some(o.v[k]);
            tail_w = Some(o.w[k]);
        }
        PolygonRecord {
            u,
            v,
            w,
            tail_v,
            tail_w,
            tail_start: p.tail_start,
            tail_length: p.tail_length,
            stage_count: p.stage_count,
            vertices: p.vertices.iter().flat_map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl TryFrom<PolygonRecord> for StaircasePolygon {
    type Error = Error;

    fn try_from(r: PolygonRecord) -> Result<Self> {
        if !r.vertices.len().is_multiple_of(2) {
            return Err(Error::GeometryNotJordan("odd vertex array length".into()));
        }
        let vertices: Vec<Complex64> =
            r.vertices.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect();
        let mut poly = StaircasePolygon::from_vertices(vertices, r.tail_start, r.tail_length)?;
        poly.stage_count = r.stage_count;
        if let (Some(u), Some(v), Some(w)) = (r.u, r.v, r.w) {
            let params = build_params(u, v, w)?;
            let tv = r.tail_v.unwrap_or(params.v_last());
            let tw = r.tail_w.unwrap_or(params.w_last());
            let rebuilt = realize_with_closing(&params, r.tail_length, tv, tw)?;
            if rebuilt.vertices != poly.vertices {
                return Err(Error::DegenerateGeometry(
                    "vertices disagree with the stored stage parameters".into(),
                ));
            }
            poly.outline = rebuilt.outline;
        }
        Ok(poly)
    }
}

impl Serialize for StaircasePolygon {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolygonRecord::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for StaircasePolygon {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let record = PolygonRecord::deserialize(d)?;
        StaircasePolygon::try_from(record).map_err(serde::de::Error::custom)
    }
}
