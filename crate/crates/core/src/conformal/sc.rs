//! Half-plane Schwarz-Christoffel engine for rectilinear polygons.
//!
//! The map is `F(w) = v_k + C * int_{x_k}^{w} prod_j (s - x_j)^{beta_j} ds` on
//! the upper half-plane. The point at infinity goes to the non-vertex boundary
//! point where the horizontal ray from the center leaves the polygon, so every
//! vertex has a finite prevertex and `sum beta_j = -2`. The preimage of the
//! center is pinned at `w = i`. The prevertices solve a square system: side
//! ratios (one horizontal side is implied by closure and dropped), the center
//! condition and the exit condition, by Levenberg-Marquardt on log-gaps.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use super::quadrature::{gauss_jacobi, GaussRule};
use crate::error::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone)]
pub(crate) struct Rules {
    legendre: GaussRule,
    jac_minus: GaussRule,
    jac_plus: GaussRule,
}

impl Rules {
    pub(crate) fn new(n: usize) -> Rules {
        Rules { legendre: gauss_jacobi(n, 0.0), jac_minus: gauss_jacobi(n, -0.5), jac_plus: gauss_jacobi(n, 0.5) }
    }

    fn jacobi(&self, beta: f64) -> &GaussRule {
        if beta < 0.0 {
            &self.jac_minus
        } else {
            &self.jac_plus
        }
    }
}

/// Prevertices and exponents; shared by the solver and the finished map.
#[derive(Debug, Clone)]
pub(crate) struct Kernel {
    pub x: Vec<f64>,
    pub beta: Vec<f64>,
}

fn pos(d: Complex64) -> Complex64 {
    // keep the real axis on the upper side of every branch cut
    if d.im == 0.0 {
        Complex64::new(d.re, 0.0)
    } else {
        d
    }
}

fn power(d: Complex64, beta: f64) -> Complex64 {
    let r = pos(d).sqrt();
    if beta > 0.0 {
        r
    } else {
        cdiv(Complex64::new(1.0, 0.0), r)
    }
}

/// `a / b` without forming `|b|^2`, which over- or underflows for the
/// extreme magnitudes met deep in long channels.
pub(crate) fn cdiv(a: Complex64, b: Complex64) -> Complex64 {
    let m = b.norm();
    (a * (b / m).conj()) / m
}

impl Kernel {
    fn n(&self) -> usize {
        self.x.len()
    }

    /// `prod_{j != skip} (s - x_j)^{beta_j}`.
    fn integrand(&self, s: Complex64, skip: Option<usize>) -> Complex64 {
        let mut num = Complex64::new(1.0, 0.0);
        let mut den = Complex64::new(1.0, 0.0);
        for (j, (&xj, &bj)) in self.x.iter().zip(&self.beta).enumerate() {
            if Some(j) == skip {
                continue;
            }
            let r = pos(s - xj).sqrt();
            if bj > 0.0 {
                num *= r;
            } else {
                den *= r;
            }
        }
        cdiv(num, den)
    }

    /// Real integrand `prod_{j != skip} |s - x_j|^{beta_j}` on the real line.
    fn integrand_abs(&self, s: f64, skip: usize) -> f64 {
        let mut num = 1.0;
        let mut den = 1.0;
        for (j, (&xj, &bj)) in self.x.iter().zip(&self.beta).enumerate() {
            if j == skip {
                continue;
            }
            let r = (s - xj).abs().sqrt();
            if bj > 0.0 {
                num *= r;
            } else {
                den *= r;
            }
        }
        num / den
    }

    /// Derivative factor `prod_j (w - x_j)^{beta_j}` (without the constant).
    pub(crate) fn derivative(&self, w: Complex64) -> Complex64 {
        self.integrand(w, None)
    }

    /// Distance from `s` to the nearest prevertex other than `skip`.
    fn nearest_distance(&self, s: Complex64, skip: Option<usize>) -> f64 {
        let k = self.x.partition_point(|&x| x < s.re);
        let mut best = f64::INFINITY;
        for j in k.saturating_sub(2)..(k + 2).min(self.n()) {
            if Some(j) != skip {
                best = best.min((s - self.x[j]).norm());
            }
        }
        best
    }

    pub(crate) fn nearest_prevertex(&self, s: Complex64) -> usize {
        let k = self.x.partition_point(|&x| x < s.re);
        let mut best = (f64::INFINITY, 0);
        for j in k.saturating_sub(1)..(k + 1).min(self.n()) {
            let d = (s - self.x[j]).norm();
            if d < best.0 {
                best = (d, j);
            }
        }
        best.1
    }

    /// `int_{x_k}^{end} prod_j (s - x_j)^{beta_j} ds` along the straight segment,
    /// with a Gauss-Jacobi panel at the singular start and graded
    /// Gauss-Legendre panels after it.
    pub(crate) fn integrate_from(&self, rules: &Rules, k: usize, end: Complex64) -> Complex64 {
        let a = Complex64::new(self.x[k], 0.0);
        let delta = end - a;
        let len = delta.norm();
        if len == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let u = pos(delta / len);
        let bk = self.beta[k];
        let h = len.min(0.5 * self.nearest_distance(a, Some(k)));
        let jac = rules.jacobi(bk);
        let mut sum = Complex64::new(0.0, 0.0);
        for (&t, &wt) in jac.nodes.iter().zip(&jac.weights) {
            let s = a + u * (0.5 * h * (1.0 + t));
            sum += self.integrand(s, Some(k)) * wt;
        }
        let mut total = u * power(u, bk) * (0.5 * h).powf(bk + 1.0) * sum;
        total += self.integrate_regular(rules, a + u * h, end);
        total
    }

    /// Integral over a segment that does not start at a prevertex.
    pub(crate) fn integrate_regular(&self, rules: &Rules, start: Complex64, end: Complex64) -> Complex64 {
        let delta = end - start;
        let len = delta.norm();
        if len == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let u = delta / len;
        let mut total = Complex64::new(0.0, 0.0);
        let mut done = 0.0;
        let mut guard = 0;
        while done < len {
            let p = start + u * done;
            let step = (len - done).min(0.5 * self.nearest_distance(p, None));
            let step = if len - done - step < 1e-3 * step { len - done } else { step };
            let mut sum = Complex64::new(0.0, 0.0);
            for (&t, &wt) in rules.legendre.nodes.iter().zip(&rules.legendre.weights) {
                sum += self.integrand(p + u * (0.5 * step * (1.0 + t)), None) * wt;
            }
            total += sum * u * (0.5 * step);
            done += step;
            guard += 1;
            if guard > 100_000 || step <= 0.0 {
                break;
            }
        }
        total
    }

    /// `int_{x_k}^{x_{k+1}} prod_j |s - x_j|^{beta_j} ds`.
    fn side_integral(&self, rules: &Rules, k: usize) -> f64 {
        let mid = 0.5 * (self.x[k] + self.x[k + 1]);
        self.half_side(rules, k, mid) + self.half_side(rules, k + 1, mid)
    }

    fn half_side(&self, rules: &Rules, k: usize, end: f64) -> f64 {
        let a = self.x[k];
        let len = (end - a).abs();
        if len == 0.0 {
            return 0.0;
        }
        let dir = (end - a).signum();
        let bk = self.beta[k];
        let other = self.nearest_distance(Complex64::new(a, 0.0), Some(k));
        let h = len.min(0.5 * other);
        let jac = rules.jacobi(bk);
        let scale = (0.5 * h).powf(bk + 1.0);
        let mut total = scale
            * jac.integrate(|t| self.integrand_abs(a + dir * 0.5 * h * (1.0 + t), k));
        let mut done = h;
        let mut guard = 0;
        while done < len {
            let p = a + dir * done;
            let near = self.nearest_distance(Complex64::new(p, 0.0), None);
            let step = (len - done).min(0.5 * near);
            let step = if len - done - step < 1e-3 * step { len - done } else { step };
            total += 0.5
                * step
                * rules.legendre.integrate(|t| self.integrand_abs(p + dir * 0.5 * step * (1.0 + t), usize::MAX));
            done += step;
            guard += 1;
            if guard > 100_000 || step <= 0.0 {
                break;
            }
        }
        total
    }

    /// `int_i^{i inf} prod_j (s - x_j)^{beta_j} ds`, through `s = i/u`:
    /// `i int_0^1 prod_j (i - u x_j)^{beta_j} du` (valid since `sum beta = -2`).
    pub(crate) fn integrate_to_infinity(&self, rules: &Rules) -> Complex64 {
        let poles: Vec<f64> = self.x.iter().filter(|x| **x != 0.0).map(|x| 1.0 / x.abs()).collect();
        let f = |u: f64| -> Complex64 {
            let mut num = Complex64::new(1.0, 0.0);
            let mut den = Complex64::new(1.0, 0.0);
            for (&xj, &bj) in self.x.iter().zip(&self.beta) {
                let r = (I - u * xj).sqrt();
                if bj > 0.0 {
                    num *= r;
                } else {
                    den *= r;
                }
            }
            cdiv(num, den)
        };
        let mut total = Complex64::new(0.0, 0.0);
        let mut p = 0.0;
        let mut guard = 0;
        while p < 1.0 && guard < 100_000 {
            let d = poles.iter().fold(f64::INFINITY, |m, &q| m.min((p * p + q * q).sqrt()));
            let step = (1.0 - p).min(0.5 * d);
            let step = if 1.0 - p - step < 1e-3 * step { 1.0 - p } else { step };
            let mut sum = Complex64::new(0.0, 0.0);
            for (&t, &wt) in rules.legendre.nodes.iter().zip(&rules.legendre.weights) {
                sum += f(p + 0.5 * step * (1.0 + t)) * wt;
            }
            total += sum * (0.5 * step);
            p += step;
            guard += 1;
        }
        I * total
    }

    /// Constant phase of the integrand on `(x_k, x_{k+1})`.
    fn side_phase(&self, k: usize) -> Complex64 {
        let s: f64 = self.beta[k + 1..].iter().sum();
        Complex64::from_polar(1.0, std::f64::consts::PI * s)
    }
}

/// A solved half-plane map onto a polygon.
#[derive(Debug, Clone)]
pub(crate) struct ScMap {
    pub kernel: Kernel,
    /// Polygon vertices in prevertex order.
    pub vertices: Vec<Complex64>,
    pub constant: Complex64,
    pub rules: Rules,
    pub resolution: usize,
    /// Max residual of the parameter problem at exit.
    pub residual: f64,
    /// Characteristic length of the polygon.
    pub scale: f64,
}

impl ScMap {
    pub(crate) fn eval(&self, w: Complex64) -> Complex64 {
        let k = self.kernel.nearest_prevertex(w);
        self.vertices[k] + self.constant * self.kernel.integrate_from(&self.rules, k, w)
    }

    pub(crate) fn deriv(&self, w: Complex64) -> Complex64 {
        self.constant * self.kernel.derivative(w)
    }

    /// Newton's method for `F(w) = target` from `w`, kept in the upper half-plane.
    pub(crate) fn newton(&self, target: Complex64, mut w: Complex64, budget: usize) -> Option<Complex64> {
        let tol = 1e-13 * self.scale.max(target.norm());
        let mut f = self.eval(w) - target;
        for _ in 0..budget {
            if f.norm() <= tol {
                return Some(w);
            }
            let mut dw = cdiv(-f, self.deriv(w));
            if !dw.re.is_finite() || !dw.im.is_finite() {
                return None;
            }
            let mut accepted = false;
            for _ in 0..40 {
                let cand = w + dw;
                if cand.im > 0.0 {
                    let fc = self.eval(cand) - target;
                    if fc.norm() < f.norm() || fc.norm() <= tol {
                        let small = dw.norm() <= 4.0 * f64::EPSILON * cand.norm();
                        w = cand;
                        f = fc;
                        accepted = true;
                        if small {
                            return Some(w);
                        }
                        break;
                    }
                }
                dw *= 0.5;
            }
            if !accepted {
                // stalled at the rounding floor
                return if f.norm() <= 1e3 * tol { Some(w) } else { None };
            }
        }
        if f.norm() <= 1e3 * tol {
            Some(w)
        } else {
            None
        }
    }

    /// Follows the preimage of the segment `[from, to]` starting at `w` (with
    /// `F(w) = from`): RK4 predictor on `dw/dzeta = 1/F'(w)`, Newton corrector.
    pub(crate) fn track(&self, w: Complex64, from: Complex64, to: Complex64, budget: usize) -> Result<Complex64> {
        let mut w = w;
        let mut s = 0.0;
        let mut step: f64 = 1.0;
        let total = to - from;
        if total.norm() == 0.0 {
            return Ok(w);
        }
        let rhs = |w: Complex64| -> Complex64 { cdiv(total, self.deriv(w)) };
        let mut failures = 0;
        while s < 1.0 {
            let next = (s + step).min(1.0);
            let h = next - s;
            let pred = rk4(w, h, &rhs);
            let target = from + total * next;
            let ok = pred.and_then(|p| if p.im > 0.0 { self.newton(target, p, 12.min(budget)) } else { None });
            match ok {
                Some(wc) => {
                    w = wc;
                    s = next;
                    step = (2.0 * step).min(1.0);
                }
                None => {
                    step *= 0.25;
                    failures += 1;
                    if step < 1e-10 || failures > budget {
                        return Err(Error::NoConvergence(format!(
                            "continuation toward {to} stalled at fraction {s:.6}"
                        )));
                    }
                }
            }
        }
        Ok(w)
    }
}

fn rk4(w: Complex64, h: f64, rhs: &impl Fn(Complex64) -> Complex64) -> Option<Complex64> {
    // substeps keep the predictor inside the half-plane on curved preimages
    let sub = 4;
    let dh = h / sub as f64;
    let mut w = w;
    for _ in 0..sub {
        let k1 = rhs(w);
        let k2 = rhs(pos_upper(w + k1 * (0.5 * dh))?);
        let k3 = rhs(pos_upper(w + k2 * (0.5 * dh))?);
        let k4 = rhs(pos_upper(w + k3 * dh)?);
        w = pos_upper(w + (k1 + 2.0 * k2 + 2.0 * k3 + k4) * (dh / 6.0))?;
    }
    if w.re.is_finite() && w.im.is_finite() {
        Some(w)
    } else {
        None
    }
}

fn pos_upper(w: Complex64) -> Option<Complex64> {
    if w.im > 0.0 && w.re.is_finite() && w.im.is_finite() {
        Some(w)
    } else {
        None
    }
}

/// The square parameter problem for one polygon.
pub(crate) struct ParamProblem {
    /// Vertices in prevertex order (first vertex follows the exit point).
    pub vertices: Vec<Complex64>,
    pub beta: Vec<f64>,
    pub center: Complex64,
    pub center_vertex: usize,
    pub rules: Rules,
    pub pivot: usize,
    /// Boundary point that `w = inf` must reach on the last (vertical) side.
    pub exit: Complex64,
    log_ratio: Vec<f64>,
    /// Horizontal side whose length follows from closure; its ratio is
    /// replaced by the exit condition.
    implied_side: usize,
    center_scale: f64,
}

impl ParamProblem {
    pub(crate) fn new(
        vertices: Vec<Complex64>,
        center: Complex64,
        exit: Complex64,
        resolution: usize,
        pivot: usize,
    ) -> ParamProblem {
        let n = vertices.len();
        let beta: Vec<f64> = (0..n)
            .map(|k| {
                let prev = vertices[(k + n - 1) % n];
                let next = vertices[(k + 1) % n];
                let d1 = vertices[k] - prev;
                let d2 = next - vertices[k];
                let turn = d1.re * d2.im - d1.im * d2.re;
                // left turn = convex corner = interior angle pi/2
                if turn > 0.0 {
                    -0.5
                } else {
                    0.5
                }
            })
            .collect();
        let len: Vec<f64> = (0..n - 1).map(|k| (vertices[k + 1] - vertices[k]).norm()).collect();
        let log_ratio = (1..n - 1).map(|k| (len[k] / len[0]).ln()).collect();
        let center_vertex = (0..n)
            .min_by(|&a, &b| (vertices[a] - center).norm().total_cmp(&(vertices[b] - center).norm()))
            .unwrap();
        let center_scale = (vertices[center_vertex] - center).norm();
        let implied_side = (1..n - 1).rev().find(|&k| vertices[k].im == vertices[k + 1].im).unwrap_or(n - 2);
        ParamProblem {
            vertices,
            beta,
            center,
            center_vertex,
            rules: Rules::new(resolution),
            pivot,
            exit,
            log_ratio,
            implied_side,
            center_scale,
        }
    }

    pub(crate) fn n(&self) -> usize {
        self.vertices.len()
    }

    pub(crate) fn x_from_y(&self, y: &[f64]) -> Vec<f64> {
        let n = self.n();
        let mut x = vec![0.0; n];
        x[self.pivot] = y[self.pivot].sinh();
        for k in self.pivot + 1..n {
            x[k] = x[k - 1] + y[k].exp();
        }
        for k in (0..self.pivot).rev() {
            x[k] = x[k + 1] - y[k].exp();
        }
        x
    }

    pub(crate) fn y_from_x(&self, x: &[f64]) -> Vec<f64> {
        let n = self.n();
        let mut y = vec![0.0; n];
        y[self.pivot] = x[self.pivot].asinh();
        for k in self.pivot + 1..n {
            y[k] = (x[k] - x[k - 1]).ln();
        }
        for k in 0..self.pivot {
            y[k] = (x[k + 1] - x[k]).ln();
        }
        y
    }

    fn kernel(&self, x: Vec<f64>) -> Kernel {
        Kernel { x, beta: self.beta.clone() }
    }

    /// Multiplicative constant fixed by the first side.
    fn constant(&self, kernel: &Kernel, first_side: f64) -> Complex64 {
        let d = self.vertices[1] - self.vertices[0];
        cdiv(d, kernel.side_phase(0) * first_side)
    }

    pub(crate) fn residual(&self, y: &[f64]) -> Option<Vec<f64>> {
        let x = self.x_from_y(y);
        if x.iter().any(|v| !v.is_finite()) || x.windows(2).any(|p| p[1] <= p[0]) {
            return None;
        }
        let kernel = self.kernel(x);
        let n = self.n();
        let sides: Vec<f64> = (0..n - 1).map(|k| kernel.side_integral(&self.rules, k)).collect();
        if sides.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
            return None;
        }
        let mut r = Vec::with_capacity(n);
        for k in 1..n - 1 {
            if k != self.implied_side {
                r.push((sides[k] / sides[0]).ln() - self.log_ratio[k - 1]);
            }
        }
        let c = self.constant(&kernel, sides[0]);
        let kc = self.center_vertex;
        let fc = self.vertices[kc] + c * kernel.integrate_from(&self.rules, kc, I);
        let e = (fc - self.center) / self.center_scale;
        r.push(e.re);
        r.push(e.im);
        let f_inf = fc + c * kernel.integrate_to_infinity(&self.rules);
        r.push((f_inf.im - self.exit.im) / self.center_scale);
        if r.iter().all(|v| v.is_finite()) {
            Some(r)
        } else {
            None
        }
    }

    /// Central-difference Jacobian, one column per thread.
    fn jacobian(&self, y: &[f64]) -> Option<DMatrix<f64>> {
        let n = self.n();
        let cols: Vec<Option<Vec<f64>>> = (0..n)
            .into_par_iter()
            .map(|j| {
                let h = 1e-5 * y[j].abs().max(1.0);
                let mut yp = y.to_vec();
                yp[j] += h;
                let mut ym = y.to_vec();
                ym[j] -= h;
                let rp = self.residual(&yp)?;
                let rm = self.residual(&ym)?;
                Some(rp.iter().zip(&rm).map(|(a, b)| (a - b) / (2.0 * h)).collect())
            })
            .collect();
        let mut jac = DMatrix::zeros(n, n);
        for (j, col) in cols.into_iter().enumerate() {
            let col = col?;
            for i in 0..n {
                jac[(i, j)] = col[i];
            }
        }
        Some(jac)
    }

    /// Levenberg-Marquardt iteration from `y`; returns the solution and its
    /// max-norm residual.
    pub(crate) fn solve(&self, y: Vec<f64>, tol: f64, max_iter: usize) -> Result<(Vec<f64>, f64)> {
        self.solve_shifted(y, None, tol, max_iter)
    }

    /// Solves `residual(y) = shift` (zero when `shift` is `None`).
    fn solve_shifted(&self, mut y: Vec<f64>, shift: Option<&[f64]>, tol: f64, max_iter: usize) -> Result<(Vec<f64>, f64)> {
        let eval = |y: &[f64]| -> Option<Vec<f64>> {
            let mut r = self.residual(y)?;
            if let Some(s) = shift {
                r.iter_mut().zip(s).for_each(|(a, b)| *a -= b);
            }
            Some(r)
        };
        let mut r = eval(&y).ok_or_else(|| Error::NoConvergence("initial prevertex guess is degenerate".into()))?;
        let norm2 = |r: &[f64]| r.iter().map(|v| v * v).sum::<f64>();
        let maxabs = |r: &[f64]| r.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let mut mu = 1e-3;
        let mut stall = 0;
        for _ in 0..max_iter {
            if maxabs(&r) <= tol {
                return Ok((y, maxabs(&r)));
            }
            let jac = self
                .jacobian(&y)
                .ok_or_else(|| Error::NoConvergence("Jacobian evaluation failed".into()))?;
            let jt = jac.transpose();
            let jtj = &jt * &jac;
            let g = &jt * DVector::from_column_slice(&r);
            let mut improved = false;
            for _ in 0..30 {
                let mut a = jtj.clone();
                for i in 0..a.nrows() {
                    a[(i, i)] += mu * jtj[(i, i)].max(1e-12);
                }
                let Some(step) = a.lu().solve(&(-&g)) else {
                    mu *= 4.0;
                    continue;
                };
                let cap = step.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                let scale = if cap > 2.0 { 2.0 / cap } else { 1.0 };
                let cand: Vec<f64> = y.iter().zip(step.iter()).map(|(a, b)| a + scale * b).collect();
                if let Some(rc) = eval(&cand) {
                    if norm2(&rc) < norm2(&r) {
                        let gain = norm2(&r) - norm2(&rc);
                        stall = if gain < 1e-6 * norm2(&r) { stall + 1 } else { 0 };
                        y = cand;
                        r = rc;
                        mu = (mu / 3.0).max(1e-12);
                        improved = true;
                        break;
                    }
                }
                mu *= 4.0;
                if mu > 1e12 {
                    break;
                }
            }
            if !improved || stall > 5 {
                break;
            }
        }
        let res = maxabs(&r);
        if res <= tol.max(1e-9) {
            Ok((y, res))
        } else {
            Err(Error::NoConvergence(format!("parameter problem residual {res:.3e}")))
        }
    }

    /// Continuation in the targets: starts from the exact solution of the
    /// problem whose side ratios and center are those of `y0`, and moves the
    /// targets to the true ones.
    pub(crate) fn solve_by_continuation(&self, y0: Vec<f64>, tol: f64, max_iter: usize) -> Result<(Vec<f64>, f64)> {
        let r0 = self
            .residual(&y0)
            .ok_or_else(|| Error::NoConvergence("initial prevertex guess is degenerate".into()))?;
        let mut y = y0;
        let mut s = 0.0;
        let mut ds: f64 = 0.125;
        while s < 1.0 {
            let next = (s + ds).min(1.0);
            let shift: Vec<f64> = r0.iter().map(|v| (1.0 - next) * v).collect();
            let stage_tol = if next < 1.0 { 1e-8 } else { tol };
            match self.solve_shifted(y.clone(), Some(&shift), stage_tol, max_iter) {
                Ok((yn, _)) => {
                    y = yn;
                    s = next;
                    ds = (2.0 * ds).min(0.5);
                }
                Err(e) => {
                    ds *= 0.25;
                    if ds < 1e-6 {
                        return Err(e);
                    }
                }
            }
        }
        self.solve(y, tol, max_iter)
    }

    pub(crate) fn finish(&self, y: &[f64], residual: f64, resolution: usize) -> ScMap {
        let kernel = self.kernel(self.x_from_y(y));
        let first = kernel.side_integral(&self.rules, 0);
        let constant = self.constant(&kernel, first);
        let (mut lo, mut hi) = (Complex64::new(f64::INFINITY, f64::INFINITY), Complex64::new(f64::NEG_INFINITY, f64::NEG_INFINITY));
        for v in &self.vertices {
            lo = Complex64::new(lo.re.min(v.re), lo.im.min(v.im));
            hi = Complex64::new(hi.re.max(v.re), hi.im.max(v.im));
        }
        ScMap {
            kernel,
            vertices: self.vertices.clone(),
            constant,
            rules: self.rules.clone(),
            resolution,
            residual,
            scale: (hi - lo).norm(),
        }
    }

    /// Prevertex guess from the angle the boundary subtends at the center.
    pub(crate) fn initial_guess(vertices: &[Complex64], center: Complex64, exit: Complex64) -> Vec<f64> {
        let n = vertices.len();
        let mut pts = Vec::with_capacity(n + 2);
        pts.push(exit);
        pts.extend_from_slice(vertices);
        pts.push(exit);
        let perimeter: f64 = pts.windows(2).map(|p| (p[1] - p[0]).norm()).sum();
        let mut cum = vec![0.0; pts.len()];
        for i in 1..pts.len() {
            let a = (pts[i - 1] - center).arg();
            let b = (pts[i] - center).arg();
            let mut d = (b - a).abs();
            if d > std::f64::consts::PI {
                d = 2.0 * std::f64::consts::PI - d;
            }
            cum[i] = cum[i - 1] + d + 0.2 * (pts[i] - pts[i - 1]).norm() / perimeter;
        }
        let total = cum[pts.len() - 1];
        (1..=n)
            .map(|i| {
                let alpha = 2.0 * std::f64::consts::PI * cum[i] / total;
                -1.0 / (0.5 * alpha).tan()
            })
            .collect()
    }
}
