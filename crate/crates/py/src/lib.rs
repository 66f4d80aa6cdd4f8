//! Python module `slopelab`.

use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

use slopelab_core::conformal::{self, MapSettings, RealAxisCursor, DEFAULT_RESOLUTION};
use slopelab_core::construct::{self, SearchConfig};
use slopelab_core::dynamics::{self, TimeGrid};
use slopelab_core::staircase;
use slopelab_core::Error;

create_exception!(slopelab, SlopelabError, PyException);

fn to_py(e: Error) -> PyErr {
    if e.is_validation() {
        PyValueError::new_err(e.to_string())
    } else {
        SlopelabError::new_err(e.to_string())
    }
}

fn json_value<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (text,))
}

fn to_json<T: serde::Serialize>(value: &T) -> PyResult<String> {
    serde_json::to_string(value).map_err(|e| SlopelabError::new_err(e.to_string()))
}

/// Heights `v`, depths `w` and abscissas `u` of a finite staircase.
#[pyclass(name = "StaircaseParams", module = "slopelab", skip_from_py_object)]
#[derive(Clone)]
struct PyParams {
    inner: staircase::StaircaseParams,
}

#[pymethods]
impl PyParams {
    #[new]
    fn new(u: Vec<f64>, v: Vec<f64>, w: Vec<f64>) -> PyResult<Self> {
        Ok(PyParams { inner: staircase::build_params(u, v, w).map_err(to_py)? })
    }

    #[getter]
    fn u(&self) -> Vec<f64> {
        self.inner.u.clone()
    }

    #[getter]
    fn v(&self) -> Vec<f64> {
        self.inner.v.clone()
    }

    #[getter]
    fn w(&self) -> Vec<f64> {
        self.inner.w.clone()
    }

    fn with_stage(&self, u_next: f64, v: f64, w: f64) -> PyResult<Self> {
        Ok(PyParams { inner: self.inner.with_stage(u_next, v, w).map_err(to_py)? })
    }

    fn conjugate(&self) -> Self {
        PyParams { inner: self.inner.conjugate() }
    }

    /// The staircase closed by a rectangle of length `tail_length`.
    fn realize(&self, tail_length: f64) -> PyResult<PyPolygon> {
        Ok(PyPolygon { inner: staircase::realize(&self.inner, tail_length).map_err(to_py)? })
    }

    fn __repr__(&self) -> String {
        format!("StaircaseParams(u={:?}, v={:?}, w={:?})", self.inner.u, self.inner.v, self.inner.w)
    }
}

#[pyclass(name = "Polygon", module = "slopelab", skip_from_py_object)]
#[derive(Clone)]
struct PyPolygon {
    inner: staircase::StaircasePolygon,
}

#[pymethods]
impl PyPolygon {
    /// A rectilinear polygon from its vertices in counterclockwise order.
    #[staticmethod]
    fn from_vertices(vertices: Vec<Complex64>, tail_start: f64, tail_length: f64) -> PyResult<Self> {
        let inner = staircase::StaircasePolygon::from_vertices(vertices, tail_start, tail_length).map_err(to_py)?;
        Ok(PyPolygon { inner })
    }

    #[getter]
    fn vertices(&self) -> Vec<Complex64> {
        self.inner.vertices.clone()
    }

    #[getter]
    fn trusted_bound(&self) -> f64 {
        self.inner.trusted_bound()
    }

    fn contains(&self, z: Complex64) -> bool {
        staircase::contains(&self.inner, z)
    }

    fn signed_area(&self) -> f64 {
        self.inner.signed_area()
    }

    fn conjugate(&self) -> Self {
        PyPolygon { inner: self.inner.conjugate() }
    }

    fn __repr__(&self) -> String {
        format!("Polygon({} vertices, trusted up to {})", self.inner.vertices.len(), self.inner.trusted_bound())
    }
}

/// Riemann map of the unit disk onto a polygon, with `g(0) = center` and
/// the exit point of the horizontal ray from the center as `g(1)`.
#[pyclass(name = "ConformalMap", module = "slopelab")]
struct PyMap {
    inner: conformal::ConformalMap,
}

#[pymethods]
impl PyMap {
    #[new]
    #[pyo3(signature = (polygon, resolution = DEFAULT_RESOLUTION, center = Complex64::new(0.0, 0.0)))]
    fn new(py: Python<'_>, polygon: &PyPolygon, resolution: usize, center: Complex64) -> PyResult<Self> {
        let poly = polygon.inner.clone();
        let settings = MapSettings::new(resolution).with_center(center);
        let inner = py.detach(|| conformal::build_map_with(&poly, &settings)).map_err(to_py)?;
        Ok(PyMap { inner })
    }

    #[getter]
    fn accuracy(&self) -> f64 {
        self.inner.accuracy()
    }

    #[getter]
    fn resolution(&self) -> usize {
        self.inner.resolution()
    }

    #[getter]
    fn exit(&self) -> f64 {
        self.inner.exit()
    }

    #[getter]
    fn b(&self) -> Complex64 {
        self.inner.b()
    }

    #[getter]
    fn polygon(&self) -> PyPolygon {
        PyPolygon { inner: self.inner.polygon().clone() }
    }

    fn forward(&self, z: Complex64) -> PyResult<Complex64> {
        self.inner.forward(z).map_err(to_py)
    }

    fn inverse(&self, zeta: Complex64) -> PyResult<Complex64> {
        self.inner.inverse(zeta).map_err(to_py)
    }

    fn derivative(&self, z: Complex64) -> PyResult<Complex64> {
        self.inner.derivative(z).map_err(to_py)
    }

    /// Preimages of real points, continued from one to the next.
    fn inverse_real_axis(&self, ts: Vec<f64>) -> PyResult<Vec<Complex64>> {
        let mut cursor = RealAxisCursor::new();
        ts.iter().map(|&t| self.inner.inverse_real_axis(t, &mut cursor).map_err(to_py)).collect()
    }

    /// `Arg(1 - g^{-1}(t))` for real points `t`.
    fn real_axis_slopes(&self, ts: Vec<f64>) -> PyResult<Vec<f64>> {
        let mut cursor = RealAxisCursor::new();
        ts.iter()
            .map(|&t| Ok(self.inner.inverse_along(Complex64::new(t, 0.0), &mut cursor).map_err(to_py)?.slope()))
            .collect()
    }

    fn metadata<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        json_value(py, &to_json(&self.inner.metadata())?)
    }

    fn __repr__(&self) -> String {
        format!("ConformalMap(resolution={}, accuracy={:.3e})", self.inner.resolution(), self.inner.accuracy())
    }
}

#[pyclass(name = "Trajectory", module = "slopelab")]
struct PyTrajectory {
    inner: dynamics::Trajectory,
}

#[pymethods]
impl PyTrajectory {
    #[getter]
    fn t_grid(&self) -> Vec<f64> {
        self.inner.t_grid.clone()
    }

    #[getter]
    fn points(&self) -> Vec<Complex64> {
        self.inner.points.clone()
    }

    /// `1 - points`, accurate even when the points round to 1.
    #[getter]
    fn gaps(&self) -> Vec<Complex64> {
        self.inner.gaps.clone()
    }

    #[getter]
    fn theta(&self) -> Vec<f64> {
        dynamics::slope_curve(&self.inner).theta
    }

    /// `(lo, hi)` of the slope over the last `tail_fraction` of the window.
    #[pyo3(signature = (tail_fraction = 0.5))]
    fn slope_interval(&self, tail_fraction: f64) -> PyResult<(f64, f64)> {
        let iv = dynamics::slope_interval(&dynamics::slope_curve(&self.inner), tail_fraction).map_err(to_py)?;
        Ok((iv.lo, iv.hi))
    }

    fn dw_check(&self, tol: f64) -> bool {
        dynamics::dw_check(&self.inner, tol)
    }

    fn to_csv(&self) -> PyResult<String> {
        let mut buf = Vec::new();
        dynamics::write_csv(&self.inner, &mut buf).map_err(|e| to_py(e.into()))?;
        Ok(String::from_utf8_lossy(&buf).into_owned())
    }

    fn __len__(&self) -> usize {
        self.inner.points.len()
    }
}

/// Orbit of `z0` on `t_grid`, or on the default geometric grid up to 100.
#[pyfunction]
#[pyo3(signature = (map, z0 = Complex64::new(0.0, 0.0), t_grid = None))]
fn trajectory(py: Python<'_>, map: &PyMap, z0: Complex64, t_grid: Option<Vec<f64>>) -> PyResult<PyTrajectory> {
    let grid = match t_grid {
        Some(g) => g,
        None => TimeGrid::default().points().map_err(to_py)?,
    };
    let inner = py.detach(|| dynamics::trajectory(&map.inner, z0, &grid)).map_err(to_py)?;
    Ok(PyTrajectory { inner })
}

#[pyfunction]
fn generator(map: &PyMap, z: Complex64) -> PyResult<Complex64> {
    dynamics::generator(&map.inner, z).map_err(to_py)
}

#[pyfunction]
fn generator_deviation(map: &PyMap, traj: &PyTrajectory) -> PyResult<f64> {
    dynamics::generator_deviation(&map.inner, &traj.inner).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (polygon, resolution = DEFAULT_RESOLUTION))]
fn accuracy_estimate(py: Python<'_>, polygon: &PyPolygon, resolution: usize) -> PyResult<f64> {
    py.detach(|| conformal::accuracy_estimate(&polygon.inner, resolution)).map_err(to_py)
}

#[pyfunction]
fn half_plane_map(z: Complex64) -> Complex64 {
    conformal::half_plane_map(z)
}

#[pyfunction]
fn half_plane_orbit(t: f64) -> f64 {
    conformal::half_plane_orbit(t)
}

/// Inverse of the explicit map onto the quadrant with corner `u - i w`.
#[pyfunction]
fn explicit_quadrant_inverse(u: f64, w: f64, zeta: Complex64) -> PyResult<Complex64> {
    let q = conformal::QuadrantMapParams::new(u, w).map_err(to_py)?;
    conformal::explicit_quadrant_inverse(&q, zeta).map_err(to_py)
}

#[pyclass(name = "Certificate", module = "slopelab", skip_from_py_object)]
#[derive(Clone)]
struct PyCertificate {
    inner: construct::ConstructionCertificate,
}

#[pymethods]
impl PyCertificate {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyCertificate { inner: construct::ConstructionCertificate::from_json(text).map_err(to_py)? })
    }

    fn to_json(&self) -> PyResult<String> {
        self.inner.to_json().map_err(to_py)
    }

    #[getter]
    fn stages<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        json_value(py, &to_json(&self.inner.stages)?)
    }

    #[getter]
    fn final_params(&self) -> PyParams {
        PyParams { inner: self.inner.final_params.clone() }
    }

    #[getter]
    fn tail_length(&self) -> f64 {
        self.inner.tail_length
    }

    #[getter]
    fn max_accuracy(&self) -> f64 {
        self.inner.max_accuracy()
    }

    /// `(lo, hi)` of the slope of the orbit of 0 between the first and last witness.
    #[pyo3(signature = (resolution = DEFAULT_RESOLUTION, samples = 200))]
    fn slope_interval(&self, py: Python<'_>, resolution: usize, samples: usize) -> PyResult<(f64, f64)> {
        let iv = py.detach(|| construct::certificate_slope_interval(&self.inner, resolution, samples)).map_err(to_py)?;
        Ok((iv.lo, iv.hi))
    }

    fn __repr__(&self) -> String {
        format!("Certificate({} stages)", self.inner.stages.len())
    }
}

/// Alternating extension search from the base staircase.
#[pyfunction]
#[pyo3(signature = (stages = 2, eps_schedule = None, resolution = 8, tail_factor = 2.0))]
fn build_counterexample(
    py: Python<'_>,
    stages: usize,
    eps_schedule: Option<Vec<f64>>,
    resolution: usize,
    tail_factor: f64,
) -> PyResult<PyCertificate> {
    let cfg = SearchConfig { resolution, tail_factor, ..SearchConfig::default() };
    let inner = py
        .detach(|| construct::build_counterexample(stages, eps_schedule.as_deref(), &cfg, None))
        .map_err(to_py)?;
    Ok(PyCertificate { inner })
}

/// Verification report as a dict; `report["passed"]` is the verdict.
#[pyfunction]
#[pyo3(signature = (certificate, strictness = 2.0))]
fn verify_certificate<'py>(py: Python<'py>, certificate: &PyCertificate, strictness: f64) -> PyResult<Bound<'py, PyAny>> {
    let report = py.detach(|| construct::verify_certificate(&certificate.inner, strictness));
    json_value(py, &to_json(&report)?)
}

/// Runs the command-line interface with `args` (without the program name)
/// and returns `(exit_status, output)`.
#[pyfunction]
fn run_cli(py: Python<'_>, args: Vec<String>) -> (i32, String) {
    py.detach(|| {
        let mut out = Vec::new();
        let code = slopelab_core::cli::run(std::iter::once("slopelab".to_string()).chain(args), &mut out);
        (code, String::from_utf8_lossy(&out).into_owned())
    })
}

#[pymodule]
fn slopelab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("SlopelabError", m.py().get_type::<SlopelabError>())?;
    m.add("DEFAULT_RESOLUTION", DEFAULT_RESOLUTION)?;
    m.add_class::<PyParams>()?;
    m.add_class::<PyPolygon>()?;
    m.add_class::<PyMap>()?;
    m.add_class::<PyTrajectory>()?;
    m.add_class::<PyCertificate>()?;
    m.add_function(wrap_pyfunction!(trajectory, m)?)?;
    m.add_function(wrap_pyfunction!(generator, m)?)?;
    m.add_function(wrap_pyfunction!(generator_deviation, m)?)?;
    m.add_function(wrap_pyfunction!(accuracy_estimate, m)?)?;
    m.add_function(wrap_pyfunction!(half_plane_map, m)?)?;
    m.add_function(wrap_pyfunction!(half_plane_orbit, m)?)?;
    m.add_function(wrap_pyfunction!(explicit_quadrant_inverse, m)?)?;
    m.add_function(wrap_pyfunction!(build_counterexample, m)?)?;
    m.add_function(wrap_pyfunction!(verify_certificate, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
