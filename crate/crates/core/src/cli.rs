//! Command-line front end: one JSON run configuration shared by all
//! subcommands, with flags overriding individual fields.
//!
//! Exit statuses: 0 success, 2 usage or I/O error, 3 validation failure,
//! 4 numerical failure, 5 verification failure.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use plotters::prelude::*;
use serde::{Deserialize, Serialize};

use crate::conformal::{
    build_map_with, explicit_quadrant_inverse, half_plane_map, half_plane_orbit, standard_grid, ConformalMap,
    MapSettings, MapTolerances, QuadrantMapParams, RealAxisCursor, MIN_RESOLUTION,
};
use crate::construct::{build_counterexample, verify_with, ConstructionCertificate, SearchConfig};
use crate::dynamics::{slope_curve, slope_interval, trajectory, write_csv, SlopeInterval, TimeGrid, Trajectory};
use crate::error::{Error, Result};
use crate::staircase::{build_params, realize, StaircaseParams, StaircasePolygon};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;
pub const EXIT_VERIFICATION: i32 = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    /// Delimiter-separated tables (`.csv`).
    Table,
    /// JSON documents.
    Json,
    /// SVG plots.
    Svg,
}

/// Extension search settings; resolution, tolerances and tail come from the
/// enclosing [`RunConfig`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SearchPolicy {
    pub m0: Option<f64>,
    pub growth: f64,
    pub cap_factor: f64,
    pub xi_points: usize,
}

impl Default for SearchPolicy {
    fn default() -> Self {
        let d = SearchConfig::default();
        SearchPolicy { m0: d.m0, growth: d.growth, cap_factor: d.cap_factor, xi_points: d.xi_points }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TailPolicy {
    /// Closing tail for `trajectory`, `slope` and `plot`.
    pub tail_length: f64,
    /// Tail of the construction's final domain, in units of the last `M`.
    pub tail_factor: f64,
    /// Fraction of the time window used by `slope`.
    pub tail_fraction: f64,
}

impl Default for TailPolicy {
    fn default() -> Self {
        TailPolicy { tail_length: 256.0, tail_factor: SearchConfig::default().tail_factor, tail_fraction: 0.5 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub tolerances: MapTolerances,
    pub resolution: usize,
    pub search: SearchPolicy,
    pub time_grid: TimeGrid,
    pub tail: TailPolicy,
    /// Staircase used by `validate`, `trajectory`, `slope` and `plot`.
    pub params: StaircaseParams,
    /// Start point `[re, im]` of trajectories.
    pub z0: [f64; 2],
    /// Per-stage epsilons for `construct`; `1/(2 floor(n/2))` when absent.
    pub eps_schedule: Option<Vec<f64>>,
    pub stages: usize,
    pub strictness: f64,
    pub output_dir: PathBuf,
    pub formats: Vec<OutputFormat>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            tolerances: MapTolerances::default(),
            resolution: crate::conformal::DEFAULT_RESOLUTION,
            search: SearchPolicy::default(),
            time_grid: TimeGrid::default(),
            tail: TailPolicy::default(),
            params: StaircaseParams { u: vec![1.0, 2.0, 4.0], v: vec![1.0, 3.0], w: vec![1.0, 1.0] },
            z0: [0.0, 0.0],
            eps_schedule: None,
            stages: 2,
            strictness: 2.0,
            output_dir: PathBuf::from("slopelab-out"),
            formats: vec![OutputFormat::Table, OutputFormat::Json, OutputFormat::Svg],
        }
    }
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn validate(&self) -> Result<()> {
        let t = &self.tolerances;
        for (name, value) in [("tau1", t.tau1), ("tau2", t.tau2), ("solver_tol", t.solver_tol)] {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::Config(format!("tolerance {name} = {value} must be positive")));
            }
        }
        if t.newton_budget == 0 || t.solver_iterations == 0 {
            return Err(Error::Config("iteration budgets must be positive".into()));
        }
        if self.resolution < MIN_RESOLUTION {
            return Err(Error::ResolutionTooLow { got: self.resolution, min: MIN_RESOLUTION });
        }
        if !(self.tail.tail_length > 0.0) {
            return Err(Error::Config(format!("tail_length = {} must be positive", self.tail.tail_length)));
        }
        if !(self.strictness >= 1.0) {
            return Err(Error::Config(format!("strictness = {} must be at least 1", self.strictness)));
        }
        if self.formats.is_empty() {
            return Err(Error::Config("at least one output format is required".into()));
        }
        self.time_grid.points()?;
        self.search_config().validate()
    }

    pub fn search_config(&self) -> SearchConfig {
        SearchConfig {
            m0: self.search.m0,
            growth: self.search.growth,
            cap_factor: self.search.cap_factor,
            xi_points: self.search.xi_points,
            resolution: self.resolution,
            tail_factor: self.tail.tail_factor,
            tolerances: self.tolerances,
        }
    }

    fn settings(&self) -> MapSettings {
        MapSettings::new(self.resolution).with_tolerances(self.tolerances)
    }

    fn wants(&self, f: OutputFormat) -> bool {
        self.formats.contains(&f)
    }
}

#[derive(Debug, Parser)]
#[command(name = "slopelab", version, about = "Staircase domains and slopes of semigroup trajectories")]
pub struct Cli {
    /// JSON run configuration; defaults apply to absent fields.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub output_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    pub resolution: Option<usize>,
    /// Output formats, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    pub formats: Option<Vec<OutputFormat>>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct ParamArgs {
    /// Abscissas, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub u: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub v: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub w: Option<Vec<f64>>,
    #[arg(long)]
    pub tail_length: Option<f64>,
}

#[derive(Debug, Args)]
pub struct OrbitArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Start point as `re,im`.
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    pub z0: Option<[f64; 2]>,
    #[arg(long)]
    pub t_max: Option<f64>,
}

fn parse_point(s: &str) -> std::result::Result<[f64; 2], String> {
    let parts: Vec<&str> = s.split(',').collect();
    match parts.as_slice() {
        [re, im] => {
            let re = re.trim().parse::<f64>().map_err(|e| e.to_string())?;
            let im = im.trim().parse::<f64>().map_err(|e| e.to_string())?;
            Ok([re, im])
        }
        _ => Err(format!("expected re,im but got '{s}'")),
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check staircase parameters.
    Validate(ParamArgs),
    /// Compare the mapping engine against closed-form maps.
    MapTest,
    /// Export the orbit of `z0` and its slope curve.
    Trajectory(OrbitArgs),
    /// Report the slope interval over the tail of the time window.
    Slope {
        #[command(flatten)]
        orbit: OrbitArgs,
        #[arg(long)]
        tail_fraction: Option<f64>,
    },
    /// Run the alternating extension search and write a certificate.
    Construct {
        #[arg(long)]
        stages: Option<usize>,
    },
    /// Recompute a certificate at higher resolution and longer tail.
    Verify {
        /// Certificate file; `<output_dir>/certificate.json` by default.
        #[arg(long)]
        certificate: Option<PathBuf>,
        #[arg(long)]
        strictness: Option<f64>,
    },
    /// Draw the domain with the orbit of `z0` and the slope against log t.
    Plot(OrbitArgs),
}

/// Exit status for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) | Error::Json(_) => EXIT_USAGE,
        e if e.is_validation() => EXIT_VALIDATION,
        _ => EXIT_NUMERICAL,
    }
}

/// Parses `args` (program name first) and runs one command, writing the
/// human-readable report to `out`. Returns the exit status.
pub fn run<I, T, W>(args: I, out: &mut W) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
    W: Write,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = write!(out, "{e}");
            return code;
        }
    };
    match execute(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(out, "error: {e}");
            exit_code(&e)
        }
    }
}

fn execute<W: Write>(cli: Cli, out: &mut W) -> Result<i32> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    if let Some(d) = cli.output_dir {
        cfg.output_dir = d;
    }
    if let Some(r) = cli.resolution {
        cfg.resolution = r;
    }
    if let Some(f) = cli.formats {
        cfg.formats = f;
    }
    match cli.command {
        Command::Validate(p) => {
            apply_params(&mut cfg, &p);
            validate_cmd(&cfg, out)
        }
        Command::MapTest => {
            cfg.validate()?;
            map_test_cmd(&cfg, out)
        }
        Command::Trajectory(o) => {
            apply_orbit(&mut cfg, &o);
            cfg.validate()?;
            trajectory_cmd(&cfg, out)
        }
        Command::Slope { orbit, tail_fraction } => {
            apply_orbit(&mut cfg, &orbit);
            if let Some(f) = tail_fraction {
                cfg.tail.tail_fraction = f;
            }
            cfg.validate()?;
            slope_cmd(&cfg, out)
        }
        Command::Construct { stages } => {
            if let Some(s) = stages {
                cfg.stages = s;
            }
            cfg.validate()?;
            construct_cmd(&cfg, out)
        }
        Command::Verify { certificate, strictness } => {
            if let Some(s) = strictness {
                cfg.strictness = s;
            }
            cfg.validate()?;
            let path = certificate.unwrap_or_else(|| cfg.output_dir.join("certificate.json"));
            verify_cmd(&cfg, &path, out)
        }
        Command::Plot(o) => {
            apply_orbit(&mut cfg, &o);
            cfg.validate()?;
            plot_cmd(&cfg, out)
        }
    }
}

fn apply_params(cfg: &mut RunConfig, p: &ParamArgs) {
    if let Some(u) = &p.u {
        cfg.params.u = u.clone();
    }
    if let Some(v) = &p.v {
        cfg.params.v = v.clone();
    }
    if let Some(w) = &p.w {
        cfg.params.w = w.clone();
    }
    if let Some(t) = p.tail_length {
        cfg.tail.tail_length = t;
    }
}

fn apply_orbit(cfg: &mut RunConfig, o: &OrbitArgs) {
    apply_params(cfg, &o.params);
    if let Some(z) = o.z0 {
        cfg.z0 = z;
    }
    if let Some(t_max) = o.t_max {
        cfg.time_grid = match cfg.time_grid {
            TimeGrid::Geometric { t0, count, .. } => TimeGrid::Geometric { t0, t_max, count },
            TimeGrid::Linear { count, .. } => TimeGrid::Linear { t_max, count },
        };
    }
}

fn ensure_output_dir(cfg: &RunConfig) -> Result<()> {
    fs::create_dir_all(&cfg.output_dir)?;
    Ok(())
}

fn validate_cmd<W: Write>(cfg: &RunConfig, out: &mut W) -> Result<i32> {
    let p = &cfg.params;
    let params = build_params(p.u.clone(), p.v.clone(), p.w.clone())?;
    let poly = realize(&params, cfg.tail.tail_length)?;
    writeln!(out, "valid: {} stages, {} polygon vertices", params.stage_count(), poly.vertices.len())?;
    Ok(EXIT_OK)
}

/// One row of the oracle suite.
#[derive(Debug, Clone, Serialize)]
pub struct OracleRow {
    pub case: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Oracle agreement suite: unit square round trip, a large box against the
/// half-plane map, and a truncated quadrant against its explicit inverse.
pub fn map_test_suite(cfg: &RunConfig) -> Result<Vec<OracleRow>> {
    let c = Complex64::new;
    let tol = &cfg.tolerances;
    let mut rows = Vec::new();
    let mut push = |case: &str, residual: f64, tolerance: f64| {
        rows.push(OracleRow { case: case.into(), residual, tolerance, passed: residual <= tolerance });
    };

    let square = StaircasePolygon::from_vertices(vec![c(-1., -1.), c(1., -1.), c(1., 1.), c(-1., 1.)], 0.0, 1.0)?;
    let m = build_map_with(&square, &cfg.settings())?;
    let mut worst: f64 = 0.0;
    for z in standard_grid() {
        worst = worst.max((m.inverse(m.forward(z)?)? - z).norm());
    }
    push("square round trip", worst, 10.0 * m.accuracy());

    let (l, h) = (4000.0, 4000.0);
    let boxed = StaircasePolygon::from_vertices(vec![c(-1., -h), c(l - 1., -h), c(l - 1., h), c(-1., h)], 0.0, l - 1.)?;
    let m = build_map_with(&boxed, &cfg.settings())?;
    let mut worst: f64 = 0.0;
    for z in standard_grid().into_iter().filter(|z| z.norm() <= 0.5) {
        worst = worst.max((m.forward(z)? - half_plane_map(z)).norm());
    }
    push("half-plane forward", worst, tol.tau1);
    let mut cursor = RealAxisCursor::new();
    let mut worst: f64 = 0.0;
    for k in 0..=100 {
        let t = 0.02 * m.polygon().trusted_bound() * k as f64 / 2.0;
        worst = worst.max((m.inverse_real_axis(t, &mut cursor)? - half_plane_orbit(t)).norm());
    }
    push("half-plane orbit", worst, tol.tau1);

    let q = QuadrantMapParams::new(2.0, 1.0)?;
    let tail = 1024.0;
    let corner = q.corner();
    let quad = StaircasePolygon::from_vertices(
        vec![corner, corner + tail, corner + c(tail, tail), corner + c(0.0, tail)],
        q.u,
        tail,
    )?;
    let m = build_map_with(&quad, &cfg.settings().with_center(q.center()))?;
    let mut cursor = RealAxisCursor::new();
    let mut worst: f64 = 0.0;
    let end = 3.0 + tail / 2.0;
    for k in 0..=200 {
        let t = 3.0 * (end / 3.0).powf(k as f64 / 200.0);
        let got = m.inverse_along(c(t, 0.0), &mut cursor)?.z;
        worst = worst.max((got - explicit_quadrant_inverse(&q, c(t, 0.0))?).norm());
    }
    push("quadrant real axis", worst, tol.tau2);
    let spot = (m.inverse(c(3.0, 0.0))? - c(1.0 / 3.0, 0.0)).norm().max((m.inverse(c(4.0, 0.0))? - c(12.0, -3.0) / 17.0).norm());
    push("quadrant spot values", spot, tol.tau2);
    Ok(rows)
}

fn map_test_cmd<W: Write>(cfg: &RunConfig, out: &mut W) -> Result<i32> {
    let rows = map_test_suite(cfg)?;
    writeln!(out, "{:<24} {:>12} {:>12}  result", "case", "residual", "tolerance")?;
    for r in &rows {
        let verdict = if r.passed { "pass" } else { "FAIL" };
        writeln!(out, "{:<24} {:>12.3e} {:>12.3e}  {verdict}", r.case, r.residual, r.tolerance)?;
    }
    if cfg.wants(OutputFormat::Json) {
        ensure_output_dir(cfg)?;
        fs::write(cfg.output_dir.join("map-test.json"), serde_json::to_string_pretty(&rows)?)?;
    }
    Ok(if rows.iter().all(|r| r.passed) { EXIT_OK } else { EXIT_VERIFICATION })
}

fn orbit(cfg: &RunConfig) -> Result<(ConformalMap, Trajectory)> {
    let p = &cfg.params;
    let params = build_params(p.u.clone(), p.v.clone(), p.w.clone())?;
    let poly = realize(&params, cfg.tail.tail_length)?;
    let map = build_map_with(&poly, &cfg.settings())?;
    let grid = cfg.time_grid.points()?;
    let traj = trajectory(&map, Complex64::new(cfg.z0[0], cfg.z0[1]), &grid)?;
    Ok((map, traj))
}

fn trajectory_cmd<W: Write>(cfg: &RunConfig, out: &mut W) -> Result<i32> {
    let (map, traj) = orbit(cfg)?;
    ensure_output_dir(cfg)?;
    if cfg.wants(OutputFormat::Table) {
        let mut f = fs::File::create(cfg.output_dir.join("trajectory.csv"))?;
        write_csv(&traj, &mut f)?;
    }
    if cfg.wants(OutputFormat::Json) {
        fs::write(cfg.output_dir.join("map.json"), serde_json::to_string_pretty(&map.metadata())?)?;
    }
    let last = traj.points.last().copied().unwrap_or(traj.z0);
    writeln!(
        out,
        "{} samples, map accuracy {:.3e}, final point {:.12} {:+.12}i, final slope {:.12}",
        traj.points.len(),
        map.accuracy(),
        last.re,
        last.im,
        traj.gaps.last().map(|g| g.arg()).unwrap_or(0.0)
    )?;
    Ok(EXIT_OK)
}

#[derive(Debug, Serialize)]
struct SlopeReport {
    interval: SlopeInterval,
    map_accuracy: f64,
    t_max: f64,
}

fn slope_cmd<W: Write>(cfg: &RunConfig, out: &mut W) -> Result<i32> {
    let (map, traj) = orbit(cfg)?;
    let interval = slope_interval(&slope_curve(&traj), cfg.tail.tail_fraction)?;
    let report = SlopeReport { interval, map_accuracy: map.accuracy(), t_max: *traj.t_grid.last().unwrap_or(&0.0) };
    if cfg.wants(OutputFormat::Json) {
        ensure_output_dir(cfg)?;
        fs::write(cfg.output_dir.join("slope.json"), serde_json::to_string_pretty(&report)?)?;
    }
    writeln!(
        out,
        "slope interval [{:.12}, {:.12}] over t >= {:.6}, map accuracy {:.3e}",
        interval.lo, interval.hi, interval.tail_start, report.map_accuracy
    )?;
    Ok(EXIT_OK)
}

fn construct_cmd<W: Write>(cfg: &RunConfig, out: &mut W) -> Result<i32> {
    let cert = build_counterexample(cfg.stages, cfg.eps_schedule.as_deref(), &cfg.search_config(), None)?;
    ensure_output_dir(cfg)?;
    let path = cfg.output_dir.join("certificate.json");
    fs::write(&path, cert.to_json()?)?;
    for s in &cert.stages {
        writeln!(out, "stage {} {:?}: M = {}, xi = {}, theta = {:.12}", s.n, s.direction, s.m_n, s.xi_n, s.theta_n)?;
    }
    writeln!(out, "certificate written to {}", path.display())?;
    Ok(EXIT_OK)
}

fn verify_cmd<W: Write>(cfg: &RunConfig, path: &Path, out: &mut W) -> Result<i32> {
    let cert = ConstructionCertificate::from_json(&fs::read_to_string(path)?)?;
    let report = verify_with(&cert, cfg.strictness, &cfg.tolerances);
    if cfg.wants(OutputFormat::Json) {
        ensure_output_dir(cfg)?;
        fs::write(cfg.output_dir.join("verify.json"), serde_json::to_string_pretty(&report)?)?;
    }
    for s in &report.stages {
        let verdict = if s.passed { "pass" } else { "FAIL" };
        writeln!(
            out,
            "stage {}: theta {:.12} (certified {:.12}, threshold {:+.6})  {verdict}",
            s.n, s.theta_recomputed, s.theta_certified, s.threshold
        )?;
    }
    if let Some(e) = &report.error {
        writeln!(out, "error: {e}")?;
    }
    writeln!(out, "verification {}", if report.passed { "passed" } else { "failed" })?;
    Ok(if report.passed { EXIT_OK } else { EXIT_VERIFICATION })
}

fn plot_err<E: std::fmt::Display>(e: E) -> Error {
    Error::Io(std::io::Error::other(e.to_string()))
}

fn plot_cmd<W: Write>(cfg: &RunConfig, out: &mut W) -> Result<i32> {
    if !cfg.wants(OutputFormat::Svg) {
        return Err(Error::Config("plot needs the svg output format".into()));
    }
    let (map, traj) = orbit(cfg)?;
    ensure_output_dir(cfg)?;
    let domain_path = cfg.output_dir.join("domain.svg");
    let slope_path = cfg.output_dir.join("slope.svg");
    plot_domain(&map, &traj, &domain_path).map_err(plot_err)?;
    plot_slope(&traj, &slope_path).map_err(plot_err)?;
    writeln!(out, "wrote {} and {}", domain_path.display(), slope_path.display())?;
    Ok(EXIT_OK)
}

type PlotResult = std::result::Result<(), Box<dyn std::error::Error>>;

fn plot_domain(map: &ConformalMap, traj: &Trajectory, path: &Path) -> PlotResult {
    let poly = map.polygon();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for z in &poly.vertices {
        x0 = x0.min(z.re);
        x1 = x1.max(z.re);
        y0 = y0.min(z.im);
        y1 = y1.max(z.im);
    }
    let pad = 0.03 * (x1 - x0).max(y1 - y0);
    let root = SVGBackend::new(path, (900, 600)).into_drawing_area();
    root.fill(&WHITE)?;
    let mut chart = ChartBuilder::on(&root)
        .caption(format!("domain and orbit (slopelab {})", env!("CARGO_PKG_VERSION")), ("sans-serif", 18))
        .margin(12)
        .x_label_area_size(30)
        .y_label_area_size(50)
        .build_cartesian_2d((x0 - pad)..(x1 + pad), (y0 - pad)..(y1 + pad))?;
    chart.configure_mesh().disable_mesh().draw()?;
    let mut outline: Vec<(f64, f64)> = poly.vertices.iter().map(|z| (z.re, z.im)).collect();
    outline.push(outline[0]);
    chart.draw_series(LineSeries::new(outline, &BLACK))?;
    let zeta0 = map.forward(traj.z0)?;
    chart.draw_series(traj.t_grid.iter().map(|t| Circle::new((zeta0.re + t, zeta0.im), 2, RED.filled())))?;
    root.present()?;
    Ok(())
}

fn plot_slope(traj: &Trajectory, path: &Path) -> PlotResult {
    let pts: Vec<(f64, f64)> =
        traj.t_grid.iter().zip(&traj.gaps).filter(|(t, _)| **t > 0.0).map(|(t, g)| (t.log10(), g.arg())).collect();
    let (a, b) = match (pts.first(), pts.last()) {
        (Some(a), Some(b)) if b.0 > a.0 => (a.0, b.0),
        _ => (0.0, 1.0),
    };
    let half_pi = std::f64::consts::FRAC_PI_2;
    let root = SVGBackend::new(path, (900, 500)).into_drawing_area();
    root.fill(&WHITE)?;
    let mut chart = ChartBuilder::on(&root)
        .caption(format!("slope against log10 t (slopelab {})", env!("CARGO_PKG_VERSION")), ("sans-serif", 18))
        .margin(12)
        .x_label_area_size(30)
        .y_label_area_size(50)
        .build_cartesian_2d(a..b, -half_pi..half_pi)?;
    chart.configure_mesh().x_desc("log10 t").y_desc("theta").draw()?;
    chart.draw_series(LineSeries::new(pts, &BLUE))?;
    root.present()?;
    Ok(())
}
