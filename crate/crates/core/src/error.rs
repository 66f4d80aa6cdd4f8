use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("NonMonotoneU: abscissas must be positive and strictly increasing ({0})")]
    NonMonotoneU(String),
    #[error("HeightBelowOne: {which}[{index}] = {value} is below 1")]
    HeightBelowOne { which: &'static str, index: usize, value: f64 },
    #[error("NonMonotoneHeights: {which} decreases at index {index}")]
    NonMonotoneHeights { which: &'static str, index: usize },
    #[error("LengthMismatch: |u| = {u}, |v| = {v}, |w| = {w}; expected |u| = |v| + 1 = |w| + 1")]
    LengthMismatch { u: usize, v: usize, w: usize },
    #[error("DegenerateGeometry: {0}")]
    DegenerateGeometry(String),
    #[error("GeometryNotJordan: {0}")]
    GeometryNotJordan(String),
    #[error("ResolutionTooLow: {got} < minimum {min}")]
    ResolutionTooLow { got: usize, min: usize },
    #[error("OutsideDisk: |z| = {0} is not < 1")]
    OutsideDisk(f64),
    #[error("OutsideDomain: {0} is not interior to the polygon")]
    OutsideDomain(String),
    #[error("OutsideQuadrant: {0} is not in the open quadrant")]
    OutsideQuadrant(String),
    #[error("NoConvergence: {0}")]
    NoConvergence(String),
    #[error("TooCloseToBoundary: |z| = {modulus} exceeds 1 - {margin}")]
    TooCloseToBoundary { modulus: f64, margin: f64 },
    #[error("LeavesTrustedRegion: Re = {re} exceeds trusted bound {bound}; enlarge tail_length")]
    LeavesTrustedRegion { re: f64, bound: f64 },
    #[error("TooFewSamples: {got} samples in the tail window, need {need}")]
    TooFewSamples { got: usize, need: usize },
    #[error("CapExceeded: no witness up to M = {m_max} (slope reached {best:.6}, threshold {threshold:.6})")]
    CapExceeded { m_max: f64, best: f64, threshold: f64 },
    #[error("StageFailed({stage}): {source}")]
    StageFailed {
        stage: usize,
        #[source]
        source: Box<Error>,
    },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors raised by validating user-supplied geometry or parameters.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::NonMonotoneU(_)
                | Error::HeightBelowOne { .. }
                | Error::NonMonotoneHeights { .. }
                | Error::LengthMismatch { .. }
                | Error::DegenerateGeometry(_)
                | Error::GeometryNotJordan(_)
                | Error::ResolutionTooLow { .. }
                | Error::Config(_)
        )
    }
}
