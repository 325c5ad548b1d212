use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
///
/// Every variant carries enough context to tell which module produced it;
/// [`Error::code`] gives a stable, module-qualified identifier for batch
/// front-ends.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("{module}: argument {value} outside the domain ({reason})")]
    Domain {
        module: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("{module}: pole of the gamma family at {location}")]
    Pole { module: &'static str, location: f64 },

    #[error("{module}: result overflows the floating point range at x = {value}")]
    Overflow { module: &'static str, value: f64 },

    #[error("{module}: series failed to converge after {terms} terms")]
    SeriesNonConvergence { module: &'static str, terms: usize },

    #[error("{module}: finite difference step {step} too small for r = {at}")]
    StepUnderflow {
        module: &'static str,
        step: f64,
        at: f64,
    },

    #[error("quadrature did not reach the requested tolerance: estimate {estimate}, error {achieved:e}")]
    Quadrature { estimate: f64, achieved: f64 },

    #[error("extrapolation did not converge; last extrapolants {last:?}")]
    Extrapolation { last: Vec<f64> },

    #[error("singular expansion does not match the integrand near 0: {detail}")]
    ExpansionMismatch { detail: String },

    #[error("invalid singular expansion: {detail}")]
    InvalidExpansion { detail: String },

    #[error("order {alpha} lies within {distance:e} of an integer; use the integer branch")]
    NearInteger { alpha: f64, distance: f64 },

    #[error("{formula}: diagonal arguments, use {redirect}")]
    Diagonal {
        formula: &'static str,
        redirect: &'static str,
    },

    #[error("missing derivative data of order {order}")]
    MissingDerivative { order: usize },

    #[error("points belong to different geometries")]
    GeometryMismatch,

    #[error("kernel evaluated at a coincident point")]
    Coincident,

    #[error("resonance: |gamma + sigma| = {denominator:e}")]
    Resonance { denominator: f64 },

    #[error("usage: {0}")]
    Usage(String),
}

impl Error {
    /// Stable identifier of the form `module.kind`.
    pub fn code(&self) -> String {
        match self {
            Error::Domain { module, .. } => format!("{module}.domain"),
            Error::Pole { module, .. } => format!("{module}.pole"),
            Error::Overflow { module, .. } => format!("{module}.overflow"),
            Error::SeriesNonConvergence { module, .. } => format!("{module}.precision"),
            Error::StepUnderflow { module, .. } => format!("{module}.precision"),
            Error::Quadrature { .. } => "quad.tolerance".into(),
            Error::Extrapolation { .. } => "extrapolate.divergence".into(),
            Error::ExpansionMismatch { .. } => "genquad.inconsistency".into(),
            Error::InvalidExpansion { .. } => "genquad.expansion".into(),
            Error::NearInteger { .. } => "genquad.ill_conditioned".into(),
            Error::Diagonal { .. } => "closedforms.diagonal".into(),
            Error::MissingDerivative { .. } => "genquad.derivative".into(),
            Error::GeometryMismatch => "pointgreen.type".into(),
            Error::Coincident => "pointgreen.singularity".into(),
            Error::Resonance { .. } => "pointgreen.resonance".into(),
            Error::Usage(_) => "cli.usage".into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
