use thiserror::Error;

/// Errors produced by the simulator.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("quadrature did not converge: estimated error {estimate:.3e} exceeds tolerance {tolerance:.3e}")]
    NonConvergence { estimate: f64, tolerance: f64 },

    #[error("disk (offset {offset} m, radius {radius} m) extends past profile coverage {coverage} m")]
    Coverage {
        offset: f64,
        radius: f64,
        coverage: f64,
    },

    #[error("kappa = {kappa} exceeds 1 beyond tolerance; collected power is inconsistent")]
    Consistency { kappa: f64 },

    #[error("covariance matrix is not physical: smallest symplectic eigenvalue {min_nu}")]
    Unphysical { min_nu: f64 },

    #[error("degenerate predictor geometry: integration limit {limit} <= r_b^2 = {rb2}")]
    DegenerateGeometry { limit: f64, rb2: f64 },

    #[error("profile record: {0}")]
    Format(String),

    #[error("configuration: {0}")]
    Config(String),

    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    /// True for errors caused by the request itself rather than the computation.
    pub fn is_usage(&self) -> bool {
        matches!(self, Error::InvalidParameter { .. } | Error::Config(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
