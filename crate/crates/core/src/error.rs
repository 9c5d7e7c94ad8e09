use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{function}: pole at {at}")]
    Pole { function: &'static str, at: String },

    #[error("{function}: |Im s| = {im} exceeds the ceiling {ceiling}")]
    CeilingExceeded {
        function: &'static str,
        im: f64,
        ceiling: f64,
    },

    #[error("{function}: argument outside the supported region ({detail})")]
    Region {
        function: &'static str,
        detail: String,
    },

    #[error("{function}: integral diverges ({detail})")]
    Divergence {
        function: &'static str,
        detail: String,
    },

    #[error("parse error on line {line} `{content}`: {reason}")]
    Parse {
        line: usize,
        content: String,
        reason: String,
    },

    #[error("missing Hecke eigenvalue for prime {p} (declared pmax {p_max})")]
    MissingPrime { p: u64, p_max: u64 },

    #[error("Hecke eigenvalue at p = {p} is {value}, outside the bound {bound}")]
    InvariantViolation { p: u64, value: f64, bound: f64 },

    #[error("composite coefficient a({m}) = {value} disagrees with multiplicativity ({expected})")]
    HeckeResidual { m: u64, value: f64, expected: f64 },

    #[error("m = {m} has a prime factor above pmax = {p_max}")]
    OutOfRange { m: u64, p_max: u64 },

    #[error("{function}: coefficients needed up to {needed}, available up to {available}")]
    InsufficientCoefficients {
        function: &'static str,
        needed: u64,
        available: u64,
    },

    #[error("{function}: precondition violated ({detail})")]
    Precondition {
        function: &'static str,
        detail: String,
    },

    #[error("{function}: quadrature did not converge (estimate {estimate:e}, error {err:e})")]
    Quadrature {
        function: &'static str,
        estimate: f64,
        err: f64,
    },

    #[error("{function}: budget exceeded ({detail})")]
    Budget {
        function: &'static str,
        detail: String,
    },

    #[error("i/o error on {path}: {detail}")]
    Io { path: String, detail: String },
}

impl Error {
    pub(crate) fn precondition(function: &'static str, detail: impl Into<String>) -> Self {
        Error::Precondition {
            function,
            detail: detail.into(),
        }
    }

    pub(crate) fn region(function: &'static str, detail: impl Into<String>) -> Self {
        Error::Region {
            function,
            detail: detail.into(),
        }
    }
}
