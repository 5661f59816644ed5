use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension must be at least 2, got {0}")]
    Dimension(usize),

    #[error("point is not on the upper hyperboloid sheet: {0}")]
    NotOnHyperboloid(String),

    #[error("lorentz form {0} is below 1 beyond round-off")]
    LorentzBelowOne(f64),

    #[error("log-gamma pole at z = {0}")]
    Pole(f64),

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unsupported spectral parameter: {0}")]
    SpectralParameter(String),

    #[error("truncation tail {tail:.3e} exceeds allowance {allowance:.3e} ({side})")]
    TailTooLarge {
        side: &'static str,
        tail: f64,
        allowance: f64,
    },

    #[error("empty {0}")]
    Empty(&'static str),

    #[error("domain violation: {0}")]
    Domain(String),

    #[error("division by zero: {0}")]
    DivisionByZero(&'static str),

    #[error("grid mismatch: {0}")]
    GridMismatch(&'static str),

    #[error("config error at `{key}`: {msg}")]
    Config { key: String, msg: String },

    #[error("numerical failure at {0}")]
    Numerical(Box<NumericalFailure>),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

/// Parameters at which a computation failed, as displayed in reports.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericalFailure {
    pub n: usize,
    pub alpha: String,
    pub p: String,
    pub t: String,
    pub lambda: String,
    pub msg: String,
}

impl std::fmt::Display for NumericalFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "(n={}, alpha={}, p={}, t={}, lambda={}): {}",
            self.n, self.alpha, self.p, self.t, self.lambda, self.msg
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
