use thiserror::Error;

/// Errors raised by grid construction, transforms and the observable builders.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("grid coverage: captured norm {captured:.6} below required {required:.6}")]
    GridCoverage { captured: f64, required: f64 },

    #[error("degenerate state: amplitude vector has zero norm")]
    DegenerateState,

    #[error("incompatible grid: {0}")]
    IncompatibleGrid(String),

    #[error("time step {dt} violates the sampling limit {limit} (pi / E_max)")]
    Nyquist { dt: f64, limit: f64 },

    #[error("window mass {mass:.9} below required {required}")]
    WindowMass { mass: f64, required: f64 },

    #[error("kernel is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("kernel is not Hermitian (max asymmetry {asymmetry:e})")]
    NotHermitian { asymmetry: f64 },

    #[error("state amplitudes are not real (max imaginary part {max_imag:e})")]
    NonRealState { max_imag: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
