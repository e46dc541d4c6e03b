use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter lies outside the domain the model is defined on.
    #[error("parameter domain error: {0}")]
    ParameterDomain(String),

    #[error("matrix is not Hermitian (max |A - A^H| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("decoherence factor {name} has magnitude {magnitude} > 1")]
    FactorOutOfRange { name: &'static str, magnitude: f64 },

    #[error("negativity input magnitude {0} outside [0, 1]")]
    MagnitudeOutOfRange(f64),

    /// Objective is constant over the scanned range; no maximiser is meaningful.
    #[error("flat objective over alpha range (spread {spread:e})")]
    FlatObjective { spread: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::ParameterDomain(msg.into())
}
