use thiserror::Error;

/// Failures of the density-matrix and slab solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// The steady-state null space is not one-dimensional.
    #[error("singular model: steady state is not unique (pivot vanished in column {column})")]
    SingularModel { column: usize },

    #[error("shooting integration failed at z = {z}: {reason}")]
    NonConvergent { z: f64, reason: String },

    #[error("no oscillation threshold in [{lo}, {hi}]")]
    NotFound { lo: f64, hi: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
