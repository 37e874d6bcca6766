//! Error type shared across the simulation library.

use thiserror::Error;

#[derive(Error, Debug)]
pub enum SimError {
    /// A physical or numerical precondition was violated by the caller.
    #[error("domain error: {0}")]
    Domain(String),

    /// Configuration file or override problem.
    #[error("config error: {0}")]
    Config(String),

    /// Mesh construction or element geometry problem.
    #[error("mesh error: {0}")]
    Mesh(String),

    /// Linear or nonlinear solver failure.
    #[error("solver error: {0}")]
    Solver(String),

    /// Internal-variable update violated an invariant it should enforce.
    #[error("internal error (bug): {0}")]
    Internal(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl SimError {
    pub fn domain(msg: impl Into<String>) -> Self {
        SimError::Domain(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        SimError::Config(msg.into())
    }

    pub fn mesh(msg: impl Into<String>) -> Self {
        SimError::Mesh(msg.into())
    }

    pub fn solver(msg: impl Into<String>) -> Self {
        SimError::Solver(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        SimError::Internal(msg.into())
    }

    /// Process exit code for the CLI: 2 config, 3 solver, 4 i/o, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            SimError::Config(_) | SimError::Domain(_) => 2,
            SimError::Solver(_) => 3,
            SimError::Io(_) => 4,
            _ => 1,
        }
    }
}
