//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by graph construction, simulation, and experiment drivers.
#[derive(Debug, Error)]
pub enum Error {
    /// Rejected generation or run parameters (e.g. odd `n * degree`).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A graph violated a structural invariant (range, ordering, weights).
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    /// Operands built for different qubit counts.
    #[error("dimension mismatch: state on {state} qubits, operand on {operand}")]
    DimensionMismatch { state: usize, operand: usize },

    /// A mixer whose exponential has no exact closed form in this simulator.
    #[error("unsupported mixer structure: {0}")]
    UnsupportedMixer(String),

    /// The objective returned NaN or infinity during minimization.
    #[error("objective returned a non-finite value at {point:?}")]
    NonFiniteObjective { point: Vec<f64> },

    /// Normalizing an energy error requires a strictly negative ground energy.
    #[error("ground energy must be negative, got {0}")]
    DegenerateGroundEnergy(f64),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
