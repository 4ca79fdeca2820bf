use thiserror::Error;

/// Errors raised while building layouts, circuits, or running simulations.
#[derive(Debug, Error)]
pub enum Error {
    /// A register, enumeration, or state vector would exceed a configured limit.
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    /// Gate or circuit wires are out of range or overlap where they must not.
    #[error("invalid wiring: {0}")]
    Wiring(String),
    /// A numeric parameter is outside its accepted domain.
    #[error("invalid parameter: {0}")]
    Parameter(String),
    /// An instance description violates the problem model.
    #[error("invalid instance: {0}")]
    Validation(String),
    /// Registers are too narrow for the requested arithmetic.
    #[error("invalid layout: {0}")]
    Layout(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn is_capacity(&self) -> bool {
        matches!(self, Error::Capacity(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
