use thiserror::Error;

/// Errors raised by the tensor, linear-algebra and equivalence routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument falls outside the operation's domain (bad index, mode, tolerance, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Operand shapes do not conform.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// A dense kernel failed to converge or produced non-finite output.
    #[error("numeric failure: {0}")]
    Numeric(String),

    /// A matrix failed the rank-one realignment test for `party` (0-based).
    #[error("not a tensor product: party {party} has realignment gap {gap:e}")]
    NotKronecker { party: usize, gap: f64 },

    /// Input data does not describe a valid quantum state.
    #[error("not a state: {0}")]
    NotAState(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn shape<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Shape(msg.into()))
}
