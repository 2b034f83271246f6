//! Error and result types shared across the library.

/// Library-wide error type.
///
/// Numeric routines distinguish shape problems (`Dimension`), input values
/// outside an operation's mathematical domain (`Domain`), configuration that
/// cannot be resolved into a runnable problem (`Config`), and iterative
/// solvers that exhaust their iteration budget or miss their tolerance
/// (`Convergence`).
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Two inputs that must agree in length do not.
    #[error("dimension mismatch for {what}: expected {expected}, got {got}")]
    Dimension {
        /// Which input failed the check.
        what: &'static str,
        /// Required length.
        expected: usize,
        /// Observed length.
        got: usize,
    },
    /// An input value lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A scenario or parameter set is structurally invalid.
    #[error("invalid configuration: {0}")]
    Config(String),
    /// An iterative solver failed to reach its tolerance.
    #[error("solver did not converge: {0}")]
    Convergence(String),
}

impl Error {
    /// Shorthand for a [`Error::Domain`] with a formatted message.
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Shorthand for a [`Error::Config`] with a formatted message.
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Checks that a slice has the expected length.
pub(crate) fn check_len(what: &'static str, slice: &[f64], expected: usize) -> Result<()> {
    if slice.len() != expected {
        return Err(Error::Dimension {
            what,
            expected,
            got: slice.len(),
        });
    }
    Ok(())
}

/// Checks that every entry of a slice is strictly positive and finite.
pub(crate) fn check_positive(what: &'static str, slice: &[f64]) -> Result<()> {
    for (i, &v) in slice.iter().enumerate() {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::domain(format!(
                "{what}[{i}] must be positive and finite, got {v}"
            )));
        }
    }
    Ok(())
}
