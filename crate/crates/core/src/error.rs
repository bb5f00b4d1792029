use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter lies outside the domain where the quantity is defined.
    #[error("parameter `{name}` = {value} is out of range: {reason}")]
    Parameter {
        name: &'static str,
        value: f64,
        reason: String,
    },

    /// Function argument outside the function's domain (e.g. log of a non-positive number).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("root bracket [{lo}, {hi}] does not change sign (f(lo) = {f_lo}, f(hi) = {f_hi})")]
    Bracket { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A caller-side contract (Hermiticity, size caps, ...) was violated.
    #[error("contract violation: {0}")]
    Contract(String),

    /// The request lies outside a theorem's or proposition's hypotheses.
    #[error("out of scope: {0}")]
    OutOfScope(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn parameter(name: &'static str, value: f64, reason: impl Into<String>) -> Self {
        Error::Parameter {
            name,
            value,
            reason: reason.into(),
        }
    }
}
