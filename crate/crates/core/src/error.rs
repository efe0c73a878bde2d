use thiserror::Error;

/// Errors raised by the monoid toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Atomicity of the requested monoid is not covered by any known closed form.
    #[error("atomicity unknown: {0}")]
    AtomicityUnknown(String),

    /// The growth inequality of the strongly primary construction fails.
    #[error("construction inequality fails at n = {n}: {lhs} is not greater than {rhs}")]
    Construction { n: u64, lhs: String, rhs: String },

    /// A sequence scan ran past the caller's cap.
    #[error("scan cap of {cap} terms exceeded without stabilization")]
    ScanCap { cap: usize },

    /// Malformed textual input.
    #[error("parse error: {0}")]
    Parse(String),

    /// The requested computation exceeds the sizes this toolkit handles.
    #[error("computation too large: {0}")]
    TooLarge(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
