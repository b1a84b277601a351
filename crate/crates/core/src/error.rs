use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Inputs violate an operation's preconditions (sizes, containment, ranges).
    #[error("parameter error: {0}")]
    Parameter(String),

    /// A caller-side contract was broken, e.g. asking whether a family that
    /// is not r-wise t-intersecting is maximal.
    #[error("contract error: {0}")]
    Contract(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// The search refused to run (or stopped) because it would exceed its budget.
    #[error("refused: {reason} (estimate {estimate}, budget {budget})")]
    Refused {
        reason: String,
        estimate: u64,
        budget: u64,
    },

    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parameter(msg.into()))
}
