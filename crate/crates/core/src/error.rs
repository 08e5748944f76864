use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid weight {weight} for alter {alter}")]
    InvalidWeight { alter: String, weight: f64 },

    #[error("out-of-order timestamp for {subject}: {ts} < {last}")]
    OutOfOrder { subject: String, ts: i64, last: i64 },

    #[error("{0}")]
    Validation(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("event {index}: {source}")]
    Replay {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("untagged alters in network: {}", .0.join(", "))]
    Untagged(Vec<String>),

    #[error("empty input")]
    EmptyInput,

    #[error("snapshot: {0}")]
    Snapshot(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    /// Process exit code: 2 for I/O failures, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io(_) => 2,
            Error::Replay { source, .. } => source.exit_code(),
            _ => 1,
        }
    }
}
