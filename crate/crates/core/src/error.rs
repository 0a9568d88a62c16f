use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("empty E-sequence")]
    EmptySequence,

    #[error("invalid interval ({label}, {begin}, {finish}): begin must be before finish")]
    InvalidInterval {
        label: String,
        begin: u64,
        finish: u64,
    },

    #[error("empty event label")]
    EmptyLabel,

    #[error("duplicate interval ({label}, {begin}, {finish}) in sequence {id}")]
    DuplicateInterval {
        id: u64,
        label: String,
        begin: u64,
        finish: u64,
    },

    #[error("duplicate sequence id {0}")]
    DuplicateSequenceId(u64),

    #[error("sequence id must be positive")]
    ZeroSequenceId,

    #[error("C-eventset duration must be positive")]
    ZeroDuration,

    #[error("invalid window [{0}, {1}): start must be before end")]
    InvalidWindow(u64, u64),

    #[error("no external utility for label `{0}`")]
    UnknownLabel(String),

    #[error("external utility of `{label}` must be a nonnegative number, got {value}")]
    InvalidUtility { label: String, value: f64 },

    #[error("duplicate utility entry for label `{0}`")]
    DuplicateLabel(String),

    #[error("L-sequences cannot contain an empty coincidence")]
    EmptyCoincidence,

    #[error("length budget must be at least 1, got {0}")]
    InvalidLength(usize),

    #[error("pattern length {len} exceeds the length budget {k}")]
    PatternTooLong { len: usize, k: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{0}")]
    Io(String),

    #[error("instance too large for oracle ({candidates} candidates, budget {budget})")]
    OracleBudget { candidates: u128, budget: u128 },
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
