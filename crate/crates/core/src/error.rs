use thiserror::Error;

use crate::expr::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("network size {n} exceeds the {what} cap of {cap} (set BANLAB_MAX_N to raise it)")]
    SizeCap { n: usize, cap: usize, what: &'static str },

    #[error("automaton index {index} out of range for a network of size {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("configuration has length {found}, expected {expected}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("invalid update schedule: {0}")]
    Schedule(String),

    #[error("operation requires a periodic update schedule")]
    NotPeriodic,

    #[error("update schedule is not strict: automaton {automaton} is updated {count} times per period")]
    NotStrict { automaton: usize, count: usize },

    #[error("configuration {config} has {degree} successors, at most {max} allowed here")]
    OutDegree { config: String, degree: usize, max: usize },

    #[error("configuration {config} has no successor, but every node needs exactly one")]
    MissingSuccessor { config: String },

    #[error("observed transition {from} -> {to} flips {distance} automata, asynchronous mode allows at most one")]
    NotAsynchronous { from: String, to: String, distance: usize },

    #[error("invalid delay specification: {0}")]
    Delay(String),

    #[error("missing {kind} delay for automaton {automaton}")]
    MissingDelay { kind: &'static str, automaton: usize },

    #[error("delays tie in {config}: automata {automata:?} all take {delay} time units")]
    DelayTie { config: String, automata: Vec<usize>, delay: f64 },

    #[error("simultaneous events at t = {time}: {detail}")]
    SimultaneousEvents { time: f64, detail: String },

    #[error("distribution has dimension {found}, matrix has {expected}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("rate must lie in [0, 1], got {0}")]
    InvalidRate(f64),

    #[error("{file}:{line}: {message}")]
    Format { file: String, line: usize, message: String },
}

impl Error {
    pub(crate) fn format(file: &str, line: usize, message: impl Into<String>) -> Self {
        Error::Format {
            file: file.to_string(),
            line,
            message: message.into(),
        }
    }
}
