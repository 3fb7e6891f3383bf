use std::fmt;

use thiserror::Error;

/// Result alias used throughout the crate.
pub type Result<T, E = EvalError> = std::result::Result<T, E>;

/// Coarse error category. Drives the CLI exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed or unreadable input data.
    Parse,
    /// Gold and prediction sets do not line up, or nothing was left to evaluate.
    Alignment,
    /// Invalid flags, schemas or weight schemes.
    Configuration,
}

impl ErrorKind {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorKind::Parse => 2,
            ErrorKind::Alignment => 3,
            ErrorKind::Configuration => 4,
        }
    }
}

/// Id-level difference between a gold set and a prediction set.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IdDiff {
    /// Gold ids absent from the predictions.
    pub missing_in_pred: Vec<String>,
    /// Prediction ids absent from the gold set.
    pub extra_in_pred: Vec<String>,
}

const MAX_LISTED_IDS: usize = 10;

fn write_ids(f: &mut fmt::Formatter<'_>, ids: &[String]) -> fmt::Result {
    let shown: Vec<&str> = ids.iter().take(MAX_LISTED_IDS).map(String::as_str).collect();
    write!(f, "[{}", shown.join(", "))?;
    if ids.len() > MAX_LISTED_IDS {
        write!(f, ", ... {} more", ids.len() - MAX_LISTED_IDS)?;
    }
    write!(f, "]")
}

impl fmt::Display for IdDiff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} gold ids missing from predictions ", self.missing_in_pred.len())?;
        write_ids(f, &self.missing_in_pred)?;
        write!(f, "; {} prediction ids not in gold ", self.extra_in_pred.len())?;
        write_ids(f, &self.extra_in_pred)
    }
}

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("{source_name}:{line}: {message}")]
    Parse {
        source_name: String,
        line: usize,
        message: String,
    },

    #[error("{source_name}: duplicate instance id `{id}`")]
    DuplicateId { source_name: String, id: String },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("{0}")]
    Io(#[from] std::io::Error),

    #[error("label `{label}` ({location}) is not in the schema [{classes}]")]
    UnknownLabel {
        label: String,
        location: String,
        classes: String,
    },

    #[error("gold and prediction lists differ in length ({gold} vs {pred})")]
    LengthMismatch { gold: usize, pred: usize },

    #[error("id sets differ: {0}")]
    IdMismatch(IdDiff),

    #[error("class `{class}` has no gold instances (use lenient mode to score it as zero recall)")]
    AbsentClass { class: String },

    #[error("no system could be evaluated")]
    EmptyEvaluation,

    #[error("configuration error: {0}")]
    Config(String),
}

impl EvalError {
    pub fn kind(&self) -> ErrorKind {
        match self {
            EvalError::Parse { .. }
            | EvalError::DuplicateId { .. }
            | EvalError::Degenerate(_)
            | EvalError::Io(_)
            | EvalError::UnknownLabel { .. } => ErrorKind::Parse,
            EvalError::LengthMismatch { .. } | EvalError::IdMismatch(_) | EvalError::EmptyEvaluation => {
                ErrorKind::Alignment
            }
            EvalError::AbsentClass { .. } | EvalError::Config(_) => ErrorKind::Configuration,
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.kind().exit_code()
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        EvalError::Config(msg.into())
    }
}
