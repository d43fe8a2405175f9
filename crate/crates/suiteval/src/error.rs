use std::path::PathBuf;

use suiteval_core::CoreError;

/// Process exit codes: 0 success, 1 validation or data error, 2 adapter or
/// external-process failure.
pub const EXIT_OK: i32 = 0;
pub const EXIT_DATA: i32 = 1;
pub const EXIT_ADAPTER: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("item {item_id}: {which} rule {pattern:?} does not compile: {message}")]
    BadRule {
        item_id: String,
        which: &'static str,
        pattern: String,
        message: String,
    },
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("missing score for pair {pair_id} side {side}")]
    MissingScore { pair_id: String, side: char },
    #[error("duplicate score for pair {pair_id} side {side}")]
    DuplicateScore { pair_id: String, side: char },
    #[error("adapter reply for pair {0} missing")]
    MissingAnswer(String),
    #[error("adapter reply mixes choice answers and score answers in one file")]
    MixedAnswerShapes,
    #[error("external command {command:?} failed: {message}")]
    External { command: String, message: String },
    #[error("external command {command:?} timed out after {seconds} s")]
    Timeout { command: String, seconds: u64 },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("manifest mismatch for {path}: recorded {recorded}, current {current}")]
    ManifestMismatch {
        path: PathBuf,
        recorded: String,
        current: String,
    },
    #[error("missing input file: {0}")]
    MissingInput(PathBuf),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl HarnessError {
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::External { .. }
            | HarnessError::Timeout { .. }
            | HarnessError::MissingAnswer(_)
            | HarnessError::MixedAnswerShapes => EXIT_ADAPTER,
            _ => EXIT_DATA,
        }
    }
}

pub type HarnessResult<T> = Result<T, HarnessError>;

pub(crate) fn io_err(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> HarnessError {
    let path = path.into();
    move |source| HarnessError::Io { path, source }
}
