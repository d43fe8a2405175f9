use alloc::string::String;
use alloc::vec::Vec;

/// Errors raised by the core pipeline operations.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CoreError {
    #[error("duplicate item id: {0}")]
    DuplicateItemId(String),
    #[error("item {id}: source text is empty")]
    EmptySource { id: String },
    #[error("duplicate label key: item {item_id}, text {text:?}")]
    DuplicateLabelKey { item_id: String, text: String },
    #[error("output references unknown item id: {0}")]
    UnknownItem(String),
    #[error("override(s) reference no existing label: {}", format_keys(.0))]
    DanglingOverrides(Vec<(String, String)>),
    #[error("missing label for output: item {item_id}, text {text:?}")]
    MissingLabel { item_id: String, text: String },
    #[error("missing prediction for pair {0}")]
    MissingPrediction(String),
    #[error("duplicate prediction for pair {0}")]
    DuplicatePrediction(String),
    #[error("prediction references unknown pair {0}")]
    UnknownPair(String),
    #[error("nothing to evaluate: empty pair set")]
    NothingToEvaluate,
    #[error("reports disagree on category structure and cannot share a table")]
    MismatchedReports,
    #[error("empty training set")]
    EmptyTrainingSet,
    #[error("non-finite feature value in training pair {index}")]
    NonFiniteFeature { index: usize },
    #[error("training diverged at epoch {epoch}: non-finite loss or gradient")]
    TrainingDiverged { epoch: usize },
    #[error("feature arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("keep={keep} out of range 1..={arity}")]
    KeepOutOfRange { keep: usize, arity: usize },
    #[error("invalid LM parameters: order must be >= 1 and k > 0")]
    InvalidLmParams,
}

fn format_keys(keys: &[(String, String)]) -> String {
    let mut out = String::new();
    for (i, (id, text)) in keys.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        out.push('(');
        out.push_str(id);
        out.push_str(", ");
        out.push_str(text);
        out.push(')');
    }
    out
}

pub type CoreResult<T> = core::result::Result<T, CoreError>;
