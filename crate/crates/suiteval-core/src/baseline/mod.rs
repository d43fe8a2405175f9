//! A self-contained comparative QE baseline: surface and language-model
//! features over (source, translation) pairs, a pairwise logistic model
//! trained by full-batch gradient descent, and greedy recursive feature
//! elimination. It exists so the harness runs end-to-end without any
//! external QE system.

pub mod features;
pub mod lm;
pub mod model;

pub use features::{extract_features, tokenize, FeatureVector, FEATURE_ARITY, FEATURE_NAMES};
pub use lm::{train_lm, train_lm_min_count, NGramLM, Token};
pub use model::{loss_and_grad, rfe, train_pairwise, PairwiseModel, TrainConfig, TrainingMeta};
