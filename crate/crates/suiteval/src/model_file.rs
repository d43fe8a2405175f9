//! Versioned JSON container for the built-in comparator: the pairwise
//! model, the n-gram LM it extracts features against, and integrity
//! metadata (feature-set version tag, LM vocabulary hash).

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use suiteval_core::baseline::features::FEATURE_SET_VERSION;
use suiteval_core::baseline::{NGramLM, PairwiseModel};

use crate::error::{io_err, HarnessError, HarnessResult};
use crate::util::{atomic_write, sha256_hex};

pub const MODEL_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelFile {
    pub schema_version: u32,
    pub feature_set_version: String,
    pub lm_vocab_sha256: String,
    pub lm: NGramLM,
    pub model: PairwiseModel,
}

pub fn lm_vocab_hash(lm: &NGramLM) -> String {
    let joined: Vec<&str> = lm.vocab().iter().map(String::as_str).collect();
    sha256_hex(joined.join("\n").as_bytes())
}

impl ModelFile {
    pub fn new(lm: NGramLM, model: PairwiseModel) -> Self {
        Self {
            schema_version: MODEL_SCHEMA_VERSION,
            feature_set_version: FEATURE_SET_VERSION.to_string(),
            lm_vocab_sha256: lm_vocab_hash(&lm),
            lm,
            model,
        }
    }
}

pub fn save_model(path: &Path, model: &ModelFile) -> HarnessResult<()> {
    let mut json = serde_json::to_string_pretty(model)?;
    json.push('\n');
    atomic_write(path, &json)
}

pub fn load_model(path: &Path) -> HarnessResult<ModelFile> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let file: ModelFile = serde_json::from_str(&text)?;
    if file.schema_version != MODEL_SCHEMA_VERSION {
        return Err(HarnessError::Config(format!(
            "unsupported model schema version {}",
            file.schema_version
        )));
    }
    if file.feature_set_version != FEATURE_SET_VERSION {
        return Err(HarnessError::Config(format!(
            "model built for feature set {:?}, this build uses {FEATURE_SET_VERSION:?}",
            file.feature_set_version
        )));
    }
    if file.lm_vocab_sha256 != lm_vocab_hash(&file.lm) {
        return Err(HarnessError::Config(
            "model file LM vocabulary hash does not match its contents".into(),
        ));
    }
    Ok(file)
}
