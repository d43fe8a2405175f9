use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::ops::Index;

use serde::{Deserialize, Serialize};

use crate::baseline::lm::NGramLM;
use crate::math;

pub const FEATURE_ARITY: usize = 10;

/// Names of the feature dimensions, in vector order. The set is
/// contract-bearing: model files record a feature-set version and adapters
/// refuse a mismatch.
pub const FEATURE_NAMES: [&str; FEATURE_ARITY] = [
    "source_token_count",
    "target_token_count",
    "length_ratio",
    "target_punctuation_count",
    "punctuation_count_abs_diff",
    "target_oov_rate",
    "target_lm_mean_logprob",
    "target_lm_perplexity",
    "digit_count_abs_diff",
    "uppercase_token_abs_diff",
];

pub const FEATURE_SET_VERSION: &str = "surface-lm-v1";

/// Fixed-arity feature values for one (source, translation) pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector(pub [f64; FEATURE_ARITY]);

impl FeatureVector {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }
}

impl Index<usize> for FeatureVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// Common punctuation beyond ASCII, enough for European-language MT output.
const EXTRA_PUNCT: &[char] = &[
    '\u{2018}', '\u{2019}', '\u{201a}', '\u{201c}', '\u{201d}', '\u{201e}', '\u{ab}', '\u{bb}',
    '\u{2013}', '\u{2014}', '\u{2026}', '\u{bf}', '\u{a1}',
];

fn is_punct_char(c: char) -> bool {
    c.is_ascii_punctuation() || EXTRA_PUNCT.contains(&c)
}

fn is_punct_token(token: &str) -> bool {
    !token.is_empty() && token.chars().all(is_punct_char)
}

/// Unicode-whitespace split, then leading/trailing punctuation characters
/// peel off as standalone tokens. Feature values depend on this tokenizer,
/// so it stays fixed.
pub fn tokenize(text: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    for chunk in text.split_whitespace() {
        let chars: Vec<char> = chunk.chars().collect();
        let mut start = 0;
        let mut end = chars.len();
        while start < end && is_punct_char(chars[start]) {
            start += 1;
        }
        while end > start && is_punct_char(chars[end - 1]) {
            end -= 1;
        }
        for &c in &chars[..start] {
            tokens.push(c.to_string());
        }
        if start < end {
            tokens.push(chars[start..end].iter().collect());
        }
        for &c in &chars[end..] {
            tokens.push(c.to_string());
        }
    }
    tokens
}

fn digit_count(text: &str) -> usize {
    text.chars().filter(|c| c.is_ascii_digit()).count()
}

fn uppercase_token_count(tokens: &[String]) -> usize {
    tokens
        .iter()
        .filter(|t| t.chars().next().is_some_and(|c| c.is_uppercase()))
        .count()
}

/// The ten documented surface and LM features over a sentence pair. Empty
/// inputs yield zero counts; the length-ratio denominator clamps at one.
pub fn extract_features(source: &str, target: &str, lm: &NGramLM) -> FeatureVector {
    let src = tokenize(source);
    let tgt = tokenize(target);

    let src_count = src.len() as f64;
    let tgt_count = tgt.len() as f64;
    let length_ratio = tgt_count / src_count.max(1.0);

    let src_punct = src.iter().filter(|t| is_punct_token(t)).count() as f64;
    let tgt_punct = tgt.iter().filter(|t| is_punct_token(t)).count() as f64;

    let oov_rate = if tgt.is_empty() {
        0.0
    } else {
        tgt.iter().filter(|t| !lm.contains(t)).count() as f64 / tgt_count
    };

    let logprob = lm.sentence_logprob(&tgt);
    let mean_logprob = logprob / (tgt_count + 1.0);
    let perplexity = math::exp(-mean_logprob);

    let digit_diff = math::abs(digit_count(target) as f64 - digit_count(source) as f64);
    let upper_diff = math::abs(
        uppercase_token_count(&tgt) as f64 - uppercase_token_count(&src) as f64,
    );

    FeatureVector([
        src_count,
        tgt_count,
        length_ratio,
        tgt_punct,
        math::abs(tgt_punct - src_punct),
        oov_rate,
        mean_logprob,
        perplexity,
        digit_diff,
        upper_diff,
    ])
}
