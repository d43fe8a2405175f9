use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, CoreResult};
use crate::math;

/// Token alphabet of the language model. `Bos` only ever appears in
/// contexts; `Unk` stands for any word outside the vocabulary; `Eos` is
/// predicted once per sentence.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Token {
    Bos,
    Eos,
    Unk,
    Word(String),
}

/// Add-k smoothed n-gram model.
///
/// Conditional probabilities follow
/// `P(v|c) = (count(c·v) + k) / (count(c) + k·|V'|)` with
/// `V' = vocabulary ∪ {UNK, EOS}`. Counts are collected over BOS-padded
/// sentences at word positions; the end-of-sentence event draws its mass
/// from smoothing alone. With k > 0 every probability is strictly positive
/// and each context's distribution over V' sums to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NGramLM {
    order: usize,
    k: f64,
    vocab: BTreeSet<String>,
    #[serde(with = "count_map")]
    ngram_counts: BTreeMap<Vec<Token>, u64>,
    #[serde(with = "count_map")]
    context_counts: BTreeMap<Vec<Token>, u64>,
}

/// BTreeMap keys here are token sequences, which JSON maps cannot carry;
/// serialize as an entry list instead.
mod count_map {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        map: &BTreeMap<Vec<Token>, u64>,
        ser: S,
    ) -> Result<S::Ok, S::Error> {
        let entries: Vec<(&Vec<Token>, &u64)> = map.iter().collect();
        serde::Serialize::serialize(&entries, ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        de: D,
    ) -> Result<BTreeMap<Vec<Token>, u64>, D::Error> {
        let entries: Vec<(Vec<Token>, u64)> = serde::Deserialize::deserialize(de)?;
        Ok(entries.into_iter().collect())
    }
}

/// Trains with vocabulary = every corpus token (min_count 1).
pub fn train_lm(corpus: &[Vec<String>], n: usize, k: f64) -> CoreResult<NGramLM> {
    train_lm_min_count(corpus, n, k, 1)
}

/// Trains an order-n model; tokens with corpus frequency below `min_count`
/// fall out of the vocabulary and count as UNK. An empty corpus yields a
/// valid model whose whole mass sits on smoothing.
pub fn train_lm_min_count(
    corpus: &[Vec<String>],
    n: usize,
    k: f64,
    min_count: u64,
) -> CoreResult<NGramLM> {
    if n < 1 || !(k > 0.0) || !k.is_finite() {
        return Err(CoreError::InvalidLmParams);
    }
    let mut freq: BTreeMap<&str, u64> = BTreeMap::new();
    for sentence in corpus {
        for token in sentence {
            *freq.entry(token.as_str()).or_default() += 1;
        }
    }
    let vocab: BTreeSet<String> = freq
        .into_iter()
        .filter(|&(_, c)| c >= min_count)
        .map(|(t, _)| t.to_string())
        .collect();

    let mut lm = NGramLM {
        order: n,
        k,
        vocab,
        ngram_counts: BTreeMap::new(),
        context_counts: BTreeMap::new(),
    };
    for sentence in corpus {
        let mapped: Vec<Token> = sentence.iter().map(|t| lm.map_word(t)).collect();
        let mut padded: Vec<Token> = alloc::vec![Token::Bos; n - 1];
        padded.extend(mapped.iter().cloned());
        for i in 0..mapped.len() {
            let context = padded[i..i + n - 1].to_vec();
            let mut ngram = context.clone();
            ngram.push(mapped[i].clone());
            *lm.ngram_counts.entry(ngram).or_default() += 1;
            *lm.context_counts.entry(context).or_default() += 1;
        }
    }
    Ok(lm)
}

impl NGramLM {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn vocab(&self) -> &BTreeSet<String> {
        &self.vocab
    }

    pub fn contains(&self, word: &str) -> bool {
        self.vocab.contains(word)
    }

    /// |V'|: vocabulary plus UNK and EOS. BOS is never predicted.
    pub fn predicted_vocab_size(&self) -> usize {
        self.vocab.len() + 2
    }

    fn map_word(&self, word: &str) -> Token {
        if self.vocab.contains(word) {
            Token::Word(word.to_string())
        } else {
            Token::Unk
        }
    }

    /// Truncate/pad a context to exactly order−1 tokens, BOS on the left.
    fn normalize_context(&self, context: &[Token]) -> Vec<Token> {
        let want = self.order - 1;
        let mut out: Vec<Token> = Vec::with_capacity(want);
        if context.len() >= want {
            out.extend_from_slice(&context[context.len() - want..]);
        } else {
            out.extend(core::iter::repeat_n(Token::Bos, want - context.len()));
            out.extend_from_slice(context);
        }
        // Out-of-vocabulary words in the context collapse to UNK too.
        for t in &mut out {
            if let Token::Word(w) = t {
                if !self.vocab.contains(w.as_str()) {
                    *t = Token::Unk;
                }
            }
        }
        out
    }

    /// P(next | context). `next` must be in V'; asking for BOS yields 0.
    pub fn prob(&self, context: &[Token], next: &Token) -> f64 {
        match next {
            Token::Bos => return 0.0,
            Token::Word(w) if !self.vocab.contains(w.as_str()) => {
                return self.prob(context, &Token::Unk)
            }
            _ => {}
        }
        let context = self.normalize_context(context);
        let ctx_count = *self.context_counts.get(&context).unwrap_or(&0) as f64;
        let mut ngram = context;
        ngram.push(next.clone());
        let count = *self.ngram_counts.get(&ngram).unwrap_or(&0) as f64;
        (count + self.k) / (ctx_count + self.k * self.predicted_vocab_size() as f64)
    }

    /// Natural-log probability of a tokenized sentence including the EOS
    /// event. OOV tokens map to UNK. The empty sentence reduces to
    /// `ln P(EOS | BOS context)`.
    pub fn sentence_logprob<S: AsRef<str>>(&self, tokens: &[S]) -> f64 {
        let mapped: Vec<Token> = tokens.iter().map(|t| self.map_word(t.as_ref())).collect();
        let mut padded: Vec<Token> = alloc::vec![Token::Bos; self.order - 1];
        padded.extend(mapped.iter().cloned());
        let mut total = 0.0;
        for i in 0..mapped.len() {
            total += math::ln(self.prob(&padded[i..i + self.order - 1], &mapped[i]));
        }
        total += math::ln(self.prob(&padded[mapped.len()..], &Token::Eos));
        total
    }
}
