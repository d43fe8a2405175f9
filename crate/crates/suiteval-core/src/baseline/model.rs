use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::baseline::features::{FeatureVector, FEATURE_ARITY};
use crate::error::{CoreError, CoreResult};
use crate::math;
use crate::prediction::Choice;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub epochs: usize,
    pub learning_rate: f64,
    /// Recorded for provenance; initialization is zero so training is
    /// seed-free.
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            epochs: 500,
            learning_rate: 0.5,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainingMeta {
    pub epochs: usize,
    pub learning_rate: f64,
    pub seed: u64,
    pub final_loss: f64,
}

/// Linear pairwise comparator over standardized feature differences.
///
/// The decision value for a presented pair is `w · ((φ(A) − φ(B)) / σ)`
/// where σ is the per-dimension standard deviation of the training
/// differences. Centering constants cancel in the difference, so the
/// decision is an odd function of the feature difference and swapping the
/// arguments exactly flips every non-tie choice. The bias is fixed at zero
/// for the same reason.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairwiseModel {
    weights: Vec<f64>,
    scale: Vec<f64>,
    feature_indices: Vec<usize>,
    meta: TrainingMeta,
}

/// Mean logistic loss over standardized difference vectors,
/// `L(w) = (1/N) Σ ln(1 + exp(−w·x_i))`, and its analytic gradient.
pub fn loss_and_grad(weights: &[f64], diffs: &[Vec<f64>]) -> (f64, Vec<f64>) {
    let n = diffs.len() as f64;
    let mut loss = 0.0;
    let mut grad = alloc::vec![0.0; weights.len()];
    for x in diffs {
        let margin: f64 = weights.iter().zip(x).map(|(w, v)| w * v).sum();
        loss += math::softplus(-margin);
        let coeff = -math::sigmoid(-margin);
        for (g, v) in grad.iter_mut().zip(x) {
            *g += coeff * v;
        }
    }
    loss /= n;
    for g in &mut grad {
        *g /= n;
    }
    (loss, grad)
}

fn projected_diffs(
    pairs: &[(FeatureVector, FeatureVector)],
    indices: &[usize],
) -> CoreResult<Vec<Vec<f64>>> {
    let mut diffs = Vec::with_capacity(pairs.len());
    for (i, (good, bad)) in pairs.iter().enumerate() {
        if !good.is_finite() || !bad.is_finite() {
            return Err(CoreError::NonFiniteFeature { index: i });
        }
        diffs.push(indices.iter().map(|&j| good[j] - bad[j]).collect());
    }
    Ok(diffs)
}

fn diff_scales(diffs: &[Vec<f64>]) -> Vec<f64> {
    let dims = diffs.first().map_or(0, Vec::len);
    let n = diffs.len() as f64;
    (0..dims)
        .map(|j| {
            let mean = diffs.iter().map(|d| d[j]).sum::<f64>() / n;
            let var = diffs.iter().map(|d| (d[j] - mean) * (d[j] - mean)).sum::<f64>() / n;
            let sd = math::sqrt(var);
            if sd.is_finite() && sd > 0.0 {
                sd
            } else {
                1.0
            }
        })
        .collect()
}

fn train_on_indices(
    pairs: &[(FeatureVector, FeatureVector)],
    indices: &[usize],
    config: TrainConfig,
) -> CoreResult<PairwiseModel> {
    if pairs.is_empty() {
        return Err(CoreError::EmptyTrainingSet);
    }
    let scale = {
        let raw = projected_diffs(pairs, indices)?;
        diff_scales(&raw)
    };
    let diffs: Vec<Vec<f64>> = projected_diffs(pairs, indices)?
        .into_iter()
        .map(|d| d.iter().zip(&scale).map(|(v, s)| v / s).collect())
        .collect();

    let mut weights = alloc::vec![0.0; indices.len()];
    let mut final_loss = 0.0;
    for epoch in 0..config.epochs {
        let (loss, grad) = loss_and_grad(&weights, &diffs);
        if !loss.is_finite() || grad.iter().any(|g| !g.is_finite()) {
            return Err(CoreError::TrainingDiverged { epoch });
        }
        for (w, g) in weights.iter_mut().zip(&grad) {
            *w -= config.learning_rate * g;
        }
        final_loss = loss;
    }
    Ok(PairwiseModel {
        weights,
        scale,
        feature_indices: indices.to_vec(),
        meta: TrainingMeta {
            epochs: config.epochs,
            learning_rate: config.learning_rate,
            seed: config.seed,
            final_loss,
        },
    })
}

/// Trains on (better, worse) feature pairs over the full feature set by
/// full-batch gradient descent from zero weights.
pub fn train_pairwise(
    pairs: &[(FeatureVector, FeatureVector)],
    config: TrainConfig,
) -> CoreResult<PairwiseModel> {
    let all: Vec<usize> = (0..FEATURE_ARITY).collect();
    train_on_indices(pairs, &all, config)
}

impl PairwiseModel {
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn feature_indices(&self) -> &[usize] {
        &self.feature_indices
    }

    pub fn meta(&self) -> &TrainingMeta {
        &self.meta
    }

    fn check(&self) -> CoreResult<()> {
        if self.weights.len() != self.feature_indices.len()
            || self.weights.len() != self.scale.len()
            || self.feature_indices.iter().any(|&i| i >= FEATURE_ARITY)
        {
            return Err(CoreError::ArityMismatch {
                expected: FEATURE_ARITY,
                got: self.feature_indices.iter().copied().max().map_or(0, |m| m + 1),
            });
        }
        Ok(())
    }

    /// Per-side linear score; the decision value of a pair is the score
    /// difference, so higher is better.
    pub fn side_score(&self, features: &FeatureVector) -> CoreResult<f64> {
        self.check()?;
        Ok(self
            .feature_indices
            .iter()
            .zip(&self.weights)
            .zip(&self.scale)
            .map(|((&j, w), s)| w * features[j] / s)
            .sum())
    }

    pub fn decision_value(
        &self,
        first: &FeatureVector,
        second: &FeatureVector,
    ) -> CoreResult<f64> {
        Ok(self.side_score(first)? - self.side_score(second)?)
    }

    /// Sign of the decision value: positive picks the first argument,
    /// negative the second, exact zero is a tie.
    pub fn predict_pair(
        &self,
        first: &FeatureVector,
        second: &FeatureVector,
    ) -> CoreResult<(Choice, f64)> {
        let value = self.decision_value(first, second)?;
        let choice = if value > 0.0 {
            Choice::First
        } else if value < 0.0 {
            Choice::Second
        } else {
            Choice::Tie
        };
        Ok((choice, value))
    }

    /// Fraction of training pairs where the better side wins outright.
    pub fn training_accuracy(&self, pairs: &[(FeatureVector, FeatureVector)]) -> CoreResult<f64> {
        let mut correct = 0usize;
        for (good, bad) in pairs {
            if self.predict_pair(good, bad)?.0 == Choice::First {
                correct += 1;
            }
        }
        Ok(correct as f64 / pairs.len().max(1) as f64)
    }
}

/// Greedy recursive feature elimination: train, drop the feature with the
/// smallest absolute standardized weight (ties to the lowest index),
/// retrain, until `keep` features remain. Returns the surviving indices in
/// ascending order with the final model.
pub fn rfe(
    pairs: &[(FeatureVector, FeatureVector)],
    keep: usize,
    config: TrainConfig,
) -> CoreResult<(Vec<usize>, PairwiseModel)> {
    if keep < 1 || keep > FEATURE_ARITY {
        return Err(CoreError::KeepOutOfRange {
            keep,
            arity: FEATURE_ARITY,
        });
    }
    let mut active: Vec<usize> = (0..FEATURE_ARITY).collect();
    let mut model = train_on_indices(pairs, &active, config)?;
    while active.len() > keep {
        let weakest = model
            .weights
            .iter()
            .enumerate()
            .min_by(|(ai, aw), (bi, bw)| {
                math::abs(**aw)
                    .partial_cmp(&math::abs(**bw))
                    .unwrap_or(core::cmp::Ordering::Equal)
                    .then(ai.cmp(&bi))
            })
            .map(|(i, _)| i)
            .expect("non-empty weights");
        active.remove(weakest);
        model = train_on_indices(pairs, &active, config)?;
    }
    Ok((active, model))
}
