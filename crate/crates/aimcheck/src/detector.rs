//! The anti-cheat classifier: feature normalization plus a 51 -> 512 -> 512
//! -> 2 ReLU network trained with inverse-prior weighted cross-entropy and
//! an L2 penalty.

use rand::{seq::SliceRandom, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::features::{apply_normalizer, fit_normalizer};
use crate::nn::{
    backward, forward, forward_one, inverse_prior_weights, l2_penalty, optimizer_step,
    weighted_cross_entropy, Activation, Mat, MlpModel, OptimizerKind, OptimizerState,
};
use crate::types::{FeatureVector, Normalizer};
use crate::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DetectorConfig {
    pub learning_rate: f64,
    pub l2_weight: f64,
    pub epochs: usize,
    pub batch_size: usize,
    /// Fraction of the shuffled training vectors held out for validation.
    pub validation_fraction: f64,
    pub hidden: usize,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        DetectorConfig {
            learning_rate: 0.001,
            l2_weight: 0.01,
            epochs: 50,
            batch_size: 64,
            validation_fraction: 0.1,
            hidden: 512,
        }
    }
}

/// Trained detector: the normalizer fit on training data only, the network,
/// and a note of what produced the training set.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectorModel {
    pub normalizer: Normalizer,
    pub net: MlpModel,
    /// Free-form provenance tag, e.g. "oracle:strong".
    pub training_manifest: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DetectorTrainLog {
    pub train_loss: Vec<f64>,
    pub validation_loss: Vec<f64>,
    pub class_weights: [f64; 2],
}

/// Trains the detector. Requires both labels in the training data; the
/// normalizer and class priors derive from the training split only.
pub fn train_detector(
    vectors: &[FeatureVector],
    config: &DetectorConfig,
    seed: u64,
    manifest: &str,
) -> Result<(DetectorModel, DetectorTrainLog)> {
    let n_pos = vectors.iter().filter(|v| v.label == 1).count();
    if n_pos == 0 || n_pos == vectors.len() {
        return Err(Error::SingleClass);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..vectors.len()).collect();
    order.shuffle(&mut rng);
    let n_val = ((vectors.len() as f64 * config.validation_fraction) as usize).max(1);
    let (train_idx, val_idx) = order.split_at(vectors.len() - n_val);

    let train_vecs: Vec<&FeatureVector> = train_idx.iter().map(|&i| &vectors[i]).collect();
    let owned: Vec<FeatureVector> = train_vecs.iter().map(|v| (*v).clone()).collect();
    let normalizer = fit_normalizer(&owned)?;

    let labels_train: Vec<u8> = train_vecs.iter().map(|v| v.label).collect();
    let class_weights = inverse_prior_weights(&labels_train);
    if class_weights[0] <= 0.0 || class_weights[1] <= 0.0 {
        return Err(Error::SingleClass);
    }

    let inputs_train: Vec<Vec<f64>> = train_vecs
        .iter()
        .map(|v| apply_normalizer(&normalizer, v))
        .collect();
    let inputs_val: Vec<Vec<f64>> = val_idx
        .iter()
        .map(|&i| apply_normalizer(&normalizer, &vectors[i]))
        .collect();
    let labels_val: Vec<u8> = val_idx.iter().map(|&i| vectors[i].label).collect();

    let mut net = MlpModel::new(
        inputs_train[0].len(),
        &[
            (config.hidden, Activation::Relu),
            (config.hidden, Activation::Relu),
            (2, Activation::Linear),
        ],
        &mut rng,
    );
    let mut opt = OptimizerState::new(OptimizerKind::adam(config.learning_rate), &net);

    let mut log = DetectorTrainLog {
        train_loss: Vec::with_capacity(config.epochs),
        validation_loss: Vec::with_capacity(config.epochs),
        class_weights,
    };

    let mut batch_order: Vec<usize> = (0..inputs_train.len()).collect();
    for _epoch in 0..config.epochs {
        batch_order.shuffle(&mut rng);
        let mut epoch_loss = 0.0;
        let mut batches = 0.0;
        for chunk in batch_order.chunks(config.batch_size) {
            let rows: Vec<Vec<f64>> = chunk.iter().map(|&i| inputs_train[i].clone()).collect();
            let labels: Vec<u8> = chunk.iter().map(|&i| labels_train[i]).collect();
            let x = Mat::from_rows(&rows);
            let cache = forward(&net, &x);
            let (loss, d_logits) = weighted_cross_entropy(cache.output(), &labels, class_weights);
            let (mut grads, _) = backward(&net, &cache, &d_logits);
            let penalty = l2_penalty(&net, &mut grads, config.l2_weight);
            optimizer_step(&mut opt, &mut net, &grads);
            epoch_loss += loss + penalty;
            batches += 1.0;
        }
        log.train_loss.push(epoch_loss / batches);
        let x_val = Mat::from_rows(&inputs_val);
        let cache = forward(&net, &x_val);
        let (val_loss, _) = weighted_cross_entropy(cache.output(), &labels_val, class_weights);
        log.validation_loss.push(val_loss);
    }

    Ok((
        DetectorModel {
            normalizer,
            net,
            training_manifest: manifest.to_string(),
        },
        log,
    ))
}

/// Cheat score of a raw vector: logit(cheat) - logit(bona fide) after
/// normalization. Positive means the argmax class is cheat; any strictly
/// monotone transform leaves the threshold metrics unchanged.
pub fn score(model: &DetectorModel, vector: &FeatureVector) -> f64 {
    let input = apply_normalizer(&model.normalizer, vector);
    let logits = forward_one(&model.net, &input);
    logits[1] - logits[0]
}

/// Hard prediction from the score sign.
pub fn predict(model: &DetectorModel, vector: &FeatureVector) -> u8 {
    u8::from(score(model, vector) > 0.0)
}
