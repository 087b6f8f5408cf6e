//! Minimal dense-network engine.
//!
//! Fixed MLP graphs only: affine layers with ELU / ReLU / linear
//! activations, exact reverse-mode gradients, Adam and RMSprop updates,
//! weight clipping and a binary checkpoint format. All arithmetic is f64 so
//! analytic gradients can be held to finite-difference oracles.

pub mod checkpoint;

use rand::Rng;
use serde::{Deserialize, Serialize};

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        assert!(!rows.is_empty());
        let cols = rows[0].len();
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols);
            data.extend_from_slice(r);
        }
        Mat {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Activation {
    Elu,
    Relu,
    Linear,
}

impl Activation {
    fn apply(self, z: f64) -> f64 {
        match self {
            Activation::Elu => {
                if z > 0.0 {
                    z
                } else {
                    z.exp() - 1.0
                }
            }
            Activation::Relu => z.max(0.0),
            Activation::Linear => z,
        }
    }

    /// Derivative as a function of the pre-activation.
    fn derivative(self, z: f64) -> f64 {
        match self {
            Activation::Elu => {
                if z > 0.0 {
                    1.0
                } else {
                    z.exp()
                }
            }
            Activation::Relu => {
                if z > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Activation::Linear => 1.0,
        }
    }

    pub fn tag(self) -> u8 {
        match self {
            Activation::Elu => 0,
            Activation::Relu => 1,
            Activation::Linear => 2,
        }
    }

    pub fn from_tag(tag: u8) -> Option<Self> {
        match tag {
            0 => Some(Activation::Elu),
            1 => Some(Activation::Relu),
            2 => Some(Activation::Linear),
            _ => None,
        }
    }
}

/// One affine layer: `y = act(x W^T + b)`, weights stored out x in.
#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    pub in_dim: usize,
    pub out_dim: usize,
    /// Row-major, `out_dim` rows of `in_dim` columns.
    pub weights: Vec<f64>,
    pub biases: Vec<f64>,
    pub activation: Activation,
}

impl Layer {
    fn weight_row(&self, o: usize) -> &[f64] {
        &self.weights[o * self.in_dim..(o + 1) * self.in_dim]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MlpModel {
    pub layers: Vec<Layer>,
}

/// Layer spec used at construction: (width, activation).
pub type LayerSpec = (usize, Activation);

impl MlpModel {
    /// Builds a seeded, randomly initialised network. ELU/linear layers use
    /// uniform Glorot bounds, ReLU layers He-style scaling. Biases start at
    /// zero.
    pub fn new<R: Rng>(input_dim: usize, specs: &[LayerSpec], rng: &mut R) -> Self {
        assert!(input_dim > 0 && !specs.is_empty());
        let mut layers = Vec::with_capacity(specs.len());
        let mut in_dim = input_dim;
        for &(out_dim, activation) in specs {
            assert!(out_dim > 0);
            let mut weights = vec![0.0; out_dim * in_dim];
            match activation {
                Activation::Relu => {
                    let std = (2.0 / in_dim as f64).sqrt();
                    for w in &mut weights {
                        // Box-Muller on uniform draws keeps rand's API surface small here
                        let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
                        let u2: f64 = rng.gen_range(0.0..1.0);
                        *w = std
                            * (-2.0 * u1.ln()).sqrt()
                            * (2.0 * std::f64::consts::PI * u2).cos();
                    }
                }
                Activation::Elu | Activation::Linear => {
                    let bound = (6.0 / (in_dim + out_dim) as f64).sqrt();
                    for w in &mut weights {
                        *w = rng.gen_range(-bound..bound);
                    }
                }
            }
            layers.push(Layer {
                in_dim,
                out_dim,
                weights,
                biases: vec![0.0; out_dim],
                activation,
            });
            in_dim = out_dim;
        }
        MlpModel { layers }
    }

    pub fn input_dim(&self) -> usize {
        self.layers[0].in_dim
    }

    pub fn output_dim(&self) -> usize {
        self.layers.last().unwrap().out_dim
    }

    pub fn parameter_count(&self) -> usize {
        self.layers
            .iter()
            .map(|l| l.weights.len() + l.biases.len())
            .sum()
    }

    /// Flat view of all parameters, layer by layer, weights before biases.
    /// Used by the finite-difference tests and the checkpoint writer.
    pub fn flat_parameters(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.parameter_count());
        for l in &self.layers {
            out.extend_from_slice(&l.weights);
            out.extend_from_slice(&l.biases);
        }
        out
    }

    pub fn set_flat_parameters(&mut self, params: &[f64]) {
        assert_eq!(params.len(), self.parameter_count());
        let mut i = 0;
        for l in &mut self.layers {
            let nw = l.weights.len();
            l.weights.copy_from_slice(&params[i..i + nw]);
            i += nw;
            let nb = l.biases.len();
            l.biases.copy_from_slice(&params[i..i + nb]);
            i += nb;
        }
    }
}

/// Intermediates cached by [`forward`] for the matching [`backward`] call.
pub struct ForwardCache {
    /// Activations per layer; index 0 is the input batch.
    pub activations: Vec<Mat>,
    /// Pre-activations per layer.
    pub pre: Vec<Mat>,
}

impl ForwardCache {
    pub fn output(&self) -> &Mat {
        self.activations.last().unwrap()
    }
}

/// Batched forward pass. Input is `n x input_dim`.
pub fn forward(model: &MlpModel, input: &Mat) -> ForwardCache {
    assert_eq!(
        input.cols,
        model.input_dim(),
        "input dim {} does not match model input {}",
        input.cols,
        model.input_dim()
    );
    let n = input.rows;
    let mut activations = vec![input.clone()];
    let mut pre = Vec::with_capacity(model.layers.len());
    for layer in &model.layers {
        let a_prev = activations.last().unwrap();
        let mut z = Mat::zeros(n, layer.out_dim);
        for i in 0..n {
            let x = a_prev.row(i);
            let zr = z.row_mut(i);
            for (o, zv) in zr.iter_mut().enumerate() {
                let w = layer.weight_row(o);
                let mut acc = layer.biases[o];
                for (xv, wv) in x.iter().zip(w) {
                    acc += xv * wv;
                }
                *zv = acc;
            }
        }
        let mut a = z.clone();
        for v in &mut a.data {
            *v = layer.activation.apply(*v);
        }
        pre.push(z);
        activations.push(a);
    }
    ForwardCache { activations, pre }
}

/// Convenience single-vector forward.
pub fn forward_one(model: &MlpModel, input: &[f64]) -> Vec<f64> {
    let m = Mat::from_rows(std::slice::from_ref(&input.to_vec()));
    forward(model, &m).output().row(0).to_vec()
}

/// Parameter gradients mirroring the model layout.
#[derive(Debug, Clone)]
pub struct Gradients {
    pub d_weights: Vec<Vec<f64>>,
    pub d_biases: Vec<Vec<f64>>,
}

impl Gradients {
    pub fn zeros_like(model: &MlpModel) -> Self {
        Gradients {
            d_weights: model.layers.iter().map(|l| vec![0.0; l.weights.len()]).collect(),
            d_biases: model.layers.iter().map(|l| vec![0.0; l.biases.len()]).collect(),
        }
    }

    pub fn scale(&mut self, s: f64) {
        for g in self.d_weights.iter_mut().chain(self.d_biases.iter_mut()) {
            for v in g.iter_mut() {
                *v *= s;
            }
        }
    }
}

/// Exact reverse-mode gradients. `d_output` is the loss gradient at the
/// network output (`n x out_dim`). Also returns the gradient with respect to
/// the input batch, which the GAN needs to push discriminator signal into
/// the generator.
pub fn backward(model: &MlpModel, cache: &ForwardCache, d_output: &Mat) -> (Gradients, Mat) {
    let n = d_output.rows;
    assert_eq!(d_output.cols, model.output_dim());
    let mut grads = Gradients::zeros_like(model);
    let mut delta = d_output.clone();
    for (li, layer) in model.layers.iter().enumerate().rev() {
        let z = &cache.pre[li];
        let a_prev = &cache.activations[li];
        // through the activation
        for i in 0..n {
            let zr = z.row(i);
            let dr = delta.row_mut(i);
            for (d, zv) in dr.iter_mut().zip(zr) {
                *d *= layer.activation.derivative(*zv);
            }
        }
        let dw = &mut grads.d_weights[li];
        let db = &mut grads.d_biases[li];
        let mut d_prev = Mat::zeros(n, layer.in_dim);
        for i in 0..n {
            let x = a_prev.row(i);
            let dz = delta.row(i);
            let dp = d_prev.row_mut(i);
            for (o, &dzo) in dz.iter().enumerate() {
                db[o] += dzo;
                let wrow = layer.weight_row(o);
                let dwrow = &mut dw[o * layer.in_dim..(o + 1) * layer.in_dim];
                for k in 0..layer.in_dim {
                    dwrow[k] += dzo * x[k];
                    dp[k] += dzo * wrow[k];
                }
            }
        }
        delta = d_prev;
    }
    (grads, delta)
}

/// Mean weighted cross-entropy over a batch of 2-class logits, with its
/// gradient at the logits. Weight `class_weights[label]` scales each sample.
pub fn weighted_cross_entropy(
    logits: &Mat,
    labels: &[u8],
    class_weights: [f64; 2],
) -> (f64, Mat) {
    assert_eq!(logits.cols, 2);
    assert_eq!(logits.rows, labels.len());
    let n = labels.len() as f64;
    let mut loss = 0.0;
    let mut grad = Mat::zeros(logits.rows, 2);
    for i in 0..logits.rows {
        let row = logits.row(i);
        let y = labels[i] as usize;
        let w = class_weights[y];
        let m = row[0].max(row[1]);
        let e0 = (row[0] - m).exp();
        let e1 = (row[1] - m).exp();
        let z = e0 + e1;
        let log_p = row[y] - m - z.ln();
        loss += -w * log_p;
        let p0 = e0 / z;
        let p1 = e1 / z;
        let g = grad.row_mut(i);
        g[0] = w * (p0 - if y == 0 { 1.0 } else { 0.0 }) / n;
        g[1] = w * (p1 - if y == 1 { 1.0 } else { 0.0 }) / n;
    }
    (loss / n, grad)
}

/// Inverse-prior class weights: weight of a class is one minus its share of
/// the training labels.
pub fn inverse_prior_weights(labels: &[u8]) -> [f64; 2] {
    let n = labels.len() as f64;
    let pos = labels.iter().filter(|&&l| l == 1).count() as f64;
    let p1 = pos / n;
    [p1, 1.0 - p1]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OptimizerKind {
    Adam {
        lr: f64,
        beta1: f64,
        beta2: f64,
        eps: f64,
    },
    RmsProp {
        lr: f64,
        decay: f64,
        eps: f64,
    },
}

impl OptimizerKind {
    pub fn adam(lr: f64) -> Self {
        OptimizerKind::Adam {
            lr,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
        }
    }

    pub fn rmsprop(lr: f64) -> Self {
        OptimizerKind::RmsProp {
            lr,
            decay: 0.9,
            eps: 1e-8,
        }
    }
}

/// Per-parameter accumulators for one model.
#[derive(Debug, Clone)]
pub struct OptimizerState {
    pub kind: OptimizerKind,
    pub step: u64,
    first: Vec<Vec<f64>>,
    second: Vec<Vec<f64>>,
}

impl OptimizerState {
    pub fn new(kind: OptimizerKind, model: &MlpModel) -> Self {
        let shapes: Vec<usize> = model
            .layers
            .iter()
            .flat_map(|l| [l.weights.len(), l.biases.len()])
            .collect();
        OptimizerState {
            kind,
            step: 0,
            first: shapes.iter().map(|&s| vec![0.0; s]).collect(),
            second: shapes.iter().map(|&s| vec![0.0; s]).collect(),
        }
    }
}

/// Applies one optimizer update in place.
pub fn optimizer_step(state: &mut OptimizerState, model: &mut MlpModel, grads: &Gradients) {
    state.step += 1;
    let mut tensor = 0;
    for (li, layer) in model.layers.iter_mut().enumerate() {
        for (params, grad) in [
            (&mut layer.weights, &grads.d_weights[li]),
            (&mut layer.biases, &grads.d_biases[li]),
        ] {
            assert_eq!(params.len(), grad.len());
            match state.kind {
                OptimizerKind::Adam {
                    lr,
                    beta1,
                    beta2,
                    eps,
                } => {
                    let t = state.step as f64;
                    let bc1 = 1.0 - beta1.powf(t);
                    let bc2 = 1.0 - beta2.powf(t);
                    let m = &mut state.first[tensor];
                    let v = &mut state.second[tensor];
                    for i in 0..params.len() {
                        m[i] = beta1 * m[i] + (1.0 - beta1) * grad[i];
                        v[i] = beta2 * v[i] + (1.0 - beta2) * grad[i] * grad[i];
                        let m_hat = m[i] / bc1;
                        let v_hat = v[i] / bc2;
                        params[i] -= lr * m_hat / (v_hat.sqrt() + eps);
                    }
                }
                OptimizerKind::RmsProp { lr, decay, eps } => {
                    let v = &mut state.second[tensor];
                    for i in 0..params.len() {
                        v[i] = decay * v[i] + (1.0 - decay) * grad[i] * grad[i];
                        params[i] -= lr * grad[i] / (v[i].sqrt() + eps);
                    }
                }
            }
            tensor += 1;
        }
    }
}

/// Clamps every parameter into `[-w_max, w_max]`. Idempotent.
pub fn clip_weights(model: &mut MlpModel, w_max: f64) {
    for layer in &mut model.layers {
        for w in layer.weights.iter_mut().chain(layer.biases.iter_mut()) {
            *w = w.clamp(-w_max, w_max);
        }
    }
}

/// Adds the gradient of `0.5 * lambda * sum(w^2)` over weights (not biases)
/// and returns the penalty value.
pub fn l2_penalty(model: &MlpModel, grads: &mut Gradients, lambda: f64) -> f64 {
    let mut penalty = 0.0;
    for (li, layer) in model.layers.iter().enumerate() {
        let dw = &mut grads.d_weights[li];
        for (g, &w) in dw.iter_mut().zip(&layer.weights) {
            penalty += w * w;
            *g += lambda * w;
        }
    }
    0.5 * lambda * penalty
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(42)
    }

    #[test]
    fn activation_values() {
        assert_eq!(Activation::Elu.apply(0.0), 0.0);
        assert!((Activation::Elu.apply(-1e9) - (-1.0)).abs() < 1e-12);
        assert_eq!(Activation::Relu.apply(-3.0), 0.0);
        assert_eq!(Activation::Linear.apply(-3.0), -3.0);
    }

    #[test]
    fn zero_net_zero_output() {
        let mut model = MlpModel::new(4, &[(3, Activation::Linear)], &mut rng());
        for l in &mut model.layers {
            l.weights.iter_mut().for_each(|w| *w = 0.0);
        }
        let out = forward_one(&model, &[1.0, -2.0, 3.0, 4.0]);
        assert_eq!(out, vec![0.0; 3]);
    }

    #[test]
    fn forward_matches_straight_line_recomputation() {
        // random 2-layer net vs. independent matrix arithmetic
        let mut r = rng();
        let model = MlpModel::new(
            3,
            &[(4, Activation::Elu), (2, Activation::Linear)],
            &mut r,
        );
        let x = [0.3, -1.2, 0.7];
        let got = forward_one(&model, &x);

        let l0 = &model.layers[0];
        let mut h = vec![0.0; 4];
        for o in 0..4 {
            let mut z = l0.biases[o];
            for k in 0..3 {
                z += x[k] * l0.weights[o * 3 + k];
            }
            h[o] = if z > 0.0 { z } else { z.exp() - 1.0 };
        }
        let l1 = &model.layers[1];
        for o in 0..2 {
            let mut z = l1.biases[o];
            for k in 0..4 {
                z += h[k] * l1.weights[o * 4 + k];
            }
            assert!((got[o] - z).abs() < 1e-12);
        }
    }

    #[test]
    fn linear_layer_closed_form_gradient() {
        // single linear layer, squared error: dW = 2/N * (XW - Y)^T X
        let mut r = rng();
        let model = MlpModel::new(3, &[(2, Activation::Linear)], &mut r);
        let x = Mat::from_rows(&[
            vec![1.0, 2.0, 3.0],
            vec![-1.0, 0.5, 0.0],
            vec![0.2, -0.4, 1.1],
        ]);
        let y = Mat::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0], vec![0.5, 0.5]]);
        let n = x.rows as f64;
        let cache = forward(&model, &x);
        let out = cache.output();
        let mut d_out = Mat::zeros(3, 2);
        for i in 0..3 {
            for j in 0..2 {
                d_out.row_mut(i)[j] = 2.0 / n * (out.row(i)[j] - y.row(i)[j]);
            }
        }
        let (grads, _) = backward(&model, &cache, &d_out);
        for o in 0..2 {
            for k in 0..3 {
                let mut expect = 0.0;
                for i in 0..3 {
                    expect += 2.0 / n * (out.row(i)[o] - y.row(i)[o]) * x.row(i)[k];
                }
                assert!((grads.d_weights[0][o * 3 + k] - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn zero_loss_gradient_zero_param_gradients() {
        let mut r = rng();
        let model = MlpModel::new(3, &[(4, Activation::Elu), (2, Activation::Linear)], &mut r);
        let x = Mat::from_rows(&[vec![0.5, 0.5, 0.5]]);
        let cache = forward(&model, &x);
        let d_out = Mat::zeros(1, 2);
        let (grads, d_in) = backward(&model, &cache, &d_out);
        assert!(grads.d_weights.iter().flatten().all(|&g| g == 0.0));
        assert!(d_in.data.iter().all(|&g| g == 0.0));
    }

    #[test]
    fn cross_entropy_equal_logits() {
        let logits = Mat::from_rows(&[vec![0.0, 0.0]]);
        let (loss, _) = weighted_cross_entropy(&logits, &[0], [1.0, 1.0]);
        assert!((loss - std::f64::consts::LN_2).abs() < 1e-12);
        let (loss1, _) = weighted_cross_entropy(&logits, &[1], [1.0, 1.0]);
        assert!((loss1 - std::f64::consts::LN_2).abs() < 1e-12);
    }

    #[test]
    fn inverse_prior_rule() {
        // 75% positives -> weights (0.75, 0.25)
        let labels = [1u8, 1, 1, 0];
        let w = inverse_prior_weights(&labels);
        assert!((w[0] - 0.75).abs() < 1e-12);
        assert!((w[1] - 0.25).abs() < 1e-12);
    }

    #[test]
    fn clip_examples() {
        let mut model = MlpModel::new(2, &[(2, Activation::Linear)], &mut rng());
        model.layers[0].weights = vec![0.5, -0.005, 0.02, -0.5];
        clip_weights(&mut model, 0.01);
        assert_eq!(model.layers[0].weights, vec![0.01, -0.005, 0.01, -0.01]);
        // idempotent
        let snapshot = model.clone();
        clip_weights(&mut model, 0.01);
        assert_eq!(model, snapshot);
    }

    #[test]
    fn adam_first_step_hand_trace() {
        let mut model = MlpModel::new(1, &[(1, Activation::Linear)], &mut rng());
        model.layers[0].weights = vec![0.3];
        model.layers[0].biases = vec![0.1];
        let mut grads = Gradients::zeros_like(&model);
        grads.d_weights[0][0] = 0.8;
        grads.d_biases[0][0] = -0.2;
        let lr = 0.001;
        let mut state = OptimizerState::new(OptimizerKind::adam(lr), &model);
        optimizer_step(&mut state, &mut model, &grads);
        // first Adam step: m_hat = g, v_hat = g^2, update = -lr*g/(|g|+eps)
        let expect_w = 0.3 - lr * 0.8 / (0.8 + 1e-8);
        let expect_b = 0.1 - lr * (-0.2) / (0.2 + 1e-8);
        assert!((model.layers[0].weights[0] - expect_w).abs() < 1e-12);
        assert!((model.layers[0].biases[0] - expect_b).abs() < 1e-12);
    }

    #[test]
    fn zero_gradient_leaves_parameters_unchanged() {
        for kind in [OptimizerKind::adam(0.01), OptimizerKind::rmsprop(0.01)] {
            let mut model =
                MlpModel::new(3, &[(4, Activation::Elu), (2, Activation::Linear)], &mut rng());
            let before = model.flat_parameters();
            let grads = Gradients::zeros_like(&model);
            let mut state = OptimizerState::new(kind, &model);
            optimizer_step(&mut state, &mut model, &grads);
            assert_eq!(model.flat_parameters(), before);
        }
    }

    #[test]
    fn batch_order_equivariance() {
        let mut r = rng();
        let model = MlpModel::new(3, &[(5, Activation::Elu), (2, Activation::Linear)], &mut r);
        let a = vec![0.1, 0.2, 0.3];
        let b = vec![-0.4, 0.0, 1.0];
        let fwd = forward(&model, &Mat::from_rows(&[a.clone(), b.clone()]));
        let swapped = forward(&model, &Mat::from_rows(&[b, a]));
        assert_eq!(fwd.output().row(0), swapped.output().row(1));
        assert_eq!(fwd.output().row(1), swapped.output().row(0));
    }
}
