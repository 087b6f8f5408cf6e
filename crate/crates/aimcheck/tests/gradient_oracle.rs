//! Central finite differences vs analytic gradients for every network
//! shape the crate trains: generator, discriminator and detector.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use aimcheck::nn::{backward, forward, Activation, Mat, MlpModel};

const H: f64 = 1e-4;
const REL_TOL: f64 = 1e-4;
const PROBES: usize = 120;

/// Scalar probe loss: fixed random linear functional of the outputs.
fn loss(model: &MlpModel, x: &Mat, coefficients: &[f64]) -> f64 {
    let cache = forward(model, x);
    let y = cache.output();
    y.data.iter().zip(coefficients).map(|(v, c)| v * c).sum()
}

fn check_network(name: &str, input_dim: usize, layers: &[(usize, Activation)], seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut model = MlpModel::new(input_dim, layers, &mut rng);

    let batch = 3;
    let rows: Vec<Vec<f64>> = (0..batch)
        .map(|_| (0..input_dim).map(|_| rng.gen_range(-1.5..1.5)).collect())
        .collect();
    let x = Mat::from_rows(&rows);
    let out_dim = layers.last().unwrap().0;
    let coefficients: Vec<f64> = (0..batch * out_dim)
        .map(|_| rng.gen_range(-1.0..1.0))
        .collect();

    let cache = forward(&model, &x);
    let mut d_out = Mat::zeros(batch, out_dim);
    d_out.data.copy_from_slice(&coefficients);
    let (grads, _) = backward(&model, &cache, &d_out);

    let mut flat_grad = Vec::new();
    for (dw, db) in grads.d_weights.iter().zip(&grads.d_biases) {
        flat_grad.extend_from_slice(dw);
        flat_grad.extend_from_slice(db);
    }

    let base = model.flat_parameters();
    let n = base.len();
    let mut worst = 0.0f64;
    for probe in 0..PROBES {
        // deterministic spread of probe indices across the parameter vector
        let idx = (probe * 7919 + 13) % n;
        let mut params = base.clone();
        params[idx] = base[idx] + H;
        model.set_flat_parameters(&params);
        let up = loss(&model, &x, &coefficients);
        params[idx] = base[idx] - H;
        model.set_flat_parameters(&params);
        let down = loss(&model, &x, &coefficients);
        let numeric = (up - down) / (2.0 * H);
        let analytic = flat_grad[idx];
        let rel = (analytic - numeric).abs() / analytic.abs().max(numeric.abs()).max(1e-8);
        assert!(
            rel < REL_TOL,
            "{name}: parameter {idx} analytic {analytic} vs numeric {numeric} (rel {rel})"
        );
        worst = worst.max(rel);
    }
    model.set_flat_parameters(&base);
    println!("{name}: {PROBES} probes, worst relative error {worst:.2e}");
}

#[test]
fn generator_gradients_match_finite_differences() {
    check_network(
        "generator",
        58,
        &[
            (64, Activation::Elu),
            (64, Activation::Elu),
            (10, Activation::Linear),
        ],
        11,
    );
}

#[test]
fn discriminator_gradients_match_finite_differences() {
    check_network(
        "discriminator",
        52,
        &[
            (512, Activation::Elu),
            (512, Activation::Elu),
            (1, Activation::Linear),
        ],
        12,
    );
}

#[test]
fn detector_gradients_match_finite_differences() {
    check_network(
        "detector",
        51,
        &[
            (512, Activation::Relu),
            (512, Activation::Relu),
            (2, Activation::Linear),
        ],
        13,
    );
}
