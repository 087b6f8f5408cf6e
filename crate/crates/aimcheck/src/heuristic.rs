//! Light and strong rule-based aimbots.
//!
//! Both use a box field-of-view and "slow aim": each frame they move a fixed
//! fraction of the remaining per-axis distance, plus Gaussian noise scaled by
//! the movement magnitude. They never fire; firing stays with the player.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::types::MouseDelta;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeuristicParams {
    /// Half-width of the square activation box, degrees.
    pub activation_range: f64,
    /// Fraction of the remaining per-axis distance moved each frame.
    pub move_fraction: f64,
    /// Noise std is `noise_scale * |movement|` per axis.
    pub noise_scale: f64,
}

impl HeuristicParams {
    pub fn light() -> Self {
        HeuristicParams {
            activation_range: 5.0,
            move_fraction: 0.4,
            noise_scale: 0.2,
        }
    }

    pub fn strong() -> Self {
        HeuristicParams {
            activation_range: 15.0,
            move_fraction: 0.6,
            noise_scale: 0.2,
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.activation_range <= 0.0 {
            return Err("activation_range must be > 0".into());
        }
        if !(self.move_fraction > 0.0 && self.move_fraction <= 1.0) {
            return Err("move_fraction must be in (0, 1]".into());
        }
        if self.noise_scale < 0.0 {
            return Err("noise_scale must be >= 0".into());
        }
        Ok(())
    }
}

/// True when the offset lies inside the box field-of-view (inclusive at the
/// boundary).
pub fn in_activation_box(offset: [f64; 2], range: f64) -> bool {
    offset[0].abs() <= range && offset[1].abs() <= range
}

/// One aimbot frame. Returns `None` when inactive: no visible target, or the
/// target outside the activation box.
pub fn heuristic_step(
    target_offset: Option<[f64; 2]>,
    params: &HeuristicParams,
    rng: &mut ChaCha8Rng,
) -> Option<MouseDelta> {
    let offset = target_offset?;
    if !in_activation_box(offset, params.activation_range) {
        return None;
    }
    let mut axes = [0.0; 2];
    for (a, o) in axes.iter_mut().zip(offset) {
        let d = params.move_fraction * o;
        let std = params.noise_scale * d.abs();
        // std is zero when the movement is zero, so the delta stays exact
        let noise = if std > 0.0 { gaussian(rng) * std } else { 0.0 };
        *a = d + noise;
    }
    Some(MouseDelta::new(axes[0], axes[1]))
}

/// Standard normal draw via Box-Muller.
pub fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}
