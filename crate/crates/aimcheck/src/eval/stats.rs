//! Mouse-movement statistics: per-axis absolute movement, correlation
//! between the axes, and lag-1 autocorrelation of successive steps.

use serde::{Deserialize, Serialize};

use crate::types::EpisodeRecord;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MovementStats {
    pub avg_abs_yaw: f64,
    pub std_abs_yaw: f64,
    pub avg_abs_pitch: f64,
    pub std_abs_pitch: f64,
    /// Pearson correlation of (|dyaw|, |dpitch|) pairs, pooled.
    pub axis_corr: f64,
    /// Lag-1 autocorrelation of signed yaw steps, per episode then averaged.
    pub step_corr_yaw: f64,
    pub step_corr_pitch: f64,
    /// Set when any correlation had a zero-variance series (reported as 0).
    pub degenerate: bool,
}

fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len() as f64;
    if x.len() < 2 {
        return None;
    }
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    let mut sxy = 0.0;
    for (a, b) in x.iter().zip(y) {
        let dx = a - mx;
        let dy = b - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if sxx <= 0.0 || syy <= 0.0 {
        return None;
    }
    Some(sxy / (sxx * syy).sqrt())
}

fn lag1(series: &[f64]) -> Option<f64> {
    if series.len() < 3 {
        return None;
    }
    pearson(&series[..series.len() - 1], &series[1..])
}

/// Computes movement statistics over a set of episodes. Requires at least
/// two frames in total; zero-variance series yield a flagged 0 correlation.
pub fn movement_stats(episodes: &[EpisodeRecord]) -> MovementStats {
    let mut abs_yaw = Vec::new();
    let mut abs_pitch = Vec::new();
    for ep in episodes {
        for f in &ep.frames {
            abs_yaw.push(f.dyaw.abs());
            abs_pitch.push(f.dpitch.abs());
        }
    }
    assert!(abs_yaw.len() >= 2, "need at least 2 frames");

    let n = abs_yaw.len() as f64;
    let mean = |v: &[f64]| v.iter().sum::<f64>() / n;
    let avg_abs_yaw = mean(&abs_yaw);
    let avg_abs_pitch = mean(&abs_pitch);
    let std = |v: &[f64], m: f64| (v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / n).sqrt();

    let mut degenerate = false;
    let axis_corr = pearson(&abs_yaw, &abs_pitch).unwrap_or_else(|| {
        degenerate = true;
        0.0
    });

    let mut per_axis = [0.0f64; 2];
    for (axis, acc) in per_axis.iter_mut().enumerate() {
        let mut sum = 0.0;
        let mut count = 0usize;
        for ep in episodes {
            let series: Vec<f64> = ep
                .frames
                .iter()
                .map(|f| if axis == 0 { f.dyaw } else { f.dpitch })
                .collect();
            match lag1(&series) {
                Some(c) => {
                    sum += c;
                    count += 1;
                }
                None => degenerate = true,
            }
        }
        *acc = if count > 0 { sum / count as f64 } else { 0.0 };
    }

    MovementStats {
        avg_abs_yaw,
        std_abs_yaw: std(&abs_yaw, avg_abs_yaw),
        avg_abs_pitch,
        std_abs_pitch: std(&abs_pitch, avg_abs_pitch),
        axis_corr,
        step_corr_yaw: per_axis[0],
        step_corr_pitch: per_axis[1],
        degenerate,
    }
}
