//! Feature extraction and GAN windowing.

use crate::error::Error;
use crate::types::{
    EpisodeRecord, FeatureVector, GanWindow, Normalizer, MOVEMENT_DIMS, POST_FRAMES, PRE_FRAMES,
};
use crate::Result;

/// Floor applied to per-dimension standard deviations.
pub const STD_FLOOR: f64 = 1e-6;

/// Context frames conditioning the GAN.
pub const CONTEXT_FRAMES: usize = 20;

/// Future frames the generator emits.
pub const GEN_FRAMES: usize = 5;

/// Frames in one GAN window.
pub const GAN_WINDOW_FRAMES: usize = CONTEXT_FRAMES + GEN_FRAMES;

/// One feature vector per fire event that has at least 17 predecessor and
/// 7 successor frames; fires closer to the episode edges are skipped.
/// Vectors are raw (unnormalized); label is 1 unless the human model played.
pub fn extract_feature_vectors(episode: &EpisodeRecord) -> Vec<FeatureVector> {
    let frames = &episode.frames;
    let label = episode.controller.cheat_label();
    let mut out = Vec::new();
    for (i, frame) in frames.iter().enumerate() {
        if !frame.fired {
            continue;
        }
        if i < PRE_FRAMES || i + POST_FRAMES > frames.len() {
            continue;
        }
        let pre = &frames[i - PRE_FRAMES..i];
        let post = &frames[i..i + POST_FRAMES];
        out.push(FeatureVector {
            pre_deltas: [
                pre.iter().map(|f| f.dyaw).collect(),
                pre.iter().map(|f| f.dpitch).collect(),
            ],
            post_deltas: [
                post.iter().map(|f| f.dyaw).collect(),
                post.iter().map(|f| f.dpitch).collect(),
            ],
            is_hit: u8::from(frame.hit),
            label,
            game_id: episode.episode_id.clone(),
        });
    }
    out
}

/// Sliding 25-frame windows over every episode. The target is the observed
/// enemy offset at the first generated frame — the same quantity the runtime
/// aimbot feeds the generator — so windows where the enemy is hidden at that
/// frame are skipped. Episodes shorter than 25 frames yield nothing.
pub fn make_gan_windows(episodes: &[EpisodeRecord], stride: usize) -> Vec<GanWindow> {
    assert!(stride >= 1, "stride must be >= 1");
    let mut out = Vec::new();
    for ep in episodes {
        if ep.frames.len() < GAN_WINDOW_FRAMES {
            continue;
        }
        let mut start = 0;
        while start + GAN_WINDOW_FRAMES <= ep.frames.len() {
            let aim_frame = &ep.frames[start + CONTEXT_FRAMES];
            let target = match (aim_frame.target_visible, aim_frame.target_offset) {
                (true, Some(offset)) => offset,
                _ => {
                    start += stride;
                    continue;
                }
            };
            let ctx = &ep.frames[start..start + CONTEXT_FRAMES];
            let steps = &ep.frames[start + CONTEXT_FRAMES..start + GAN_WINDOW_FRAMES];
            let true_steps: [Vec<f64>; 2] = [
                steps.iter().map(|f| f.dyaw).collect(),
                steps.iter().map(|f| f.dpitch).collect(),
            ];
            out.push(GanWindow {
                context: [
                    ctx.iter().map(|f| f.dyaw).collect(),
                    ctx.iter().map(|f| f.dpitch).collect(),
                ],
                true_steps,
                target,
            });
            start += stride;
        }
    }
    out
}

/// Per-dimension mean and population (divide-by-N) standard deviation over
/// the 50 movement dims of the training vectors. Constant dimensions get a
/// floored std.
pub fn fit_normalizer(vectors: &[FeatureVector]) -> Result<Normalizer> {
    if vectors.len() < 2 {
        return Err(Error::Config(format!(
            "normalizer needs at least 2 vectors, got {}",
            vectors.len()
        )));
    }
    let n = vectors.len() as f64;
    let mut mean = vec![0.0; MOVEMENT_DIMS];
    for v in vectors {
        for (m, x) in mean.iter_mut().zip(v.movement()) {
            *m += x;
        }
    }
    for m in &mut mean {
        *m /= n;
    }
    let mut var = vec![0.0; MOVEMENT_DIMS];
    for v in vectors {
        for (s, (x, m)) in var.iter_mut().zip(v.movement().iter().zip(&mean)) {
            let d = x - m;
            *s += d * d;
        }
    }
    let std = var.iter().map(|s| (s / n).sqrt().max(STD_FLOOR)).collect();
    Ok(Normalizer { mean, std })
}

/// Standardizes the 50 movement dims and appends the raw hit flag, yielding
/// the 51-dim detector input.
pub fn apply_normalizer(norm: &Normalizer, v: &FeatureVector) -> Vec<f64> {
    let mut out = Vec::with_capacity(MOVEMENT_DIMS + 1);
    for ((x, m), s) in v.movement().iter().zip(&norm.mean).zip(&norm.std) {
        out.push((x - m) / s);
    }
    out.push(f64::from(v.is_hit));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::{Controller, FrameLog};

    fn frame(dyaw: f64, dpitch: f64, fired: bool, hit: bool) -> FrameLog {
        FrameLog {
            dyaw,
            dpitch,
            target_visible: fired,
            target_offset: if fired { Some([0.0, 0.0]) } else { None },
            fired,
            hit,
            aimbot_active: false,
        }
    }

    fn episode(frames: Vec<FrameLog>, controller: Controller) -> EpisodeRecord {
        EpisodeRecord {
            episode_id: "ep".into(),
            controller,
            human_archetype_seed: 0,
            frame_rate: 35,
            frames,
        }
    }

    #[test]
    fn no_fires_no_vectors() {
        let ep = episode(vec![frame(0.1, 0.0, false, false); 40], Controller::HumanModel);
        assert!(extract_feature_vectors(&ep).is_empty());
    }

    #[test]
    fn fire_window_indices_hand_traced() {
        // 30-frame scripted episode, dyaw = frame index (1-based), fire at
        // frame 20 (index 19). pre_deltas must be frames 3..19.
        let mut frames: Vec<FrameLog> = (1..=30)
            .map(|i| frame(i as f64, -(i as f64), false, false))
            .collect();
        frames[19].fired = true;
        frames[19].hit = true;
        frames[19].target_visible = true;
        frames[19].target_offset = Some([0.0, 0.0]);
        let ep = episode(frames, Controller::HumanModel);

        let vs = extract_feature_vectors(&ep);
        assert_eq!(vs.len(), 1);
        let v = &vs[0];
        assert_eq!(v.is_hit, 1);
        assert_eq!(v.label, 0);
        let expected_pre: Vec<f64> = (3..=19).map(|i| i as f64).collect();
        assert_eq!(v.pre_deltas[0], expected_pre);
        let expected_post: Vec<f64> = (20..=27).map(|i| i as f64).collect();
        assert_eq!(v.post_deltas[0], expected_post);
        assert_eq!(v.pre_deltas[1][0], -3.0);
    }

    #[test]
    fn fire_near_edge_skipped() {
        // fire at frame 5 (index 4): only 4 predecessors, must be skipped
        let mut frames = vec![frame(0.0, 0.0, false, false); 40];
        frames[4].fired = true;
        let ep = episode(frames, Controller::Light);
        assert!(extract_feature_vectors(&ep).is_empty());
    }

    #[test]
    fn cheat_label_follows_controller() {
        let mut frames = vec![frame(0.0, 0.0, false, false); 40];
        frames[20].fired = true;
        let ep = episode(frames, Controller::Strong);
        assert_eq!(extract_feature_vectors(&ep)[0].label, 1);
    }

    fn visible_frames(n: usize, offset: [f64; 2]) -> Vec<FrameLog> {
        let mut frames = vec![frame(0.0, 0.0, false, false); n];
        for f in &mut frames {
            f.target_visible = true;
            f.target_offset = Some(offset);
        }
        frames
    }

    #[test]
    fn single_window_per_25_frames() {
        let ep = episode(visible_frames(25, [0.0, 0.0]), Controller::HumanModel);
        let ws = make_gan_windows(std::slice::from_ref(&ep), 1);
        assert_eq!(ws.len(), 1);
        assert_eq!(ws[0].target, [0.0, 0.0]);
        let short = episode(visible_frames(24, [0.0, 0.0]), Controller::HumanModel);
        assert!(make_gan_windows(&[short], 1).is_empty());
    }

    #[test]
    fn target_is_offset_observed_at_generation_frame() {
        // The window's target must be the enemy offset seen at frame 20
        // (the first generated frame), not anything accumulated from deltas.
        let mut frames = visible_frames(25, [1.0, -2.0]);
        frames[20].target_offset = Some([5.0, 0.5]);
        for f in frames.iter_mut().skip(20) {
            f.dyaw = 1.0;
        }
        let ep = episode(frames, Controller::HumanModel);
        let ws = make_gan_windows(&[ep], 1);
        assert_eq!(ws[0].target, [5.0, 0.5]);
        assert_eq!(ws[0].true_steps[0], vec![1.0; 5]);
    }

    #[test]
    fn hidden_target_at_generation_frame_skips_window() {
        let mut frames = visible_frames(26, [1.0, 1.0]);
        frames[20].target_visible = false;
        frames[20].target_offset = None;
        let ep = episode(frames, Controller::HumanModel);
        // Window starting at 0 aims at frame 20 (hidden) and is skipped;
        // the window starting at 1 aims at frame 21 and survives.
        let ws = make_gan_windows(&[ep], 1);
        assert_eq!(ws.len(), 1);
        assert_eq!(ws[0].target, [1.0, 1.0]);
    }

    fn fv(val: f64) -> FeatureVector {
        FeatureVector {
            pre_deltas: [vec![val; 17], vec![val; 17]],
            post_deltas: [vec![val; 8], vec![val; 8]],
            is_hit: 1,
            label: 0,
            game_id: "g".into(),
        }
    }

    #[test]
    fn identical_vectors_normalize_to_zero() {
        let vs = vec![fv(2.5), fv(2.5), fv(2.5)];
        let n = fit_normalizer(&vs).unwrap();
        let z = apply_normalizer(&n, &vs[0]);
        assert_eq!(z.len(), 51);
        for d in &z[..50] {
            assert!(d.abs() < 1e-9);
        }
        // is_hit passes through untouched
        assert_eq!(z[50], 1.0);
    }

    #[test]
    fn population_convention() {
        // two vectors at -1 and +1 per dim: mean 0, population std 1
        let vs = vec![fv(-1.0), fv(1.0)];
        let n = fit_normalizer(&vs).unwrap();
        for (m, s) in n.mean.iter().zip(&n.std) {
            assert!((m - 0.0).abs() < 1e-12);
            assert!((s - 1.0).abs() < 1e-12);
        }
        let z = apply_normalizer(&n, &vs[1]);
        for d in &z[..50] {
            assert!((d - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn too_few_vectors_rejected() {
        assert!(fit_normalizer(&[fv(0.0)]).is_err());
    }
}
