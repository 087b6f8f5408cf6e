//! Shared domain types.
//!
//! Everything here is immutable after construction and safe to share across
//! threads. The serde field names follow the on-disk JSONL schema described
//! in the README (`dyaw`/`dpitch`/`tvis`/`toff`/`fired`/`hit`/`bot`).

use serde::{Deserialize, Serialize};

/// Frames per second of every simulated episode.
pub const FRAME_RATE: u32 = 35;

/// Per-frame speed cap on each mouse axis, in degrees.
pub const SPEED_CAP_DEG: f64 = 30.0;

/// Frames of the fire window preceding the fire frame.
pub const PRE_FRAMES: usize = 17;

/// Fire frame plus frames following it in the fire window.
pub const POST_FRAMES: usize = 8;

/// Total frames in a fire window.
pub const WINDOW_FRAMES: usize = PRE_FRAMES + POST_FRAMES;

/// Movement dimensionality of a feature vector (two axes).
pub const MOVEMENT_DIMS: usize = 2 * WINDOW_FRAMES;

/// One frame of mouse movement: horizontal (yaw) and vertical (pitch) view
/// change in degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MouseDelta {
    pub dyaw: f64,
    pub dpitch: f64,
}

impl MouseDelta {
    pub const ZERO: MouseDelta = MouseDelta {
        dyaw: 0.0,
        dpitch: 0.0,
    };

    pub fn new(dyaw: f64, dpitch: f64) -> Self {
        MouseDelta { dyaw, dpitch }
    }

    /// Clamps both components to the simulator speed cap.
    pub fn capped(self) -> Self {
        MouseDelta {
            dyaw: self.dyaw.clamp(-SPEED_CAP_DEG, SPEED_CAP_DEG),
            dpitch: self.dpitch.clamp(-SPEED_CAP_DEG, SPEED_CAP_DEG),
        }
    }

    pub fn is_finite(self) -> bool {
        self.dyaw.is_finite() && self.dpitch.is_finite()
    }
}

/// Who controlled the mouse for an episode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Controller {
    HumanModel,
    Light,
    Strong,
    GanGroup1,
    GanGroup2,
}

impl Controller {
    /// Cheat label used by the detector: 1 for anything but the human model.
    pub fn cheat_label(self) -> u8 {
        if self == Controller::HumanModel {
            0
        } else {
            1
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Controller::HumanModel => "human",
            Controller::Light => "light",
            Controller::Strong => "strong",
            Controller::GanGroup1 => "gan1",
            Controller::GanGroup2 => "gan2",
        }
    }
}

/// One simulated game frame.
///
/// `target_offset` is (yaw, pitch) degrees from the aim-point to the nearest
/// target centre and is present only while the target is visible.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameLog {
    #[serde(rename = "dyaw")]
    pub dyaw: f64,
    #[serde(rename = "dpitch")]
    pub dpitch: f64,
    #[serde(rename = "tvis")]
    pub target_visible: bool,
    /// Offset of the enemy's body centre from the aim point (degrees),
    /// present while the enemy is on screen. This is the game-state value a
    /// memory-reading cheat sees; the rendered position additionally bobs.
    #[serde(rename = "toff", skip_serializing_if = "Option::is_none", default)]
    pub target_offset: Option<[f64; 2]>,
    pub fired: bool,
    pub hit: bool,
    #[serde(rename = "bot")]
    pub aimbot_active: bool,
}

impl FrameLog {
    pub fn delta(&self) -> MouseDelta {
        MouseDelta::new(self.dyaw, self.dpitch)
    }

    /// hit implies fired; an active aimbot implies a visible target.
    pub fn check_invariants(&self) -> Result<(), String> {
        if self.hit && !self.fired {
            return Err("hit without fired".into());
        }
        if self.aimbot_active && !self.target_visible {
            return Err("aimbot active without a visible target".into());
        }
        if !self.delta().is_finite() {
            return Err("non-finite delta".into());
        }
        Ok(())
    }
}

/// Per-frame log of one simulated game.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpisodeRecord {
    pub episode_id: String,
    pub controller: Controller,
    #[serde(rename = "seed")]
    pub human_archetype_seed: u64,
    pub frame_rate: u32,
    pub frames: Vec<FrameLog>,
}

impl EpisodeRecord {
    pub fn check_invariants(&self) -> Result<(), String> {
        if self.frame_rate != FRAME_RATE {
            return Err(format!("frame_rate {} != {}", self.frame_rate, FRAME_RATE));
        }
        if self.frames.is_empty() {
            return Err("empty episode".into());
        }
        for (i, f) in self.frames.iter().enumerate() {
            f.check_invariants().map_err(|e| format!("frame {i}: {e}"))?;
        }
        Ok(())
    }

    /// Shots fired with an instant-hit weapon (all weapons here are).
    pub fn shots_fired(&self) -> usize {
        self.frames.iter().filter(|f| f.fired).count()
    }

    pub fn shots_hit(&self) -> usize {
        self.frames.iter().filter(|f| f.hit).count()
    }

    /// Hit ratio over fired shots, or 0 when nothing was fired.
    pub fn accuracy(&self) -> f64 {
        let fired = self.shots_fired();
        if fired == 0 {
            0.0
        } else {
            self.shots_hit() as f64 / fired as f64
        }
    }
}

/// Detector input extracted around one fire event: 17 frames before the fire
/// frame plus the fire frame and 7 after, per axis, with the hit flag.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    /// Yaw then pitch, 17 values each.
    pub pre_deltas: [Vec<f64>; 2],
    /// Yaw then pitch, 8 values each (fire frame first).
    pub post_deltas: [Vec<f64>; 2],
    pub is_hit: u8,
    /// 0 = bona fide, 1 = cheat.
    pub label: u8,
    pub game_id: String,
}

impl FeatureVector {
    /// The 50 movement dimensions in on-disk order:
    /// yaw frames 1..25 then pitch frames 1..25.
    pub fn movement(&self) -> Vec<f64> {
        let mut x = Vec::with_capacity(MOVEMENT_DIMS);
        x.extend_from_slice(&self.pre_deltas[0]);
        x.extend_from_slice(&self.post_deltas[0]);
        x.extend_from_slice(&self.pre_deltas[1]);
        x.extend_from_slice(&self.post_deltas[1]);
        x
    }
}

/// Per-dimension standardisation statistics over the 50 movement dims.
/// The hit flag is never normalized.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Normalizer {
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

/// One GAN training sample: 20 context frames, the 5 following true frames,
/// and the target point (per-axis sum of the true frames).
#[derive(Debug, Clone, PartialEq)]
pub struct GanWindow {
    /// Yaw then pitch, 20 values each.
    pub context: [Vec<f64>; 2],
    /// Yaw then pitch, 5 values each.
    pub true_steps: [Vec<f64>; 2],
    /// (yaw, pitch) enemy offset observed at the frame where generation
    /// starts — the same conditioning the runtime aimbot receives.
    pub target: [f64; 2],
}
