//! Deterministic 2-D angular aim-duel simulator.
//!
//! No world geometry: the state is an aim direction and a target direction,
//! both in degrees. The target drifts with piecewise-constant angular
//! velocity, occasionally changes direction and occasionally respawns at a
//! new offset, which exercises both tracking and flick acquisition. All
//! weapons are instant-hit: aim at fire time fully determines the hit.
//!
//! Frame order: observe -> resolve fire against the observed offset ->
//! move (aimbot if it activates, otherwise the human model) -> target moves.
//!
//! Everything is driven by one ChaCha stream per episode, so identical
//! (seed, config, params, controller) reproduce the episode byte for byte.
//! Independent episodes derive their stream as `master_seed + episode_index`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::features::CONTEXT_FRAMES;
use crate::gan::{gan_step, GanPair, GAN_ACTIVATION_RANGE, LATENT_DIM};
use crate::heuristic::{gaussian, heuristic_step, in_activation_box, HeuristicParams};
use crate::types::{Controller, EpisodeRecord, FrameLog, MouseDelta, FRAME_RATE};

/// Horizontal half field-of-view in degrees; targets beyond it are unseen.
const FOV_YAW: f64 = 60.0;
/// Vertical half field-of-view in degrees.
const FOV_PITCH: f64 = 30.0;
/// Vertical target velocity is scaled down by this factor; mice move far
/// less vertically than horizontally.
const PITCH_SPEED_SCALE: f64 = 0.08;
/// Absolute pitch band the target bounces inside.
const TARGET_PITCH_LIMIT: f64 = 18.0;
/// Respawn probability per frame while the target is out of view.
const OFFSCREEN_RESPAWN_RATE: f64 = 0.15;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SimConfig {
    /// Frames per episode; 5250 is 2.5 minutes at 35 fps.
    pub episode_frames: usize,
    /// Hit tolerance: a shot lands if the observed offset norm is inside.
    pub target_radius: f64,
    /// [min, max] target angular speed in degrees/frame.
    pub target_speed_range: [f64; 2],
    /// Probability per frame of redrawing the target velocity.
    pub direction_change_rate: f64,
    /// Probability per frame of the target respawning at a new offset.
    pub respawn_rate: f64,
    /// Peak vertical bob of the target in degrees. The bob is fast enough
    /// that only a frame-by-frame controller can chase it; the human
    /// model's latency and smoothing filter it out.
    pub bob_amplitude: f64,
    /// Bob period in frames.
    pub bob_period: f64,
    pub rng_seed: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            episode_frames: 5250,
            target_radius: 1.5,
            target_speed_range: [0.05, 0.6],
            direction_change_rate: 0.04,
            respawn_rate: 0.008,
            bob_amplitude: 0.8,
            bob_period: 4.0,
            rng_seed: 0,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.episode_frames == 0 {
            return Err("episode_frames must be > 0".into());
        }
        if self.target_radius <= 0.0 {
            return Err("target_radius must be > 0".into());
        }
        if self.target_speed_range[0] < 0.0 || self.target_speed_range[1] < self.target_speed_range[0] {
            return Err("target_speed_range must be ordered and non-negative".into());
        }
        for (name, r) in [
            ("direction_change_rate", self.direction_change_rate),
            ("respawn_rate", self.respawn_rate),
        ] {
            if !(0.0..=1.0).contains(&r) {
                return Err(format!("{name} must be in [0,1]"));
            }
        }
        if self.bob_amplitude < 0.0 {
            return Err("bob_amplitude must be >= 0".into());
        }
        if self.bob_period < 2.0 {
            return Err("bob_period must be >= 2 frames".into());
        }
        Ok(())
    }
}

/// Synthetic stand-in for a bona fide player: latency-delayed proportional
/// pursuit with exponential smoothing and correlated per-axis noise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct HumanModelParams {
    /// Reaction latency in frames (7 frames is roughly 200 ms at 35 fps).
    pub reaction_frames: usize,
    pub gain_yaw: f64,
    pub gain_pitch: f64,
    /// Lag-1 autocorrelation knob in [0,1).
    pub smoothing_alpha: f64,
    pub noise_std_yaw: f64,
    pub noise_std_pitch: f64,
    /// Correlation of the per-axis noise draws, in [-1,1].
    pub axis_noise_correlation: f64,
    /// The player considers firing when the perceived offset norm is inside.
    pub fire_threshold: f64,
    /// Per-frame fire probability while on target.
    pub fire_probability: f64,
}

impl Default for HumanModelParams {
    fn default() -> Self {
        HumanModelParams {
            reaction_frames: 7,
            gain_yaw: 0.10,
            gain_pitch: 0.06,
            smoothing_alpha: 0.50,
            noise_std_yaw: 0.50,
            noise_std_pitch: 0.065,
            axis_noise_correlation: 0.65,
            fire_threshold: 3.0,
            fire_probability: 0.25,
        }
    }
}

impl HumanModelParams {
    pub fn validate(&self) -> Result<(), String> {
        if self.gain_pitch >= self.gain_yaw {
            return Err("gain_pitch must be < gain_yaw".into());
        }
        if !(0.0..1.0).contains(&self.smoothing_alpha) {
            return Err("smoothing_alpha must be in [0,1)".into());
        }
        if !(-1.0..=1.0).contains(&self.axis_noise_correlation) {
            return Err("axis_noise_correlation must be in [-1,1]".into());
        }
        if self.noise_std_yaw < 0.0 || self.noise_std_pitch < 0.0 {
            return Err("noise stds must be >= 0".into());
        }
        if !(0.0..=1.0).contains(&self.fire_probability) {
            return Err("fire_probability must be in [0,1]".into());
        }
        Ok(())
    }

    /// Derives a per-player variant: gains and noise perturbed by up to
    /// +-20%, seeded by the archetype.
    pub fn archetype(&self, archetype_seed: u64) -> HumanModelParams {
        let mut rng = ChaCha8Rng::seed_from_u64(archetype_seed ^ 0xa1c4_e7b9_5eed_0001);
        let mut p = self.clone();
        let mut jitter = |v: f64| v * rng.gen_range(0.8..1.2);
        p.gain_yaw = jitter(p.gain_yaw);
        p.gain_pitch = jitter(p.gain_pitch);
        p.noise_std_yaw = jitter(p.noise_std_yaw);
        p.noise_std_pitch = jitter(p.noise_std_pitch);
        // keep the pitch gain strictly below yaw
        if p.gain_pitch >= p.gain_yaw {
            p.gain_pitch = p.gain_yaw * 0.5;
        }
        p
    }
}

/// Who moves the mouse when the aimbot window lights up.
pub enum BotController<'a> {
    None,
    Heuristic(Controller, HeuristicParams),
    Gan(Controller, &'a GanPair),
}

impl BotController<'_> {
    pub fn controller(&self) -> Controller {
        match self {
            BotController::None => Controller::HumanModel,
            BotController::Heuristic(c, _) => *c,
            BotController::Gan(c, _) => *c,
        }
    }

    fn activation_range(&self) -> Option<f64> {
        match self {
            BotController::None => None,
            BotController::Heuristic(_, p) => Some(p.activation_range),
            BotController::Gan(_, _) => Some(GAN_ACTIVATION_RANGE),
        }
    }
}

/// Mutable simulation state, kept internal to [`run_episode`].
struct SimState {
    aim: [f64; 2],
    target: [f64; 2],
    target_vel: [f64; 2],
    prev_delta: MouseDelta,
    bob_phase: f64,
    /// Latency buffer of observed offsets (None while the target is unseen).
    pending: std::collections::VecDeque<Option<[f64; 2]>>,
    /// Executed deltas, newest last; feeds the GAN context.
    context: [Vec<f64>; 2],
}

fn wrap_yaw(v: f64) -> f64 {
    let mut x = (v + 180.0).rem_euclid(360.0) - 180.0;
    if x == -180.0 {
        x = 180.0;
    }
    x
}

fn offset_between(target: [f64; 2], aim: [f64; 2]) -> [f64; 2] {
    [wrap_yaw(target[0] - aim[0]), target[1] - aim[1]]
}

fn norm(v: [f64; 2]) -> f64 {
    (v[0] * v[0] + v[1] * v[1]).sqrt()
}

/// One human-model movement frame.
///
/// delta = alpha * previous_delta
///       + (1 - alpha) * (gain * delayed offset, per axis, speed-capped)
///       + correlated Gaussian noise
pub fn human_step(
    prev_delta: MouseDelta,
    perceived: Option<[f64; 2]>,
    params: &HumanModelParams,
    rng: &mut ChaCha8Rng,
) -> MouseDelta {
    let pursuit = match perceived {
        Some(off) => MouseDelta::new(params.gain_yaw * off[0], params.gain_pitch * off[1]).capped(),
        None => MouseDelta::ZERO,
    };
    let a = params.smoothing_alpha;
    let dyaw = a * prev_delta.dyaw + (1.0 - a) * pursuit.dyaw;
    let dpitch = a * prev_delta.dpitch + (1.0 - a) * pursuit.dpitch;
    let (ny, np) = hand_jitter(params, rng);
    MouseDelta::new(dyaw + ny, dpitch + np).capped()
}

/// The player's involuntary correlated hand noise for one frame.
///
/// This rides on every frame the player's hand is on the mouse — including
/// frames where an injection-style cheat moves the aim, since the hand never
/// leaves the device.
fn hand_jitter(params: &HumanModelParams, rng: &mut ChaCha8Rng) -> (f64, f64) {
    if params.noise_std_yaw <= 0.0 && params.noise_std_pitch <= 0.0 {
        return (0.0, 0.0);
    }
    let g1 = gaussian(rng);
    let g2 = gaussian(rng);
    let rho = params.axis_noise_correlation;
    (
        params.noise_std_yaw * g1,
        params.noise_std_pitch * (rho * g1 + (1.0 - rho * rho).sqrt() * g2),
    )
}

fn respawn_target(state: &mut SimState, rng: &mut ChaCha8Rng) {
    let off_yaw = rng.gen_range(-40.0..40.0);
    let off_pitch = rng.gen_range(-8.0..8.0);
    state.target = [
        wrap_yaw(state.aim[0] + off_yaw),
        (state.aim[1] + off_pitch).clamp(-TARGET_PITCH_LIMIT, TARGET_PITCH_LIMIT),
    ];
    state.bob_phase = rng.gen_range(0.0..std::f64::consts::TAU);
}

fn redraw_velocity(state: &mut SimState, config: &SimConfig, rng: &mut ChaCha8Rng) {
    let speed = rng.gen_range(config.target_speed_range[0]..=config.target_speed_range[1]);
    let phi = rng.gen_range(0.0..std::f64::consts::TAU);
    state.target_vel = [speed * phi.cos(), speed * phi.sin() * PITCH_SPEED_SCALE];
}

/// Runs one full episode. The aimbot (when present) moves the mouse on
/// frames where the observed target sits inside its activation box;
/// otherwise the human model moves. Firing always belongs to the human.
pub fn run_episode(
    config: &SimConfig,
    bot: &BotController,
    human: &HumanModelParams,
    episode_id: &str,
    archetype_seed: u64,
) -> EpisodeRecord {
    config.validate().expect("valid sim config");
    human.validate().expect("valid human params");
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);

    let mut state = SimState {
        aim: [0.0, 0.0],
        target: [0.0, 0.0],
        target_vel: [0.0, 0.0],
        prev_delta: MouseDelta::ZERO,
        bob_phase: 0.0,
        pending: std::collections::VecDeque::new(),
        context: [vec![0.0; CONTEXT_FRAMES], vec![0.0; CONTEXT_FRAMES]],
    };
    respawn_target(&mut state, &mut rng);
    redraw_velocity(&mut state, config, &mut rng);

    // the latent vector conditioning the GAN is fixed for the whole game
    let latent: Vec<f64> = (0..LATENT_DIM).map(|_| gaussian(&mut rng)).collect();

    let mut frames = Vec::with_capacity(config.episode_frames);
    for t in 0..config.episode_frames {
        let bob = config.bob_amplitude
            * (std::f64::consts::TAU * t as f64 / config.bob_period + state.bob_phase).sin();
        // What the screen shows (and what screen-reading parties chase) is
        // the bobbing head; the enemy's body centre moves smoothly.
        let obs = offset_between([state.target[0], state.target[1] + bob], state.aim);
        let center = offset_between(state.target, state.aim);
        let visible = obs[0].abs() <= FOV_YAW && obs[1].abs() <= FOV_PITCH;

        state.pending.push_back(if visible { Some(obs) } else { None });
        let perceived = if state.pending.len() > human.reaction_frames {
            state.pending.pop_front().unwrap()
        } else {
            None
        };

        // fire decision on the perceived offset, hit on the true one
        let fire_draw: f64 = rng.gen();
        let fired = matches!(perceived, Some(p) if norm(p) <= human.fire_threshold)
            && fire_draw < human.fire_probability;
        let hit = fired && visible && norm(obs) <= config.target_radius;

        // The heuristic bots are screen readers chasing the rendered (bobbing)
        // position; the GAN reads the enemy centre from game state.
        let bot_obs = match bot {
            BotController::Gan(_, _) => center,
            _ => obs,
        };
        let mut aimbot_active = false;
        let delta = match (bot.activation_range(), visible) {
            (Some(range), true) if in_activation_box(bot_obs, range) => {
                aimbot_active = true;
                let injected = match bot {
                    BotController::Heuristic(_, p) => {
                        heuristic_step(Some(bot_obs), p, &mut rng).unwrap()
                    }
                    BotController::Gan(_, pair) => {
                        gan_step(pair, &state.context, bot_obs, &latent)
                    }
                    BotController::None => unreachable!(),
                };
                // the cheat injects deltas while the player's hand stays on
                // the mouse, so its jitter rides on top
                let (ny, np) = hand_jitter(human, &mut rng);
                MouseDelta::new(injected.dyaw + ny, injected.dpitch + np).capped()
            }
            _ => human_step(state.prev_delta, perceived, human, &mut rng),
        };

        frames.push(FrameLog {
            dyaw: delta.dyaw,
            dpitch: delta.dpitch,
            target_visible: visible,
            target_offset: if visible { Some(center) } else { None },
            fired,
            hit,
            aimbot_active,
        });

        state.prev_delta = delta;
        for (axis, v) in [(0, delta.dyaw), (1, delta.dpitch)] {
            state.context[axis].remove(0);
            state.context[axis].push(v);
        }
        state.aim[0] = wrap_yaw(state.aim[0] + delta.dyaw);
        state.aim[1] = (state.aim[1] + delta.dpitch).clamp(-90.0, 90.0);

        // target motion
        state.target[0] = wrap_yaw(state.target[0] + state.target_vel[0]);
        state.target[1] += state.target_vel[1];
        if state.target[1].abs() > TARGET_PITCH_LIMIT {
            state.target[1] = state.target[1].clamp(-TARGET_PITCH_LIMIT, TARGET_PITCH_LIMIT);
            state.target_vel[1] = -state.target_vel[1];
        }
        if rng.gen::<f64>() < config.direction_change_rate {
            redraw_velocity(&mut state, config, &mut rng);
        }
        let respawn_p = if visible {
            config.respawn_rate
        } else {
            OFFSCREEN_RESPAWN_RATE
        };
        if rng.gen::<f64>() < respawn_p {
            respawn_target(&mut state, &mut rng);
        }
    }

    EpisodeRecord {
        episode_id: episode_id.to_string(),
        controller: bot.controller(),
        human_archetype_seed: archetype_seed,
        frame_rate: FRAME_RATE,
        frames,
    }
}

/// Per-episode RNG stream derivation from a master seed.
pub fn episode_seed(master_seed: u64, episode_index: u64) -> u64 {
    master_seed.wrapping_add(episode_index)
}

/// Simulates one episode per archetype seed, with per-episode RNG streams
/// derived from the master seed and archetype-perturbed human parameters.
pub fn generate_episodes(
    base_config: &SimConfig,
    bot: &BotController,
    base_human: &HumanModelParams,
    archetype_seeds: &[u64],
    episodes_per_archetype: usize,
    master_seed: u64,
) -> Vec<EpisodeRecord> {
    let mut out = Vec::new();
    let mut index = 0u64;
    for &arch in archetype_seeds {
        let human = base_human.archetype(arch);
        for rep in 0..episodes_per_archetype {
            let mut cfg = base_config.clone();
            cfg.rng_seed = episode_seed(master_seed, index);
            let id = format!("{}-a{}-e{}", bot.controller().as_str(), arch, rep);
            out.push(run_episode(&cfg, bot, &human, &id, arch));
            index += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinism() {
        let cfg = SimConfig {
            episode_frames: 400,
            ..SimConfig::default()
        };
        let human = HumanModelParams::default();
        let a = run_episode(&cfg, &BotController::None, &human, "e", 1);
        let b = run_episode(&cfg, &BotController::None, &human, "e", 1);
        assert_eq!(a, b);
        let bytes_a = serde_json::to_vec(&a).unwrap();
        let bytes_b = serde_json::to_vec(&b).unwrap();
        assert_eq!(bytes_a, bytes_b);
    }

    #[test]
    fn speed_cap_respected() {
        let cfg = SimConfig {
            episode_frames: 2000,
            ..SimConfig::default()
        };
        let ep = run_episode(
            &cfg,
            &BotController::Heuristic(Controller::Strong, HeuristicParams::strong()),
            &HumanModelParams::default(),
            "e",
            3,
        );
        for f in &ep.frames {
            assert!(f.dyaw.abs() <= 30.0 && f.dpitch.abs() <= 30.0);
        }
        ep.check_invariants().unwrap();
    }

    #[test]
    fn hit_implies_offset_within_radius() {
        let cfg = SimConfig {
            episode_frames: 3000,
            ..SimConfig::default()
        };
        let ep = run_episode(&cfg, &BotController::None, &HumanModelParams::default(), "e", 5);
        for f in ep.frames.iter().filter(|f| f.hit) {
            // hits land on the rendered (bobbing) position, while toff logs
            // the body centre, so the bound widens by the bob amplitude
            let off = f.target_offset.expect("hit requires a visible target");
            assert!(norm(off) <= cfg.target_radius + cfg.bob_amplitude + 1e-12);
        }
    }

    #[test]
    fn geometric_pursuit_trace() {
        // stationary target 10 degrees right, no noise, no smoothing,
        // gain 0.5: once perceived, deltas decay 5, 2.5, 1.25, ...
        let mut human = HumanModelParams {
            reaction_frames: 2,
            gain_yaw: 0.5,
            gain_pitch: 0.2,
            smoothing_alpha: 0.0,
            noise_std_yaw: 0.0,
            noise_std_pitch: 0.0,
            ..HumanModelParams::default()
        };
        human.fire_probability = 0.0;
        let mut prev = MouseDelta::ZERO;
        let mut offset = 10.0;
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut expected = 5.0;
        for _ in 0..5 {
            let d = human_step(prev, Some([offset, 0.0]), &human, &mut rng);
            assert!((d.dyaw - expected).abs() < 1e-12);
            assert_eq!(d.dpitch, 0.0);
            offset -= d.dyaw;
            expected *= 0.5;
            prev = d;
        }
    }

    #[test]
    fn empty_perception_yields_zero() {
        let human = HumanModelParams {
            noise_std_yaw: 0.0,
            noise_std_pitch: 0.0,
            ..HumanModelParams::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let d = human_step(MouseDelta::ZERO, None, &human, &mut rng);
        assert_eq!(d, MouseDelta::ZERO);
    }

    #[test]
    fn smoothing_free_arithmetic() {
        // alpha 0, no noise, delayed offset (4,2), gains (0.5, 0.25) -> (2.0, 0.5)
        let human = HumanModelParams {
            gain_yaw: 0.5,
            gain_pitch: 0.25,
            smoothing_alpha: 0.0,
            noise_std_yaw: 0.0,
            noise_std_pitch: 0.0,
            ..HumanModelParams::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let d = human_step(MouseDelta::ZERO, Some([4.0, 2.0]), &human, &mut rng);
        assert!((d.dyaw - 2.0).abs() < 1e-12);
        assert!((d.dpitch - 0.5).abs() < 1e-12);
    }

    #[test]
    fn noise_free_monotone_convergence() {
        // stationary target, no noise: |offset| shrinks monotonically per axis
        let human = HumanModelParams {
            reaction_frames: 0,
            smoothing_alpha: 0.0,
            noise_std_yaw: 0.0,
            noise_std_pitch: 0.0,
            ..HumanModelParams::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut prev = MouseDelta::ZERO;
        let mut off = [12.0, 6.0];
        for _ in 0..120 {
            let d = human_step(prev, Some(off), &human, &mut rng);
            let next = [off[0] - d.dyaw, off[1] - d.dpitch];
            assert!(next[0].abs() <= off[0].abs() + 1e-12);
            assert!(next[1].abs() <= off[1].abs() + 1e-12);
            off = next;
            prev = d;
        }
        assert!(off[0].abs() < 0.01 && off[1].abs() < 0.5);
    }

    #[test]
    fn archetypes_differ_but_are_stable() {
        let base = HumanModelParams::default();
        let a = base.archetype(10);
        let b = base.archetype(11);
        assert_ne!(a, b);
        assert_eq!(a, base.archetype(10));
        a.validate().unwrap();
        b.validate().unwrap();
    }
}
