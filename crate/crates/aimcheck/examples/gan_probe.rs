//! Fast single-GAN tuning probe.
//!
//! Usage: gan_probe <w_max> <dist_weight> <epochs> [d_hidden] [seed]
//! Trains Group1 on the reduced-scale human data, rolls out its episodes and
//! prints the movement signature and closed-loop accuracy.

use std::time::Instant;

use aimcheck::config::{ArchetypeSpec, RunConfig};
use aimcheck::detector::score;
use aimcheck::eval::aggregate::aggregate_games;
use aimcheck::eval::metrics::{eer, ScoreSet};
use aimcheck::eval::scenarios::{train_scenario_detector, Scenario, ScenarioDatasets};
use aimcheck::eval::stats::movement_stats;
use aimcheck::features::extract_feature_vectors;
use aimcheck::gan::GanGroup;
use aimcheck::pipeline::{pooled_accuracy, simulate_gan_episodes, train_gan_group};
use aimcheck::sim::{generate_episodes, BotController};
use aimcheck::types::Controller;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let mut config = RunConfig::default();
    config.sim.episode_frames = 1750;
    config.archetypes = ArchetypeSpec {
        train_count: 6,
        test_count: 4,
        episodes_per_archetype: 2,
    };
    config.gan_window_stride = 4;
    config.gan.w_max = args[1].parse().unwrap();
    config.gan.dist_weight = args[2].parse().unwrap();
    config.gan.epochs = args[3].parse().unwrap();
    config.gan.d_hidden = args.get(4).map_or(128, |s| s.parse().unwrap());
    config.master_seed = args.get(5).map_or(2024, |s| s.parse().unwrap());
    if let Some(s) = args.get(6) {
        config.gan.learning_rate = s.parse().unwrap();
    }
    if let Some(s) = args.get(7) {
        config.human.noise_std_yaw = s.parse().unwrap();
    }
    if let Some(s) = args.get(8) {
        config.human.smoothing_alpha = s.parse().unwrap();
    }
    if let Some(s) = args.get(9) {
        config.sim.bob_amplitude = s.parse().unwrap();
    }
    if let Some(s) = args.get(10) {
        config.human.gain_yaw = s.parse().unwrap();
    }
    if let Some(s) = args.get(11) {
        config.gan.use_adam = s.parse::<u8>().unwrap() != 0;
    }
    if let Some(s) = args.get(12) {
        config.archetypes.test_count = s.parse().unwrap();
    }
    config.gan.snapshot_every = args.get(13).map_or(25, |s| s.parse().unwrap());

    let t0 = Instant::now();
    let mut seeds = config.archetypes.train_seeds();
    seeds.extend(config.archetypes.test_seeds());
    let human = generate_episodes(
        &config.sim,
        &BotController::None,
        &config.human,
        &seeds,
        config.archetypes.episodes_per_archetype,
        config.master_seed,
    );
    let hm = movement_stats(&human);

    let (pair, log) = train_gan_group(&config, &human, GanGroup::Group1).expect("train");
    let first = log.epochs.first().unwrap();
    let last = log.epochs.last().unwrap();
    let eps = simulate_gan_episodes(&config, &pair, GanGroup::Group1);
    let gm = movement_stats(&eps);

    println!(
        "w_max={} dist_weight={} epochs={} d_hidden={} seed={} lr={} noise_yaw={} alpha={} bob={} adam={}",
        config.gan.w_max,
        config.gan.dist_weight,
        config.gan.epochs,
        config.gan.d_hidden,
        config.master_seed,
        config.gan.learning_rate,
        config.human.noise_std_yaw,
        config.human.smoothing_alpha,
        config.sim.bob_amplitude,
        config.gan.use_adam
    );
    println!(
        "dist epoch1 {:.3} -> final {:.3}; d_loss {:.4}; g_loss {:.4}; selected_epoch {:?}",
        first.mean_dist, last.mean_dist, last.mean_d_loss, last.mean_g_loss, log.selected_epoch
    );
    let snaps: Vec<String> = log
        .snapshots
        .iter()
        .map(|(e, d)| format!("{e}:{d:.2}"))
        .collect();
    println!("snapshots: {}", snaps.join(" "));
    println!(
        "human: acc={:.1}% avg|dyaw|={:.3} avg|dpitch|={:.3} lag1_yaw={:.3} lag1_pitch={:.3} axis={:.3}",
        pooled_accuracy(&human), hm.avg_abs_yaw, hm.avg_abs_pitch, hm.step_corr_yaw, hm.step_corr_pitch, hm.axis_corr
    );
    println!(
        "gan:   acc={:.1}% avg|dyaw|={:.3} avg|dpitch|={:.3} lag1_yaw={:.3} lag1_pitch={:.3} axis={:.3}",
        pooled_accuracy(&eps), gm.avg_abs_yaw, gm.avg_abs_pitch, gm.step_corr_yaw, gm.step_corr_pitch, gm.axis_corr
    );
    // Open-loop aim response: zero context, z = 0, synthetic targets.
    {
        use aimcheck::gan::gan_step;
        let zero_ctx = [vec![0.0; 20], vec![0.0; 20]];
        let z = vec![0.0; 16];
        for tgt in [[4.0, 0.0], [8.0, 0.0], [12.0, 0.0], [0.0, 4.0], [0.0, 8.0], [-8.0, -4.0]] {
            let d = gan_step(&pair, &zero_ctx, tgt, &z);
            println!("  open-loop target ({:+5.1},{:+5.1}) -> step1 ({:+.3},{:+.3})", tgt[0], tgt[1], d.dyaw, d.dpitch);
        }
    }
    for (name, set) in [("human", &human), ("gan", &eps)] {
        let mut vis = 0usize;
        let mut active = 0usize;
        let mut total = 0usize;
        let mut off_sum = 0.0;
        let mut off_n = 0usize;
        let mut near = 0usize;
        for ep in set.iter() {
            for f in &ep.frames {
                total += 1;
                vis += usize::from(f.target_visible);
                active += usize::from(f.aimbot_active);
                if let Some(o) = f.target_offset {
                    let n = (o[0] * o[0] + o[1] * o[1]).sqrt();
                    off_sum += n;
                    off_n += 1;
                    near += usize::from(n <= 2.0);
                }
            }
        }
        println!(
            "{name}: visible {:.0}% active {:.0}% mean|off| {:.2} frames-within-2deg {:.0}%",
            100.0 * vis as f64 / total as f64,
            100.0 * active as f64 / total as f64,
            off_sum / off_n.max(1) as f64,
            100.0 * near as f64 / off_n.max(1) as f64
        );
    }
    // Oracle-scenario detector cells at several desk-scale capacities.
    let datasets = ScenarioDatasets {
        human: human.clone(),
        gan1: eps.clone(),
        ..Default::default()
    };
    let split = config.archetypes.split();
    for (epochs, hidden) in [(8, 128), (4, 64), (4, 48), (5, 64), (4, 96), (6, 64), (3, 64), (4, 32)] {
        config.detector.epochs = epochs;
        config.detector.hidden = hidden;
        let (model, _) = train_scenario_detector(
            &datasets,
            &split,
            &config.detector,
            Scenario::Oracle,
            Controller::GanGroup1,
            config.master_seed,
        )
        .expect("detector");
        let mut scores = ScoreSet::default();
        for ep in human.iter().chain(&eps) {
            if !split.test_archetypes.contains(&ep.human_archetype_seed) {
                continue;
            }
            for v in extract_feature_vectors(ep) {
                scores.push(score(&model, &v), v.label, v.game_id.clone());
            }
        }
        print!(
            "detector epochs={epochs} hidden={hidden}: oracle EER = {:.2}%",
            100.0 * eer(&scores).unwrap()
        );
        for n in [1, 5, 10, 15, 20, 30] {
            if let Some(a) = aggregate_games(&scores, n, 100, config.master_seed + n as u64) {
                print!("  n={n}: {:.1}±{:.1}", 100.0 * a.mean_eer, 100.0 * a.std_eer);
            }
        }
        println!();
        // Per-game mean scores: overlap between the label groups is what
        // keeps the game-level EER above zero at large n.
        let mut games: std::collections::BTreeMap<(u8, String), (f64, usize)> = Default::default();
        for entry in &scores.entries {
            let e = games
                .entry((entry.label, entry.game_id.clone()))
                .or_insert((0.0, 0));
            e.0 += entry.score;
            e.1 += 1;
        }
        for label in [0u8, 1] {
            let mut means: Vec<f64> = games
                .iter()
                .filter(|((l, _), _)| *l == label)
                .map(|(_, (sum, n))| sum / *n as f64)
                .collect();
            means.sort_by(f64::total_cmp);
            let txt: Vec<String> = means.iter().map(|m| format!("{m:+.2}")).collect();
            println!("    label={label} game means: {}", txt.join(" "));
        }
    }
    println!("total {:.1}s", t0.elapsed().as_secs_f64());
}
