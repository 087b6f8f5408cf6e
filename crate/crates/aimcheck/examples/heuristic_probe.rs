//! Oracle-detector probe for the heuristic aimbots at several detector
//! capacities, to pair with gan_probe when tuning the evaluation scale.

use std::time::Instant;

use aimcheck::config::{ArchetypeSpec, RunConfig};
use aimcheck::detector::score;
use aimcheck::eval::aggregate::aggregate_games;
use aimcheck::eval::metrics::{eer, ScoreSet};
use aimcheck::eval::scenarios::{train_scenario_detector, Scenario, ScenarioDatasets};
use aimcheck::features::extract_feature_vectors;
use aimcheck::heuristic::HeuristicParams;
use aimcheck::sim::{generate_episodes, BotController};
use aimcheck::types::Controller;

fn main() {
    let mut config = RunConfig::default();
    config.sim.episode_frames = 1750;
    config.archetypes = ArchetypeSpec {
        train_count: 6,
        test_count: 4,
        episodes_per_archetype: 2,
    };
    config.master_seed = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("seed must be an integer"))
        .unwrap_or(2024);

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
    let light = generate_episodes(
        &config.sim,
        &BotController::Heuristic(Controller::Light, HeuristicParams::light()),
        &config.human,
        &seeds,
        config.archetypes.episodes_per_archetype,
        config.master_seed + 7,
    );
    let strong = generate_episodes(
        &config.sim,
        &BotController::Heuristic(Controller::Strong, HeuristicParams::strong()),
        &config.human,
        &seeds,
        config.archetypes.episodes_per_archetype,
        config.master_seed + 8,
    );

    let datasets = ScenarioDatasets {
        human: human.clone(),
        light: light.clone(),
        strong: strong.clone(),
        ..Default::default()
    };
    let split = config.archetypes.split();
    for (name, controller, eps) in [
        ("light", Controller::Light, &light),
        ("strong", Controller::Strong, &strong),
    ] {
        for (epochs, hidden) in [(8, 128), (4, 64), (4, 48), (5, 64), (4, 96), (6, 64), (3, 64), (4, 32)] {
            config.detector.epochs = epochs;
            config.detector.hidden = hidden;
            let (model, _) = train_scenario_detector(
                &datasets,
                &split,
                &config.detector,
                Scenario::Oracle,
                controller,
                config.master_seed,
            )
            .expect("detector");
            let mut scores = ScoreSet::default();
            for ep in human.iter().chain(eps) {
                if !split.test_archetypes.contains(&ep.human_archetype_seed) {
                    continue;
                }
                for v in extract_feature_vectors(ep) {
                    scores.push(score(&model, &v), v.label, v.game_id.clone());
                }
            }
            print!(
                "{name:6} epochs={epochs} hidden={hidden}: oracle EER = {:.2}%",
                100.0 * eer(&scores).unwrap()
            );
            for n in [1, 5, 10, 15, 20, 30] {
                if let Some(a) = aggregate_games(&scores, n, 100, config.master_seed + n as u64) {
                    print!("  n={n}: {:.1}±{:.1}", 100.0 * a.mean_eer, 100.0 * a.std_eer);
                }
            }
            println!();
        }
    }
    println!("total {:.1}s", t0.elapsed().as_secs_f64());
}
