//! Prints movement statistics and hit accuracy for the built-in
//! controllers, for eyeballing the human-model calibration bands.

use aimcheck::eval::stats::movement_stats;
use aimcheck::heuristic::HeuristicParams;
use aimcheck::sim::{generate_episodes, BotController, HumanModelParams, SimConfig};
use aimcheck::types::Controller;

fn main() {
    let seed: u64 = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("seed must be an integer"))
        .unwrap_or(99);
    let bob_amplitude: f64 = std::env::args()
        .nth(2)
        .map(|s| s.parse().expect("bob amplitude must be a float"))
        .unwrap_or_else(|| SimConfig::default().bob_amplitude);
    let sim = SimConfig {
        episode_frames: 3500,
        bob_amplitude,
        ..SimConfig::default()
    };
    let mut human = HumanModelParams::default();
    if let Some(s) = std::env::args().nth(3) {
        human.noise_std_yaw = s.parse().expect("noise_std_yaw must be a float");
    }
    if let Some(s) = std::env::args().nth(4) {
        human.smoothing_alpha = s.parse().expect("smoothing_alpha must be a float");
    }
    if let Some(s) = std::env::args().nth(5) {
        human.gain_yaw = s.parse().expect("gain_yaw must be a float");
    }
    println!(
        "seed={seed} bob_amplitude={bob_amplitude} noise_std_yaw={} alpha={} gain_yaw={}",
        human.noise_std_yaw, human.smoothing_alpha, human.gain_yaw
    );
    let archetypes: Vec<u64> = (1..=6).collect();

    let bots = [
        ("human", BotController::None),
        (
            "light",
            BotController::Heuristic(Controller::Light, HeuristicParams::light()),
        ),
        (
            "strong",
            BotController::Heuristic(Controller::Strong, HeuristicParams::strong()),
        ),
    ];
    for (name, bot) in bots {
        let eps = generate_episodes(&sim, &bot, &human, &archetypes, 2, seed);
        let stats = movement_stats(&eps);
        let shots: usize = eps.iter().map(|e| e.shots_fired()).sum();
        let hits: usize = eps.iter().map(|e| e.shots_hit()).sum();
        let acc = 100.0 * hits as f64 / shots.max(1) as f64;
        println!(
            "{name:6} acc={acc:5.1}% shots={shots:5} avg|dyaw|={:.3} avg|dpitch|={:.3} axis_corr={:.3} lag1_yaw={:.3} lag1_pitch={:.3}",
            stats.avg_abs_yaw,
            stats.avg_abs_pitch,
            stats.axis_corr,
            stats.step_corr_yaw,
            stats.step_corr_pitch,
        );
    }
}
