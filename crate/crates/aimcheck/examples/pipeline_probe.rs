//! Runs the pipeline at reduced scale and prints the quantities the
//! acceptance checks care about, with rough timings.

use std::time::Instant;

use aimcheck::config::{AggregationSpec, ArchetypeSpec, RunConfig};
use aimcheck::eval::scenarios::Scenario;
use aimcheck::pipeline::{build_datasets, evaluate};

fn main() {
    let mut config = RunConfig::default();
    config.master_seed = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("seed must be an integer"))
        .unwrap_or(2024);
    config.sim.episode_frames = 1750;
    config.archetypes = ArchetypeSpec {
        train_count: 6,
        test_count: 4,
        episodes_per_archetype: 2,
    };
    config.gan.epochs = 150;
    config.gan.d_hidden = 128;
    config.gan.w_max = 0.1;
    config.gan.dist_weight = 0.1;
    config.gan_window_stride = 4;
    config.detector.epochs = 8;
    config.detector.hidden = 128;
    config.aggregation = AggregationSpec {
        sample_sizes: vec![1, 3, 5, 10, 20, 30],
        repetitions: 100,
    };

    let t0 = Instant::now();
    let (datasets, gans) = build_datasets(&config).expect("dataset build");
    println!("datasets built in {:.1}s", t0.elapsed().as_secs_f64());
    for (pair, log) in &gans {
        println!(
            "gan {:?}: {} epochs, final d_loss={:.4} g_loss={:.4} dist={:.3}",
            pair.group,
            log.epochs.len(),
            log.epochs.last().unwrap().mean_d_loss,
            log.epochs.last().unwrap().mean_g_loss,
            log.epochs.last().unwrap().mean_dist,
        );
    }

    let t1 = Instant::now();
    let report = evaluate(&config, &datasets).expect("evaluation");
    println!("evaluation in {:.1}s", t1.elapsed().as_secs_f64());

    println!("\naccuracy: {:?}", report.accuracy);
    println!("\nmovement:");
    for (name, m) in &report.movement {
        println!(
            "  {name:6} avg|dpitch|={:.3} axis_corr={:.3} lag1_yaw={:.3} lag1_pitch={:.3}",
            m.avg_abs_pitch, m.axis_corr, m.step_corr_yaw, m.step_corr_pitch
        );
    }

    println!("\nscenario EERs (percent):");
    for row in &report.scenarios.rows {
        if !row.applicable {
            println!("  {:12} {:7} -", row.scenario.as_str(), row.aimbot.as_str());
            continue;
        }
        println!(
            "  {:12} {:7} eer={:5.2}",
            row.scenario.as_str(),
            row.aimbot.as_str(),
            100.0 * row.eer.unwrap()
        );
    }
    let _ = Scenario::ALL;

    println!("\naggregation (mean game EER percent by n):");
    for (bot, curve) in &report.aggregation {
        let pts: Vec<String> = curve
            .iter()
            .map(|a| format!("n={} {:.1}±{:.1}", a.n_vectors, 100.0 * a.mean_eer, 100.0 * a.std_eer))
            .collect();
        println!("  {bot}: {}", pts.join("  "));
    }
    println!("\ntotal {:.1}s", t0.elapsed().as_secs_f64());
}
