//! End-to-end tests of the `aimcheck` binary: exit codes, artifact
//! manifest enforcement and a tiny full pipeline run.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_aimcheck"))
}

/// Overrides that shrink every stage enough for a fast test run.
const TINY: &[&str] = &[
    "--set",
    "sim.episode_frames=600",
    "--set",
    "archetypes.train_count=2",
    "--set",
    "archetypes.test_count=2",
    "--set",
    "archetypes.episodes_per_archetype=1",
    "--set",
    "gan.epochs=2",
    "--set",
    "gan.g_hidden=16",
    "--set",
    "gan.d_hidden=32",
    "--set",
    "gan_window_stride=2",
    "--set",
    "detector.epochs=2",
    "--set",
    "detector.hidden=32",
    "--set",
    "aggregation.sample_sizes=[1,2]",
    "--set",
    "aggregation.repetitions=20",
];

fn run(out_dir: &Path, args: &[&str]) -> Output {
    bin()
        .args(TINY)
        .arg("--out")
        .arg(out_dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn assert_code(output: &Output, code: i32) {
    assert_eq!(
        output.status.code(),
        Some(code),
        "stdout:\n{}\nstderr:\n{}",
        String::from_utf8_lossy(&output.stdout),
        String::from_utf8_lossy(&output.stderr)
    );
}

#[test]
fn print_config_reflects_seed_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["--seed", "9", "--set", "gan.epochs=3", "print-config"]);
    assert_code(&out, 0);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("master_seed = 9"), "{text}");
    assert!(text.contains("epochs = 3"), "{text}");
}

#[test]
fn invalid_configuration_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    // invalid value
    let out = run(dir.path(), &["--set", "sim.episode_frames=0", "print-config"]);
    assert_code(&out, 2);
    // malformed --set
    let out = run(dir.path(), &["--set", "no-equals-sign", "print-config"]);
    assert_code(&out, 2);
    // unknown scenario name
    let out = run(dir.path(), &["train-detector", "--scenario", "bogus"]);
    assert_code(&out, 2);
    // bad GAN group
    let out = run(dir.path(), &["train-gan", "--group", "3"]);
    assert_code(&out, 2);
}

#[test]
fn missing_artifacts_exit_3_with_hint() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["train-gan", "--group", "1"],
        vec!["evaluate"],
        vec!["report"],
    ] {
        let out = run(dir.path(), &args);
        assert_code(&out, 3);
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains("run `aimcheck"), "no hint in: {err}");
    }
}

#[test]
fn tampered_dataset_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    assert_code(&run(dir.path(), &["simulate"]), 0);
    let human = dir.path().join("data/human.jsonl");
    let mut text = std::fs::read_to_string(&human).unwrap();
    text.push('\n');
    text.push_str(&text.lines().next().unwrap().to_string());
    std::fs::write(&human, text).unwrap();
    assert_code(&run(dir.path(), &["train-gan", "--group", "1"]), 3);
}

#[test]
fn tiny_pipeline_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    assert_code(&run(dir.path(), &["simulate"]), 0);
    assert_code(&run(dir.path(), &["train-gan", "--group", "1"]), 0);
    assert_code(&run(dir.path(), &["train-gan", "--group", "2"]), 0);
    assert_code(&run(dir.path(), &["train-detector", "--scenario", "oracle"]), 0);
    assert!(dir.path().join("models/detector-oracle-light.acnn").exists());
    assert!(dir.path().join("models/detector-oracle-light.meta.json").exists());

    let out = run(dir.path(), &["evaluate"]);
    assert_code(&out, 0);
    for name in ["report.json", "det_points.csv", "summary.txt"] {
        assert!(dir.path().join("reports").join(name).exists(), "{name} missing");
    }

    let out = run(dir.path(), &["report"]);
    assert_code(&out, 0);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("oracle"), "{text}");
}
