//! Regenerates the fuzz corpus seed inputs under `fuzz/corpus/`.
//!
//! Run from the repository root: `cargo run --example make_fuzz_seeds`.

use std::fs;
use std::path::Path;

use aimcheck::config::RunConfig;
use aimcheck::nn::{checkpoint, Activation, MlpModel};
use aimcheck::types::{Controller, EpisodeRecord, FeatureVector, FrameLog};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn write(path: &Path, bytes: &[u8]) {
    fs::create_dir_all(path.parent().unwrap()).unwrap();
    fs::write(path, bytes).unwrap();
    println!("wrote {} ({} bytes)", path.display(), bytes.len());
}

fn main() {
    let root = Path::new("fuzz/corpus");

    // episode_line: one well-formed line, one truncated, one with wrong types.
    let episode = EpisodeRecord {
        episode_id: "seed-ep".into(),
        controller: Controller::Light,
        human_archetype_seed: 42,
        frame_rate: 35,
        frames: vec![
            FrameLog {
                dyaw: 1.5,
                dpitch: -0.25,
                target_visible: true,
                target_offset: Some([4.0, 1.0]),
                fired: true,
                hit: false,
                aimbot_active: true,
            },
            FrameLog {
                dyaw: 0.0,
                dpitch: 0.0,
                target_visible: false,
                target_offset: None,
                fired: false,
                hit: false,
                aimbot_active: false,
            },
        ],
    };
    let line = serde_json::to_string(&episode).unwrap();
    write(&root.join("episode_line/valid"), line.as_bytes());
    write(
        &root.join("episode_line/truncated"),
        &line.as_bytes()[..line.len() / 2],
    );
    write(
        &root.join("episode_line/wrong-types"),
        br#"{"episode_id":3,"controller":"Light","seed":"x","frame_rate":35,"frames":[]}"#,
    );

    // feature_line: a well-formed 50-dim vector plus a short one.
    let feature = FeatureVector {
        pre_deltas: [vec![0.25; 17], vec![-0.5; 17]],
        post_deltas: [vec![1.0; 8], vec![0.0; 8]],
        is_hit: 1,
        label: 0,
        game_id: "seed-ep".into(),
    };
    let mut x = feature.movement();
    let fl = serde_json::json!({
        "x": x,
        "is_hit": feature.is_hit,
        "label": feature.label,
        "game_id": feature.game_id,
    });
    write(
        &root.join("feature_line/valid"),
        fl.to_string().as_bytes(),
    );
    x.truncate(3);
    let short = serde_json::json!({"x": x, "is_hit": 0, "label": 1, "game_id": "g"});
    write(
        &root.join("feature_line/short-vector"),
        short.to_string().as_bytes(),
    );

    // checkpoint_decode: a real encoded model plus a corrupted copy.
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let model = MlpModel::new(
        5,
        &[(8, Activation::Elu), (2, Activation::Linear)],
        &mut rng,
    );
    let bytes = checkpoint::encode(&model);
    write(&root.join("checkpoint_decode/valid"), &bytes);
    let mut corrupt = bytes.clone();
    let mid = corrupt.len() / 2;
    corrupt[mid] ^= 0xff;
    corrupt.truncate(corrupt.len() - 3);
    write(&root.join("checkpoint_decode/corrupt"), &corrupt);

    // config_toml: the full default config, a partial override, and junk keys.
    let full = RunConfig::default().to_toml_string();
    write(&root.join("config_toml/default"), full.as_bytes());
    write(
        &root.join("config_toml/partial"),
        b"master_seed = 7\n[gan]\nepochs = 2\n",
    );
    write(
        &root.join("config_toml/junk-keys"),
        b"unknown = true\n[sim]\nepisode_frames = 0\n",
    );
}
