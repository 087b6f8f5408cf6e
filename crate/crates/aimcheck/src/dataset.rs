//! JSON Lines dataset IO.
//!
//! One episode per line for trajectory datasets, one feature vector per line
//! for detector inputs. Parsing is defensive: these files may come from other
//! tools, so every line is validated before use.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Error;
use crate::types::{EpisodeRecord, FeatureVector, MOVEMENT_DIMS, PRE_FRAMES};
use crate::Result;

/// On-disk form of a feature vector:
/// `{"x":[50 floats],"is_hit":0|1,"label":0|1,"game_id":...}`.
#[derive(Debug, Serialize, Deserialize)]
struct FeatureLine {
    x: Vec<f64>,
    is_hit: u8,
    label: u8,
    game_id: String,
}

/// Parses one episode from a JSONL line and validates its invariants.
pub fn parse_episode_line(line: &str) -> std::result::Result<EpisodeRecord, String> {
    let ep: EpisodeRecord = serde_json::from_str(line).map_err(|e| e.to_string())?;
    ep.check_invariants()?;
    Ok(ep)
}

/// Parses one feature vector from a JSONL line.
pub fn parse_feature_line(line: &str) -> std::result::Result<FeatureVector, String> {
    let fl: FeatureLine = serde_json::from_str(line).map_err(|e| e.to_string())?;
    if fl.x.len() != MOVEMENT_DIMS {
        return Err(format!("expected {} movement dims, got {}", MOVEMENT_DIMS, fl.x.len()));
    }
    if fl.is_hit > 1 || fl.label > 1 {
        return Err("is_hit and label must be 0 or 1".into());
    }
    if fl.x.iter().any(|v| !v.is_finite()) {
        return Err("non-finite movement value".into());
    }
    let (yaw, pitch) = fl.x.split_at(MOVEMENT_DIMS / 2);
    Ok(FeatureVector {
        pre_deltas: [yaw[..PRE_FRAMES].to_vec(), pitch[..PRE_FRAMES].to_vec()],
        post_deltas: [yaw[PRE_FRAMES..].to_vec(), pitch[PRE_FRAMES..].to_vec()],
        is_hit: fl.is_hit,
        label: fl.label,
        game_id: fl.game_id,
    })
}

pub fn write_episodes(path: &Path, episodes: &[EpisodeRecord]) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let mut w = BufWriter::new(file);
    for ep in episodes {
        let line = serde_json::to_string(ep).expect("episode serializes");
        writeln!(w, "{line}").map_err(|e| Error::io(path.display().to_string(), e))?;
    }
    w.flush().map_err(|e| Error::io(path.display().to_string(), e))
}

pub fn read_episodes(path: &Path) -> Result<Vec<EpisodeRecord>> {
    let file = File::open(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let reader = BufReader::new(file);
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(path.display().to_string(), e))?;
        if line.trim().is_empty() {
            continue;
        }
        let ep = parse_episode_line(&line).map_err(|message| Error::Dataset {
            line: i + 1,
            message,
        })?;
        out.push(ep);
    }
    Ok(out)
}

pub fn write_features(path: &Path, vectors: &[FeatureVector]) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let mut w = BufWriter::new(file);
    for v in vectors {
        let fl = FeatureLine {
            x: v.movement(),
            is_hit: v.is_hit,
            label: v.label,
            game_id: v.game_id.clone(),
        };
        let line = serde_json::to_string(&fl).expect("feature serializes");
        writeln!(w, "{line}").map_err(|e| Error::io(path.display().to_string(), e))?;
    }
    w.flush().map_err(|e| Error::io(path.display().to_string(), e))
}

pub fn read_features(path: &Path) -> Result<Vec<FeatureVector>> {
    let file = File::open(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let reader = BufReader::new(file);
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(path.display().to_string(), e))?;
        if line.trim().is_empty() {
            continue;
        }
        let v = parse_feature_line(&line).map_err(|message| Error::Dataset {
            line: i + 1,
            message,
        })?;
        out.push(v);
    }
    Ok(out)
}

/// SHA-256 of a file, hex encoded. Used for artifact manifests.
pub fn file_sha256(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let mut hasher = Sha256::new();
    hasher.update(&bytes);
    Ok(hex_encode(&hasher.finalize()))
}

/// SHA-256 of an in-memory buffer, hex encoded.
pub fn bytes_sha256(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    hex_encode(&hasher.finalize())
}

fn hex_encode(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}
