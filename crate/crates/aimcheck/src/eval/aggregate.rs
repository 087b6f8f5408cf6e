//! Whole-game aggregation: average n sampled vector scores per game and
//! measure the EER of the game-level scores, repeated over random draws.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::eval::metrics::{eer, ScoreSet};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateResult {
    pub n_vectors: usize,
    pub repetitions: usize,
    pub mean_eer: f64,
    pub std_eer: f64,
    pub games_used: usize,
    /// Games with fewer than n_vectors scored vectors, excluded entirely.
    pub games_dropped: usize,
}

/// Game-level EER when each game is scored by the mean of `n_vectors`
/// vector scores sampled without replacement. Returns None when no games
/// of both labels survive the size filter.
pub fn aggregate_games(
    scores: &ScoreSet,
    n_vectors: usize,
    repetitions: usize,
    seed: u64,
) -> Option<AggregateResult> {
    assert!(n_vectors > 0 && repetitions > 0);
    let mut by_game: BTreeMap<&str, (u8, Vec<f64>)> = BTreeMap::new();
    for e in &scores.entries {
        let slot = by_game
            .entry(e.game_id.as_str())
            .or_insert((e.label, Vec::new()));
        debug_assert_eq!(slot.0, e.label, "label must be constant within a game");
        slot.1.push(e.score);
    }

    let total_games = by_game.len();
    let eligible: Vec<(&str, &(u8, Vec<f64>))> = by_game
        .iter()
        .filter(|(_, (_, v))| v.len() >= n_vectors)
        .map(|(k, v)| (*k, v))
        .collect();
    let games_dropped = total_games - eligible.len();
    let has_both = eligible.iter().any(|(_, (l, _))| *l == 0)
        && eligible.iter().any(|(_, (l, _))| *l == 1);
    if !has_both {
        return None;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut eers = Vec::with_capacity(repetitions);
    for _ in 0..repetitions {
        let mut game_set = ScoreSet::default();
        for (game_id, (label, vector_scores)) in &eligible {
            let sample: Vec<f64> = vector_scores
                .choose_multiple(&mut rng, n_vectors)
                .copied()
                .collect();
            let mean = sample.iter().sum::<f64>() / n_vectors as f64;
            game_set.push(mean, *label, *game_id);
        }
        eers.push(eer(&game_set).expect("both labels present"));
    }

    let mean_eer = eers.iter().sum::<f64>() / eers.len() as f64;
    let var = eers.iter().map(|e| (e - mean_eer).powi(2)).sum::<f64>() / eers.len() as f64;
    Some(AggregateResult {
        n_vectors,
        repetitions,
        mean_eer,
        std_eer: var.sqrt(),
        games_used: eligible.len(),
        games_dropped,
    })
}

/// Aggregation sweep over several sample sizes with per-point derived seeds.
pub fn aggregate_curve(
    scores: &ScoreSet,
    sample_sizes: &[usize],
    repetitions: usize,
    seed: u64,
) -> Vec<AggregateResult> {
    sample_sizes
        .iter()
        .enumerate()
        .filter_map(|(i, &n)| aggregate_games(scores, n, repetitions, seed.wrapping_add(i as u64)))
        .collect()
}
