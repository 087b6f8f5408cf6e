//! Brute-force threshold enumeration as an independent oracle for the
//! threshold-sweep metrics, plus monotone-transform invariance.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use aimcheck::eval::metrics::{balanced_accuracy, det_points, eer, min_dcf, DcfParams, ScoreSet};

fn random_set(rng: &mut ChaCha8Rng) -> ScoreSet {
    let n = rng.gen_range(4..=1000);
    // sometimes draw from a coarse grid to force ties
    let coarse = rng.gen_bool(0.4);
    let mut set = ScoreSet::default();
    loop {
        set.entries.clear();
        for i in 0..n {
            let score = if coarse {
                (rng.gen_range(-5i32..=5)) as f64 * 0.5
            } else {
                rng.gen_range(-4.0..4.0)
            };
            set.push(score, u8::from(rng.gen_bool(0.5)), format!("g{i}"));
        }
        let pos = set.entries.iter().filter(|e| e.label == 1).count();
        if pos > 0 && pos < set.entries.len() {
            return set;
        }
    }
}

/// (fpr, fnr) at one threshold by direct counting: score >= t flags hacker.
fn rates_at(set: &ScoreSet, t: f64) -> (f64, f64) {
    let mut fp = 0usize;
    let mut tn = 0usize;
    let mut fnr_count = 0usize;
    let mut tp = 0usize;
    for e in &set.entries {
        let flagged = e.score >= t;
        match (e.label, flagged) {
            (0, true) => fp += 1,
            (0, false) => tn += 1,
            (1, true) => tp += 1,
            (1, false) => fnr_count += 1,
            _ => unreachable!(),
        }
    }
    (
        fp as f64 / (fp + tn) as f64,
        fnr_count as f64 / (tp + fnr_count) as f64,
    )
}

fn thresholds(set: &ScoreSet) -> Vec<f64> {
    let mut t: Vec<f64> = set.entries.iter().map(|e| e.score).collect();
    t.push(f64::NEG_INFINITY);
    t.push(f64::INFINITY);
    t.sort_by(|a, b| a.partial_cmp(b).unwrap());
    t.dedup();
    t
}

#[test]
fn det_points_match_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    for _ in 0..50 {
        let set = random_set(&mut rng);
        let points = det_points(&set).unwrap();
        assert_eq!(points.len(), thresholds(&set).len());
        for p in &points {
            let (fpr, fnr) = rates_at(&set, p.threshold);
            assert_eq!(p.fpr, fpr, "fpr at {}", p.threshold);
            assert_eq!(p.fnr, fnr, "fnr at {}", p.threshold);
        }
    }
}

#[test]
fn eer_matches_brute_force_within_discretization_slack() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for _ in 0..50 {
        let set = random_set(&mut rng);
        let brute = thresholds(&set)
            .iter()
            .map(|&t| rates_at(&set, t))
            .min_by(|a, b| {
                let da = (a.0 - a.1).abs();
                let db = (b.0 - b.1).abs();
                da.partial_cmp(&db).unwrap()
            })
            .map(|(fpr, fnr)| (fpr + fnr) / 2.0)
            .unwrap();
        let smooth = eer(&set).unwrap();
        let pos = set.entries.iter().filter(|e| e.label == 1).count();
        let neg = set.entries.len() - pos;
        // discretization slack: one staircase step. Tied scores move k/P and
        // m/N of the rates at once, so the step is the largest tie mass.
        let mut masses: std::collections::BTreeMap<u64, (usize, usize)> = Default::default();
        for e in &set.entries {
            let slot = masses.entry(e.score.to_bits()).or_default();
            if e.label == 1 {
                slot.0 += 1;
            } else {
                slot.1 += 1;
            }
        }
        let max_step = masses
            .values()
            .map(|&(k, m)| (k as f64 / pos as f64 + m as f64 / neg as f64) / 2.0)
            .fold(0.0f64, f64::max);
        let slack = max_step.max(1.0 / (2.0 * pos.min(neg) as f64)) + 1e-12;
        assert!(
            (smooth - brute).abs() <= slack,
            "eer {smooth} vs brute {brute}, slack {slack}"
        );
    }
}

#[test]
fn min_dcf_matches_brute_force_minimum() {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    for _ in 0..50 {
        let set = random_set(&mut rng);
        for p_hacker in [0.5, 0.25, 0.1, 0.01] {
            let params = DcfParams::unit_costs(p_hacker);
            let floor = (p_hacker).min(1.0 - p_hacker);
            let brute = thresholds(&set)
                .iter()
                .map(|&t| {
                    let (fpr, fnr) = rates_at(&set, t);
                    (p_hacker * fnr + (1.0 - p_hacker) * fpr) / floor
                })
                .fold(f64::INFINITY, f64::min);
            let got = min_dcf(&set, &params).unwrap();
            assert!((got - brute).abs() < 1e-12, "min_dcf {got} vs brute {brute}");
            // minimality: never above the cost at any individual threshold
            for &t in &thresholds(&set) {
                let (fpr, fnr) = rates_at(&set, t);
                let cost = (p_hacker * fnr + (1.0 - p_hacker) * fpr) / floor;
                assert!(got <= cost + 1e-12);
            }
        }
    }
}

#[test]
fn balanced_accuracy_matches_brute_force_rates() {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    for _ in 0..50 {
        let set = random_set(&mut rng);
        for &t in thresholds(&set).iter().step_by(7) {
            let (fpr, fnr) = rates_at(&set, t);
            let predictions: Vec<u8> = set
                .entries
                .iter()
                .map(|e| u8::from(e.score >= t))
                .collect();
            let labels: Vec<u8> = set.entries.iter().map(|e| e.label).collect();
            let got = balanced_accuracy(&predictions, &labels).unwrap();
            let expected = 1.0 - (fpr + fnr) / 2.0;
            assert!((got - expected).abs() < 1e-12, "{got} vs {expected}");
        }
    }
}

#[test]
fn uninformative_set_normalizes_to_exactly_one() {
    let mut set = ScoreSet::default();
    for i in 0..40 {
        set.push(0.125, (i % 2) as u8, format!("g{i}"));
    }
    for p in [0.5, 0.25, 0.1, 0.01] {
        assert_eq!(min_dcf(&set, &DcfParams::unit_costs(p)).unwrap(), 1.0);
    }
}

#[test]
fn metrics_invariant_under_strictly_increasing_transforms() {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let transforms: [fn(f64) -> f64; 2] = [|s| 2.5 * s + 3.0, |s| (0.4 * s).tanh()];
    for _ in 0..20 {
        let set = random_set(&mut rng);
        let base_eer = eer(&set).unwrap();
        let base_points = det_points(&set).unwrap();
        for f in transforms {
            let mut warped = set.clone();
            for e in &mut warped.entries {
                e.score = f(e.score);
            }
            assert_eq!(eer(&warped).unwrap(), base_eer);
            let warped_points = det_points(&warped).unwrap();
            assert_eq!(warped_points.len(), base_points.len());
            for (a, b) in base_points.iter().zip(&warped_points) {
                assert_eq!(a.fpr, b.fpr);
                assert_eq!(a.fnr, b.fnr);
            }
            for p in [0.5, 0.1] {
                let params = DcfParams::unit_costs(p);
                assert_eq!(min_dcf(&warped, &params).unwrap(), min_dcf(&set, &params).unwrap());
            }
        }
    }
}
