//! Threshold-sweep detection metrics: DET points, EER, normalized minimum
//! DCF and balanced accuracy.
//!
//! Convention: a positive decision (score >= threshold) flags a hacker;
//! label 1 is the hacker class. FPR is the fraction of bona fide entries
//! flagged, FNR the fraction of hackers missed.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreEntry {
    pub score: f64,
    pub label: u8,
    pub game_id: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ScoreSet {
    pub entries: Vec<ScoreEntry>,
}

impl ScoreSet {
    pub fn new(entries: Vec<ScoreEntry>) -> Self {
        ScoreSet { entries }
    }

    pub fn push(&mut self, score: f64, label: u8, game_id: impl Into<String>) {
        self.entries.push(ScoreEntry {
            score,
            label,
            game_id: game_id.into(),
        });
    }

    fn counts(&self) -> (usize, usize) {
        let pos = self.entries.iter().filter(|e| e.label == 1).count();
        (pos, self.entries.len() - pos)
    }

    fn require_both_labels(&self) -> Result<()> {
        let (pos, neg) = self.counts();
        if pos == 0 || neg == 0 {
            return Err(Error::SingleClass);
        }
        Ok(())
    }
}

/// DCF parameters: hacker prior and the two error costs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DcfParams {
    pub p_hacker: f64,
    pub cost_fp: f64,
    pub cost_fn: f64,
}

impl DcfParams {
    pub fn unit_costs(p_hacker: f64) -> Self {
        DcfParams {
            p_hacker,
            cost_fp: 1.0,
            cost_fn: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0 < self.p_hacker && self.p_hacker < 1.0) {
            return Err(Error::Config("p_hacker must be in (0,1)".into()));
        }
        if self.cost_fp < 0.0 || self.cost_fn < 0.0 || self.cost_fp + self.cost_fn <= 0.0 {
            return Err(Error::Config("costs must be non-negative with positive sum".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetPoint {
    pub threshold: f64,
    pub fpr: f64,
    pub fnr: f64,
}

/// Exact sweep over every distinct score plus -inf/+inf sentinels. FPR is
/// non-increasing and FNR non-decreasing in the threshold; tied scores share
/// a threshold.
pub fn det_points(set: &ScoreSet) -> Result<Vec<DetPoint>> {
    set.require_both_labels()?;
    let (n_pos, n_neg) = set.counts();
    let mut sorted: Vec<(f64, u8)> = set.entries.iter().map(|e| (e.score, e.label)).collect();
    sorted.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite scores"));

    let mut points = vec![DetPoint {
        threshold: f64::NEG_INFINITY,
        fpr: 1.0,
        fnr: 0.0,
    }];
    // pos_below/neg_below: entries strictly below the current threshold
    let mut pos_below = 0usize;
    let mut neg_below = 0usize;
    let mut i = 0;
    while i < sorted.len() {
        let t = sorted[i].0;
        let mut j = i;
        while j < sorted.len() && sorted[j].0 == t {
            j += 1;
        }
        points.push(DetPoint {
            threshold: t,
            fpr: (n_neg - neg_below) as f64 / n_neg as f64,
            fnr: pos_below as f64 / n_pos as f64,
        });
        for k in i..j {
            if sorted[k].1 == 1 {
                pos_below += 1;
            } else {
                neg_below += 1;
            }
        }
        i = j;
    }
    points.push(DetPoint {
        threshold: f64::INFINITY,
        fpr: 0.0,
        fnr: 1.0,
    });
    Ok(points)
}

/// Equal error rate: the crossing of the FPR and FNR staircases, linearly
/// interpolated between adjacent thresholds, reported as (FPR+FNR)/2 at the
/// crossing.
pub fn eer(set: &ScoreSet) -> Result<f64> {
    let points = det_points(set)?;
    // diff = FNR - FPR runs from -1 to +1 as the threshold rises
    for w in points.windows(2) {
        let (a, b) = (w[0], w[1]);
        let da = a.fnr - a.fpr;
        let db = b.fnr - b.fpr;
        if da == 0.0 {
            return Ok((a.fpr + a.fnr) / 2.0);
        }
        if da < 0.0 && db >= 0.0 {
            if db == 0.0 {
                return Ok((b.fpr + b.fnr) / 2.0);
            }
            let lambda = -da / (db - da);
            let fpr = a.fpr + lambda * (b.fpr - a.fpr);
            let fnr = a.fnr + lambda * (b.fnr - a.fnr);
            return Ok((fpr + fnr) / 2.0);
        }
    }
    // diff starts at -1 and ends at +1, so a crossing always exists
    unreachable!("no EER crossing found")
}

/// Minimum normalized detection cost over all thresholds (including the
/// all-accept and all-reject extremes). 1.0 means the classifier is no
/// better than a constant decision.
pub fn min_dcf(set: &ScoreSet, params: &DcfParams) -> Result<f64> {
    params.validate()?;
    let points = det_points(set)?;
    let floor = (params.p_hacker * params.cost_fn).min((1.0 - params.p_hacker) * params.cost_fp);
    let best = points
        .iter()
        .map(|p| {
            params.p_hacker * params.cost_fn * p.fnr
                + (1.0 - params.p_hacker) * params.cost_fp * p.fpr
        })
        .fold(f64::INFINITY, f64::min);
    Ok(best / floor)
}

/// Mean of the per-class accuracies.
pub fn balanced_accuracy(predictions: &[u8], labels: &[u8]) -> Result<f64> {
    assert_eq!(predictions.len(), labels.len());
    let mut correct = [0usize; 2];
    let mut total = [0usize; 2];
    for (&p, &l) in predictions.iter().zip(labels) {
        total[l as usize] += 1;
        if p == l {
            correct[l as usize] += 1;
        }
    }
    if total[0] == 0 || total[1] == 0 {
        return Err(Error::SingleClass);
    }
    let acc_neg = correct[0] as f64 / total[0] as f64;
    let acc_pos = correct[1] as f64 / total[1] as f64;
    Ok((acc_pos + acc_neg) / 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(pairs: &[(f64, u8)]) -> ScoreSet {
        ScoreSet::new(
            pairs
                .iter()
                .enumerate()
                .map(|(i, &(score, label))| ScoreEntry {
                    score,
                    label,
                    game_id: format!("g{i}"),
                })
                .collect(),
        )
    }

    #[test]
    fn perfect_separation() {
        let s = set(&[(-2.0, 0), (-1.0, 0), (1.0, 1), (2.0, 1)]);
        let points = det_points(&s).unwrap();
        assert!(points.iter().any(|p| p.fpr == 0.0 && p.fnr == 0.0));
        assert_eq!(eer(&s).unwrap(), 0.0);
        assert_eq!(min_dcf(&s, &DcfParams::unit_costs(0.25)).unwrap(), 0.0);
    }

    #[test]
    fn identical_scores_only_corners() {
        let s = set(&[(0.5, 0), (0.5, 1), (0.5, 0), (0.5, 1)]);
        let points = det_points(&s).unwrap();
        // -inf, the shared score, +inf
        assert_eq!(points.len(), 3);
        assert_eq!((points[0].fpr, points[0].fnr), (1.0, 0.0));
        assert_eq!((points[1].fpr, points[1].fnr), (1.0, 0.0));
        assert_eq!((points[2].fpr, points[2].fnr), (0.0, 1.0));
        // a constant score carries no information
        let d = min_dcf(&s, &DcfParams::unit_costs(0.1)).unwrap();
        assert_eq!(d, 1.0);
    }

    #[test]
    fn staircase_monotone() {
        let s = set(&[(-1.0, 0), (0.0, 0), (0.5, 1), (2.0, 1), (0.2, 0), (0.1, 1)]);
        let points = det_points(&s).unwrap();
        for w in points.windows(2) {
            assert!(w[1].fpr <= w[0].fpr);
            assert!(w[1].fnr >= w[0].fnr);
        }
    }

    #[test]
    fn four_point_hand_staircase() {
        // {(-1,0),(0,0),(0.5,1),(2,1)}: separable
        let s = set(&[(-1.0, 0), (0.0, 0), (0.5, 1), (2.0, 1)]);
        let points = det_points(&s).unwrap();
        let expect = [
            (f64::NEG_INFINITY, 1.0, 0.0),
            (-1.0, 1.0, 0.0),
            (0.0, 0.5, 0.0),
            (0.5, 0.0, 0.0),
            (2.0, 0.0, 0.5),
            (f64::INFINITY, 0.0, 1.0),
        ];
        assert_eq!(points.len(), expect.len());
        for (p, &(t, fpr, fnr)) in points.iter().zip(&expect) {
            assert_eq!(p.threshold, t);
            assert_eq!(p.fpr, fpr);
            assert_eq!(p.fnr, fnr);
        }
    }

    #[test]
    fn balanced_accuracy_examples() {
        assert_eq!(balanced_accuracy(&[0, 1], &[0, 1]).unwrap(), 1.0);
        // always positive on a 90/10 split
        let labels: Vec<u8> = [vec![0u8; 9], vec![1u8; 1]].concat();
        let preds = vec![1u8; 10];
        assert_eq!(balanced_accuracy(&preds, &labels).unwrap(), 0.5);
        // TP=3, FN=1, TN=2, FP=2 -> (0.75 + 0.5)/2
        let labels = [1, 1, 1, 1, 0, 0, 0, 0];
        let preds = [1, 1, 1, 0, 0, 0, 1, 1];
        assert_eq!(balanced_accuracy(&preds, &labels).unwrap(), 0.625);
    }

    #[test]
    fn single_label_rejected() {
        let s = set(&[(0.0, 1), (1.0, 1)]);
        assert!(det_points(&s).is_err());
        assert!(eer(&s).is_err());
        assert!(min_dcf(&s, &DcfParams::unit_costs(0.5)).is_err());
        assert!(balanced_accuracy(&[1, 1], &[1, 1]).is_err());
    }

    #[test]
    fn dcf_params_validation() {
        assert!(DcfParams::unit_costs(0.0).validate().is_err());
        assert!(DcfParams {
            p_hacker: 0.5,
            cost_fp: 0.0,
            cost_fn: 0.0
        }
        .validate()
        .is_err());
    }
}
