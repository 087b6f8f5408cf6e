//! The four threat scenarios: worst-case, known-attack, oracle, and
//! train-on-test. Each scenario trains a detector on one episode mix and
//! scores a test mix, reporting EER and normalized min-DCF per prior.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::detector::{score, train_detector, DetectorConfig};
use crate::error::Error;
use crate::eval::metrics::{eer, min_dcf, DcfParams, ScoreSet};
use crate::features::extract_feature_vectors;
use crate::types::{Controller, EpisodeRecord, FeatureVector};
use crate::Result;

/// Episodes per controller, each covering both train and test archetypes.
#[derive(Debug, Clone, Default)]
pub struct ScenarioDatasets {
    pub human: Vec<EpisodeRecord>,
    pub light: Vec<EpisodeRecord>,
    pub strong: Vec<EpisodeRecord>,
    pub gan1: Vec<EpisodeRecord>,
    pub gan2: Vec<EpisodeRecord>,
}

impl ScenarioDatasets {
    fn episodes_for(&self, c: Controller) -> &[EpisodeRecord] {
        match c {
            Controller::HumanModel => &self.human,
            Controller::Light => &self.light,
            Controller::Strong => &self.strong,
            Controller::GanGroup1 => &self.gan1,
            Controller::GanGroup2 => &self.gan2,
        }
    }
}

/// Archetype-seed-wise train/test split, the simulator's analog of a
/// player-wise split.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub train_archetypes: BTreeSet<u64>,
    pub test_archetypes: BTreeSet<u64>,
}

impl SplitSpec {
    pub fn validate(&self) -> Result<()> {
        if let Some(&seed) = self
            .train_archetypes
            .intersection(&self.test_archetypes)
            .next()
        {
            return Err(Error::SplitLeakage(seed));
        }
        if self.train_archetypes.is_empty() || self.test_archetypes.is_empty() {
            return Err(Error::Config("both split halves must be non-empty".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Scenario {
    WorstCase,
    KnownAttack,
    Oracle,
    TrainOnTest,
}

impl Scenario {
    pub fn as_str(&self) -> &'static str {
        match self {
            Scenario::WorstCase => "worst-case",
            Scenario::KnownAttack => "known-attack",
            Scenario::Oracle => "oracle",
            Scenario::TrainOnTest => "train-on-test",
        }
    }

    pub const ALL: [Scenario; 4] = [
        Scenario::WorstCase,
        Scenario::KnownAttack,
        Scenario::Oracle,
        Scenario::TrainOnTest,
    ];
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScenarioRow {
    pub scenario: Scenario,
    pub aimbot: Controller,
    /// False when the scenario does not apply to this aimbot
    /// (heuristics have no worst-case row).
    pub applicable: bool,
    pub eer: Option<f64>,
    /// (prior, normalized min-DCF) pairs, one per configured prior.
    pub min_dcf: Vec<(f64, f64)>,
    /// Per-vector scores of the test set, kept for game aggregation.
    pub scores: ScoreSet,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub rows: Vec<ScenarioRow>,
    pub priors: Vec<f64>,
}

impl ScenarioReport {
    pub fn row(&self, scenario: Scenario, aimbot: Controller) -> Option<&ScenarioRow> {
        self.rows
            .iter()
            .find(|r| r.scenario == scenario && r.aimbot == aimbot)
    }
}

const AIMBOTS: [Controller; 4] = [
    Controller::Light,
    Controller::Strong,
    Controller::GanGroup1,
    Controller::GanGroup2,
];

fn vectors_for(episodes: &[EpisodeRecord], archetypes: &BTreeSet<u64>) -> Vec<FeatureVector> {
    episodes
        .iter()
        .filter(|ep| archetypes.contains(&ep.human_archetype_seed))
        .flat_map(extract_feature_vectors)
        .collect()
}

fn all_vectors(episodes: &[EpisodeRecord]) -> Vec<FeatureVector> {
    episodes.iter().flat_map(extract_feature_vectors).collect()
}

/// Training mix for one (scenario, aimbot) cell: bona fide vectors plus the
/// cheat vectors the defender is assumed to possess.
fn training_mix(
    datasets: &ScenarioDatasets,
    split: &SplitSpec,
    scenario: Scenario,
    aimbot: Controller,
) -> Vec<FeatureVector> {
    let train = &split.train_archetypes;
    let mut mix = match scenario {
        Scenario::TrainOnTest => all_vectors(&datasets.human),
        _ => vectors_for(&datasets.human, train),
    };
    match scenario {
        Scenario::WorstCase => {
            mix.extend(vectors_for(&datasets.light, train));
            mix.extend(vectors_for(&datasets.strong, train));
        }
        Scenario::KnownAttack => {
            let sibling = match aimbot {
                Controller::Light => Controller::Strong,
                Controller::Strong => Controller::Light,
                Controller::GanGroup1 => Controller::GanGroup2,
                Controller::GanGroup2 => Controller::GanGroup1,
                Controller::HumanModel => unreachable!("aimbot rows only"),
            };
            mix.extend(vectors_for(datasets.episodes_for(sibling), train));
        }
        Scenario::Oracle => {
            mix.extend(vectors_for(datasets.episodes_for(aimbot), train));
        }
        Scenario::TrainOnTest => {
            // one classifier per aimbot family, fed every episode including
            // the ones it will be tested on
            let family: [Controller; 2] = match aimbot {
                Controller::Light | Controller::Strong => [Controller::Light, Controller::Strong],
                _ => [Controller::GanGroup1, Controller::GanGroup2],
            };
            for c in family {
                mix.extend(all_vectors(datasets.episodes_for(c)));
            }
        }
    }
    mix
}

/// Whether a (scenario, aimbot) cell exists in the report at all.
pub fn cell_applicable(scenario: Scenario, aimbot: Controller) -> bool {
    !(scenario == Scenario::WorstCase
        && matches!(aimbot, Controller::Light | Controller::Strong))
}

/// Trains the detector for one applicable (scenario, aimbot) cell.
pub fn train_scenario_detector(
    datasets: &ScenarioDatasets,
    split: &SplitSpec,
    config: &DetectorConfig,
    scenario: Scenario,
    aimbot: Controller,
    seed: u64,
) -> Result<(crate::detector::DetectorModel, crate::detector::DetectorTrainLog)> {
    if !cell_applicable(scenario, aimbot) {
        return Err(Error::Config(format!(
            "no {} detector for {}",
            scenario.as_str(),
            aimbot.as_str()
        )));
    }
    if scenario != Scenario::TrainOnTest {
        split.validate()?;
    }
    let mix = training_mix(datasets, split, scenario, aimbot);
    let manifest = format!("{}:{}", scenario.as_str(), aimbot.as_str());
    train_detector(&mix, config, cell_seed(seed, scenario, aimbot), &manifest)
}

fn cell_seed(base: u64, scenario: Scenario, aimbot: Controller) -> u64 {
    let s = Scenario::ALL.iter().position(|x| *x == scenario).unwrap() as u64;
    let a = AIMBOTS.iter().position(|x| *x == aimbot).unwrap() as u64;
    base.wrapping_add(1 + s * 16 + a)
}

/// Runs the requested scenarios for all four aimbots. Non-train-on-test
/// scenarios enforce archetype-disjoint splits; heuristic aimbots get an
/// inapplicable worst-case row.
pub fn run_scenarios(
    datasets: &ScenarioDatasets,
    split: &SplitSpec,
    config: &DetectorConfig,
    priors: &[f64],
    scenarios: &[Scenario],
    seed: u64,
) -> Result<ScenarioReport> {
    split.validate()?;
    for p in priors {
        DcfParams::unit_costs(*p).validate()?;
    }

    let mut rows = Vec::new();
    for &scenario in scenarios {
        for aimbot in AIMBOTS {
            if !cell_applicable(scenario, aimbot) {
                rows.push(ScenarioRow {
                    scenario,
                    aimbot,
                    applicable: false,
                    eer: None,
                    min_dcf: Vec::new(),
                    scores: ScoreSet::default(),
                });
                continue;
            }

            let (model, _) =
                train_scenario_detector(datasets, split, config, scenario, aimbot, seed)?;

            let mut scores = ScoreSet::default();
            let test = &split.test_archetypes;
            for v in vectors_for(&datasets.human, test)
                .iter()
                .chain(vectors_for(datasets.episodes_for(aimbot), test).iter())
            {
                scores.push(score(&model, v), v.label, v.game_id.clone());
            }

            let row_eer = eer(&scores)?;
            let dcfs = priors
                .iter()
                .map(|&p| Ok((p, min_dcf(&scores, &DcfParams::unit_costs(p))?)))
                .collect::<Result<Vec<_>>>()?;
            rows.push(ScenarioRow {
                scenario,
                aimbot,
                applicable: true,
                eer: Some(row_eer),
                min_dcf: dcfs,
                scores,
            });
        }
    }

    Ok(ScenarioReport {
        rows,
        priors: priors.to_vec(),
    })
}
