//! Run configuration: one TOML file drives the whole pipeline, from
//! simulation through GAN / detector training to the scenario report.

use std::collections::BTreeSet;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::detector::DetectorConfig;
use crate::error::Error;
use crate::eval::scenarios::{Scenario, SplitSpec};
use crate::gan::GanConfig;
use crate::sim::{HumanModelParams, SimConfig};
use crate::Result;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Paths {
    pub data_dir: PathBuf,
    pub model_dir: PathBuf,
    pub report_dir: PathBuf,
}

impl Default for Paths {
    fn default() -> Self {
        Paths {
            data_dir: PathBuf::from("artifacts/data"),
            model_dir: PathBuf::from("artifacts/models"),
            report_dir: PathBuf::from("artifacts/reports"),
        }
    }
}

/// How many synthetic players to simulate on each side of the split, and
/// how many episodes each of them plays per controller.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct ArchetypeSpec {
    pub train_count: u64,
    pub test_count: u64,
    pub episodes_per_archetype: usize,
}

impl Default for ArchetypeSpec {
    fn default() -> Self {
        ArchetypeSpec {
            train_count: 6,
            test_count: 4,
            episodes_per_archetype: 2,
        }
    }
}

impl ArchetypeSpec {
    /// Train seeds start at 1; test seeds start at an offset well clear of
    /// any reasonable train count, keeping the halves disjoint.
    pub fn train_seeds(&self) -> Vec<u64> {
        (1..=self.train_count).collect()
    }

    pub fn test_seeds(&self) -> Vec<u64> {
        (10_001..=10_000 + self.test_count).collect()
    }

    pub fn split(&self) -> SplitSpec {
        SplitSpec {
            train_archetypes: self.train_seeds().into_iter().collect(),
            test_archetypes: self.test_seeds().into_iter().collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AggregationSpec {
    pub sample_sizes: Vec<usize>,
    pub repetitions: usize,
}

impl Default for AggregationSpec {
    fn default() -> Self {
        AggregationSpec {
            sample_sizes: vec![1, 2, 3, 5, 7, 10, 15, 20, 30],
            repetitions: 200,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub master_seed: u64,
    pub paths: Paths,
    pub sim: SimConfig,
    pub human: HumanModelParams,
    pub archetypes: ArchetypeSpec,
    pub gan: GanConfig,
    pub detector: DetectorConfig,
    pub scenarios: Vec<Scenario>,
    pub dcf_priors: Vec<f64>,
    pub aggregation: AggregationSpec,
    /// Frame stride between consecutive GAN training windows.
    pub gan_window_stride: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            master_seed: 2024,
            paths: Paths::default(),
            sim: SimConfig::default(),
            human: HumanModelParams::default(),
            archetypes: ArchetypeSpec::default(),
            gan: GanConfig::default(),
            detector: DetectorConfig::default(),
            scenarios: Scenario::ALL.to_vec(),
            dcf_priors: vec![0.5, 0.25, 0.1, 0.01],
            aggregation: AggregationSpec::default(),
            gan_window_stride: 7,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        self.sim.validate().map_err(Error::Config)?;
        self.human.validate().map_err(Error::Config)?;
        self.gan.validate()?;
        if self.detector.learning_rate <= 0.0
            || self.detector.epochs == 0
            || self.detector.batch_size == 0
            || !(0.0 < self.detector.validation_fraction && self.detector.validation_fraction < 1.0)
            || self.detector.hidden == 0
        {
            return Err(Error::Config("invalid detector hyperparameters".into()));
        }
        if self.dcf_priors.is_empty() || self.dcf_priors.iter().any(|p| !(0.0 < *p && *p < 1.0)) {
            return Err(Error::Config("dcf_priors must lie in (0,1)".into()));
        }
        if self.scenarios.is_empty() {
            return Err(Error::Config("at least one scenario required".into()));
        }
        let distinct_scenarios: BTreeSet<_> = self.scenarios.iter().collect();
        if distinct_scenarios.len() != self.scenarios.len() {
            return Err(Error::Config("duplicate scenario listed".into()));
        }
        let dirs = [&self.paths.data_dir, &self.paths.model_dir, &self.paths.report_dir];
        let distinct_paths: BTreeSet<_> = dirs.iter().collect();
        if distinct_paths.len() != dirs.len() {
            return Err(Error::Config("data/model/report dirs must be distinct".into()));
        }
        if self.archetypes.train_count == 0
            || self.archetypes.test_count == 0
            || self.archetypes.episodes_per_archetype == 0
        {
            return Err(Error::Config("archetype counts must be positive".into()));
        }
        if self.archetypes.train_count > 10_000 {
            return Err(Error::Config("train_count exceeds the test-seed offset".into()));
        }
        if self.aggregation.repetitions == 0 || self.aggregation.sample_sizes.is_empty() {
            return Err(Error::Config("aggregation needs samples and repetitions".into()));
        }
        if self.gan_window_stride == 0 {
            return Err(Error::Config("gan_window_stride must be >= 1".into()));
        }
        self.archetypes.split().validate()?;
        Ok(())
    }

    /// Parses and validates a TOML document; missing fields take defaults.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let config: RunConfig =
            toml::from_str(text).map_err(|e| Error::Config(format!("config parse: {e}")))?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string_pretty(self).expect("RunConfig serializes")
    }
}
