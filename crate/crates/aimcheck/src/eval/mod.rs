//! Metrics and experiment protocols.

pub mod aggregate;
pub mod metrics;
pub mod scenarios;
pub mod stats;

pub use aggregate::{aggregate_curve, aggregate_games, AggregateResult};
pub use metrics::{
    balanced_accuracy, det_points, eer, min_dcf, DcfParams, DetPoint, ScoreEntry, ScoreSet,
};
pub use scenarios::{
    cell_applicable, run_scenarios, train_scenario_detector, Scenario, ScenarioDatasets,
    ScenarioReport, ScenarioRow, SplitSpec,
};
pub use stats::{movement_stats, MovementStats};
