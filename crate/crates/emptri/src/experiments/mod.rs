//! Monte Carlo experiments.
//!
//! Every trial draws from its own stream `rng::derive(seed, label, trial)`,
//! where the label encodes the experiment, the sample size and a sub-stream.
//! Trials run on the rayon pool and are collected back in trial order before
//! any floating-point reduction, so outputs are bit-identical for a given
//! configuration regardless of thread count.

mod config;
mod growth;
mod lemma;
mod occupancy;
mod output;
mod pairs;
mod search;

use std::fmt;

use emptri_core::engine::{brute_force_empty_triangles, first_moment, near_pairs, EmptyTriangleReport};
use emptri_core::rng::{self, TrialRng};
use emptri_core::PointSet;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

pub use config::{parse_grid, ConfigError, ConfigPatch, ExperimentConfig, OccupancyEvent};
pub use output::{
    compare_frozen, parse_frozen, summary_json, write_csv, write_summary, EstimateRow, FrozenExpectation, FrozenFailure,
    FrozenOutcome,
};
pub use search::{minimize_f, SearchOutcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    DegGrowth,
    Valtr,
    Ntpairs,
    Tail,
    LemmaAd,
    Transfer,
    Bl,
    OrdertypeSearch,
    MinimizeF,
}

impl Experiment {
    pub const ALL: [Experiment; 9] = [
        Experiment::DegGrowth,
        Experiment::Valtr,
        Experiment::Ntpairs,
        Experiment::Tail,
        Experiment::LemmaAd,
        Experiment::Transfer,
        Experiment::Bl,
        Experiment::OrdertypeSearch,
        Experiment::MinimizeF,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::DegGrowth => "deg-growth",
            Experiment::Valtr => "valtr",
            Experiment::Ntpairs => "ntpairs",
            Experiment::Tail => "tail",
            Experiment::LemmaAd => "lemma-ad",
            Experiment::Transfer => "transfer",
            Experiment::Bl => "bl",
            Experiment::OrdertypeSearch => "ordertype-search",
            Experiment::MinimizeF => "minimize-f",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Experiment {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| ConfigError::Invalid(format!("unknown experiment {s:?}")))
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Core(#[from] emptri_core::Error),
    #[error(transparent)]
    Format(#[from] crate::io::FormatError),
}

/// Counts of identity and bound checks made on generated sets.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantTally {
    /// Reports checked for the handshake identity and the bounds on `f` and `deg`.
    pub reports_checked: u64,
    pub report_violations: u64,
    /// Sets on which both sides of the first-moment inequality were computed.
    pub first_moment_checked: u64,
    pub first_moment_violations: u64,
    pub oracle_checked: u64,
    pub oracle_mismatches: u64,
    /// Description of the first failure, in trial order.
    pub first_failure: Option<String>,
}

impl InvariantTally {
    pub fn is_clean(&self) -> bool {
        self.report_violations == 0 && self.first_moment_violations == 0 && self.oracle_mismatches == 0
    }

    pub fn merge(&mut self, other: &InvariantTally) {
        self.reports_checked += other.reports_checked;
        self.report_violations += other.report_violations;
        self.first_moment_checked += other.first_moment_checked;
        self.first_moment_violations += other.first_moment_violations;
        self.oracle_checked += other.oracle_checked;
        self.oracle_mismatches += other.oracle_mismatches;
        if self.first_failure.is_none() {
            self.first_failure.clone_from(&other.first_failure);
        }
    }

    fn fail(&mut self, what: String) {
        if self.first_failure.is_none() {
            self.first_failure = Some(what);
        }
    }

    /// Identity and bound checks on one report.
    pub fn check_report(&mut self, report: &EmptyTriangleReport, context: &str) {
        self.reports_checked += 1;
        if let Err(v) = report.validate() {
            self.report_violations += 1;
            self.fail(format!("{context}: {v:?}"));
        }
    }

    /// First-moment inequality at threshold `t` (body units).
    pub fn check_first_moment(&mut self, set: &PointSet, report: &EmptyTriangleReport, t: f64, context: &str) {
        let Ok(stat) = near_pairs(set, t, true) else { return };
        let Ok(fm) = first_moment(report, &stat) else { return };
        self.first_moment_checked += 1;
        if !fm.holds() {
            self.first_moment_violations += 1;
            self.fail(format!("{context}: first-moment inequality fails ({fm:?})"));
        }
    }

    /// Compares a report against the brute-force enumerator.
    pub fn check_oracle(&mut self, set: &PointSet, report: &EmptyTriangleReport, context: &str) {
        self.oracle_checked += 1;
        match brute_force_empty_triangles(set, usize::MAX) {
            Ok(reference) if &reference == report => {}
            Ok(reference) => {
                self.oracle_mismatches += 1;
                self.fail(format!("{context}: oracle f = {}, engine f = {}", reference.f, report.f));
            }
            Err(e) => {
                self.oracle_mismatches += 1;
                self.fail(format!("{context}: oracle failed: {e}"));
            }
        }
    }
}

/// Output of one experiment run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentResult {
    pub experiment: Experiment,
    pub config: ExperimentConfig,
    pub rows: Vec<EstimateRow>,
    /// Experiment-specific derived quantities (fits, comparisons, traces).
    pub summary: Map<String, Value>,
    pub checks: InvariantTally,
}

/// Stream label for `(experiment, n, sub-stream)`.
fn stream_label(exp: Experiment, n: usize, stream: u64) -> u64 {
    rng::mix64(((exp as u64) << 56) ^ (stream << 44) ^ n as u64)
}

/// Runs `trial` for `0..trials` on the pool, results in trial order.
fn run_trials<T, F>(cfg: &ExperimentConfig, exp: Experiment, n: usize, stream: u64, trial: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, &mut TrialRng) -> T + Sync,
{
    let label = stream_label(exp, n, stream);
    (0..cfg.trials)
        .into_par_iter()
        .map(|t| trial(t, &mut rng::derive(cfg.seed, label, t)))
        .collect()
}

pub fn run(exp: Experiment, cfg: &ExperimentConfig) -> Result<ExperimentResult, ExperimentError> {
    cfg.validate(exp)?;
    let body = cfg.body_spec(exp).normalized()?;
    let mut result = ExperimentResult {
        experiment: exp,
        config: cfg.clone(),
        rows: Vec::new(),
        summary: Map::new(),
        checks: InvariantTally::default(),
    };
    match exp {
        Experiment::DegGrowth => growth::deg_growth(cfg, &body, &mut result)?,
        Experiment::Valtr => growth::valtr(cfg, &body, &mut result)?,
        Experiment::Ntpairs => pairs::ntpairs(cfg, &body, &mut result)?,
        Experiment::Tail => pairs::tail(cfg, &body, &mut result)?,
        Experiment::LemmaAd => lemma::lemma_ad(cfg, &body, &mut result)?,
        Experiment::Transfer => occupancy::transfer(cfg, &body, &mut result)?,
        Experiment::Bl => occupancy::bl(cfg, &body, &mut result)?,
        Experiment::OrdertypeSearch => occupancy::ordertype_search(cfg, &body, &mut result)?,
        Experiment::MinimizeF => search::run(cfg, &mut result)?,
    }
    Ok(result)
}
