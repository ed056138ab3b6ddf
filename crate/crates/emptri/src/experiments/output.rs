use std::io::{self, Write};

use emptri_core::stats::{wilson, Moments, Z95};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::ExperimentResult;

/// One estimate with its interval. Deterministic quantities carry a
/// zero-width or error-bar interval and `trials = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateRow {
    pub n: usize,
    pub statistic: String,
    pub mean: f64,
    pub std_err: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub trials: u64,
}

impl EstimateRow {
    /// Sample mean with the normal-approximation interval.
    pub fn mean(n: usize, statistic: &str, m: &Moments) -> Self {
        let (ci_lo, ci_hi) = m.ci95();
        EstimateRow { n, statistic: statistic.into(), mean: m.mean(), std_err: m.std_err(), ci_lo, ci_hi, trials: m.count() }
    }

    /// Same as [`EstimateRow::mean`] with everything multiplied by `factor > 0`.
    pub fn scaled(n: usize, statistic: &str, m: &Moments, factor: f64) -> Self {
        let mut row = EstimateRow::mean(n, statistic, m);
        row.mean *= factor;
        row.std_err *= factor;
        row.ci_lo *= factor;
        row.ci_hi *= factor;
        row
    }

    /// Empirical frequency with the Wilson interval.
    pub fn proportion(n: usize, statistic: &str, hits: u64, trials: u64) -> Self {
        let p = hits as f64 / trials as f64;
        let (ci_lo, ci_hi) = wilson(hits, trials, Z95);
        EstimateRow {
            n,
            statistic: statistic.into(),
            mean: p,
            std_err: (p * (1.0 - p) / trials as f64).sqrt(),
            ci_lo,
            ci_hi,
            trials,
        }
    }

    /// A computed value with an absolute error bound.
    pub fn exact(n: usize, statistic: &str, value: f64, error: f64) -> Self {
        EstimateRow {
            n,
            statistic: statistic.into(),
            mean: value,
            std_err: error / Z95,
            ci_lo: value - error,
            ci_hi: value + error,
            trials: 0,
        }
    }
}

fn header_lines(result: &ExperimentResult) -> Vec<String> {
    vec![
        format!("emptri {} experiment {}", env!("CARGO_PKG_VERSION"), result.experiment),
        format!("seed {}", result.config.seed),
        format!("config {}", serde_json::to_string(&result.config).expect("config serializes")),
    ]
}

/// Comment header, then one CSV line per row.
pub fn write_csv<W: Write>(mut w: W, result: &ExperimentResult) -> io::Result<()> {
    for line in header_lines(result) {
        writeln!(w, "# {line}")?;
    }
    let mut csv = csv::Writer::from_writer(w);
    for row in &result.rows {
        csv.serialize(row).map_err(io::Error::other)?;
    }
    csv.flush()
}

pub fn summary_json(result: &ExperimentResult, frozen: Option<&FrozenOutcome>) -> Value {
    json!({
        "tool": format!("emptri {}", env!("CARGO_PKG_VERSION")),
        "experiment": result.experiment,
        "seed": result.config.seed,
        "config": result.config,
        "rows": result.rows,
        "summary": result.summary,
        "checks": result.checks,
        "frozen": frozen,
    })
}

pub fn write_summary<W: Write>(mut w: W, result: &ExperimentResult, frozen: Option<&FrozenOutcome>) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut w, &summary_json(result, frozen)).map_err(io::Error::other)?;
    writeln!(w)
}

/// Expected value of one row, with an absolute tolerance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrozenExpectation {
    pub experiment: String,
    pub n: usize,
    pub statistic: String,
    pub expected: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrozenFailure {
    pub expectation: FrozenExpectation,
    /// `None` when the row is missing.
    pub observed: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FrozenOutcome {
    pub checked: usize,
    pub failures: Vec<FrozenFailure>,
}

impl FrozenOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Parses a JSON array of [`FrozenExpectation`]s.
pub fn parse_frozen(text: &str) -> Result<Vec<FrozenExpectation>, serde_json::Error> {
    serde_json::from_str(text)
}

/// Checks every expectation that names this experiment.
pub fn compare_frozen(result: &ExperimentResult, expectations: &[FrozenExpectation]) -> FrozenOutcome {
    let mut outcome = FrozenOutcome::default();
    for e in expectations.iter().filter(|e| e.experiment == result.experiment.name()) {
        outcome.checked += 1;
        let observed = result.rows.iter().find(|r| r.n == e.n && r.statistic == e.statistic).map(|r| r.mean);
        let ok = observed.is_some_and(|v| (v - e.expected).abs() <= e.tolerance);
        if !ok {
            outcome.failures.push(FrozenFailure { expectation: e.clone(), observed });
        }
    }
    outcome
}
