use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::Experiment;
use crate::io::BodySpec;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("invalid configuration: {0}")]
    Invalid(String),
    #[error("cannot parse configuration: {0}")]
    Parse(String),
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError::Invalid(msg.into()))
}

/// Predicate on the occupancy vector `(N_1, ..., N_M)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum OccupancyEvent {
    Always,
    /// Some square holds at least `m` points.
    MaxAtLeast { m: u32 },
    /// At least `j` squares hold exactly `k` points.
    Exactly { k: u32, j: usize },
    /// The first square is empty.
    FirstEmpty,
}

impl OccupancyEvent {
    pub fn holds(&self, counts: &[u32]) -> bool {
        match *self {
            OccupancyEvent::Always => true,
            OccupancyEvent::MaxAtLeast { m } => counts.iter().any(|&c| c >= m),
            OccupancyEvent::Exactly { k, j } => counts.iter().filter(|&&c| c == k).count() >= j,
            OccupancyEvent::FirstEmpty => counts.first() == Some(&0),
        }
    }
}

impl fmt::Display for OccupancyEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OccupancyEvent::Always => write!(f, "always"),
            OccupancyEvent::MaxAtLeast { m } => write!(f, "max>={m}"),
            OccupancyEvent::Exactly { k, j } => write!(f, "exactly:{k}:{j}"),
            OccupancyEvent::FirstEmpty => write!(f, "first-empty"),
        }
    }
}

/// `always`, `max>=M`, `exactly:K:J` or `first-empty`.
impl FromStr for OccupancyEvent {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        let bad = || ConfigError::Parse(format!("unknown event {s:?}"));
        match s {
            "always" => Ok(OccupancyEvent::Always),
            "first-empty" => Ok(OccupancyEvent::FirstEmpty),
            _ => {
                if let Some(m) = s.strip_prefix("max>=") {
                    return Ok(OccupancyEvent::MaxAtLeast { m: m.parse().map_err(|_| bad())? });
                }
                let mut parts = s.strip_prefix("exactly:").ok_or_else(bad)?.split(':');
                let (Some(k), Some(j), None) = (parts.next(), parts.next(), parts.next()) else {
                    return Err(bad());
                };
                Ok(OccupancyEvent::Exactly { k: k.parse().map_err(|_| bad())?, j: j.parse().map_err(|_| bad())? })
            }
        }
    }
}

/// Fully resolved parameters of one experiment run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    /// `None` selects the experiment's default body.
    pub body: Option<BodySpec>,
    pub n_grid: Vec<usize>,
    pub trials: u64,
    pub seed: u64,
    /// `T = t_alpha / n`.
    pub t_alpha: f64,
    /// `K_n = k_factor * ln n`, reported next to the tail threshold.
    pub k_factor: f64,
    /// `L` in `B_L`.
    pub l: usize,
    pub out: Option<PathBuf>,
    /// Cross-check engine reports against the brute-force enumerator.
    pub oracle: bool,
    /// Largest `n` the oracle is run on.
    pub oracle_limit: usize,
    /// Require general position of the whole sample even where only local
    /// configurations are inspected.
    pub check_general_position: bool,
    /// The fixed pair of the expected-degree experiment, in body coordinates.
    pub pair: Option<[[f64; 2]; 2]>,
    pub event: OccupancyEvent,
    /// Order-type label `k:signs`, or `convex:k`.
    pub target: String,
    /// Hill-climbing steps per restart.
    pub iterations: u64,
}

impl ExperimentConfig {
    /// Defaults sized for the documented runs of each experiment.
    pub fn defaults(exp: Experiment) -> Self {
        let (n_grid, trials): (Vec<usize>, u64) = match exp {
            Experiment::DegGrowth => (vec![100, 200, 400, 800], 200),
            Experiment::Valtr => (vec![100, 200, 400, 800], 100),
            Experiment::Ntpairs => (vec![2000], 1000),
            Experiment::Tail => (vec![500], 10_000),
            Experiment::LemmaAd => (vec![100], 2000),
            Experiment::Transfer => (vec![100, 400, 1600], 2000),
            Experiment::Bl | Experiment::OrdertypeSearch => (vec![200, 800, 3200], 200),
            Experiment::MinimizeF => (vec![10], 1),
        };
        ExperimentConfig {
            body: None,
            n_grid,
            trials,
            seed: 1,
            t_alpha: 2.0,
            k_factor: 3.0 * 145.0,
            l: 6,
            out: None,
            oracle: false,
            oracle_limit: 128,
            check_general_position: false,
            pair: None,
            event: OccupancyEvent::MaxAtLeast { m: 5 },
            target: "convex:5".into(),
            iterations: 100_000,
        }
    }

    /// The body to sample from, before normalization.
    pub fn body_spec(&self, exp: Experiment) -> BodySpec {
        match (&self.body, exp) {
            (Some(b), _) => b.clone(),
            (None, Experiment::Ntpairs | Experiment::Tail) => BodySpec::disk(),
            (None, _) => BodySpec::square(),
        }
    }

    pub fn target_label(&self) -> Result<emptri_core::order_type::OrderTypeLabel, ConfigError> {
        use emptri_core::order_type::OrderTypeLabel;
        let label = match self.target.strip_prefix("convex:") {
            Some(k) => {
                let k: usize = k.parse().map_err(|_| ConfigError::Parse(format!("bad target {:?}", self.target)))?;
                OrderTypeLabel::convex(k)
            }
            None => self.target.parse(),
        };
        label.map_err(|e| ConfigError::Invalid(format!("target {:?}: {e}", self.target)))
    }

    pub fn validate(&self, exp: Experiment) -> Result<(), ConfigError> {
        if self.trials == 0 {
            return invalid("trials must be at least 1");
        }
        if self.n_grid.is_empty() {
            return invalid("n_grid is empty");
        }
        if self.n_grid.windows(2).any(|w| w[0] >= w[1]) {
            return invalid("n_grid must be strictly increasing");
        }
        if !(self.t_alpha > 0.0 && self.t_alpha.is_finite()) {
            return invalid("t_alpha must be positive");
        }
        let min_n = match exp {
            Experiment::DegGrowth | Experiment::Valtr | Experiment::LemmaAd => 3,
            Experiment::MinimizeF => 5,
            Experiment::Ntpairs | Experiment::Tail => 2,
            Experiment::Transfer | Experiment::Bl | Experiment::OrdertypeSearch => 2,
        };
        if self.n_grid[0] < min_n {
            return invalid(format!("{exp} needs n >= {min_n}"));
        }
        if matches!(exp, Experiment::Transfer | Experiment::Bl | Experiment::OrdertypeSearch)
            && self.n_grid.iter().any(|n| n % 2 == 1)
        {
            return invalid("grid experiments need even n");
        }
        if exp == Experiment::OrdertypeSearch {
            self.target_label()?;
        }
        if exp == Experiment::MinimizeF && self.iterations == 0 {
            return invalid("iterations must be at least 1");
        }
        Ok(())
    }
}

/// Partial configuration, as read from a JSON file or assembled from flags.
/// Later patches override earlier ones field by field.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConfigPatch {
    pub body: Option<BodySpec>,
    pub n_grid: Option<Vec<usize>>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub t_alpha: Option<f64>,
    pub k_factor: Option<f64>,
    pub l: Option<usize>,
    pub out: Option<PathBuf>,
    pub oracle: Option<bool>,
    pub oracle_limit: Option<usize>,
    pub check_general_position: Option<bool>,
    pub pair: Option<[[f64; 2]; 2]>,
    pub event: Option<OccupancyEvent>,
    pub target: Option<String>,
    pub iterations: Option<u64>,
}

impl ConfigPatch {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        serde_json::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))
    }

    pub fn apply(self, cfg: &mut ExperimentConfig) {
        macro_rules! set {
            ($($field:ident),*) => {
                $(if let Some(v) = self.$field { cfg.$field = v; })*
            };
        }
        if self.body.is_some() {
            cfg.body = self.body;
        }
        if self.out.is_some() {
            cfg.out = self.out;
        }
        if self.pair.is_some() {
            cfg.pair = self.pair;
        }
        set!(n_grid, trials, seed, t_alpha, k_factor, l, oracle, oracle_limit, check_general_position, event, target, iterations);
    }
}

/// `"100,200,400"` or a single integer.
pub fn parse_grid(s: &str) -> Result<Vec<usize>, ConfigError> {
    s.split(',')
        .map(|part| part.trim().parse().map_err(|_| ConfigError::Parse(format!("bad sample size {part:?}"))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn events_parse_and_print() {
        for text in ["always", "max>=5", "exactly:3:2", "first-empty"] {
            let e: OccupancyEvent = text.parse().unwrap();
            assert_eq!(e.to_string(), text);
        }
        assert!("max>=".parse::<OccupancyEvent>().is_err());
        assert!("exactly:1".parse::<OccupancyEvent>().is_err());
        let e = OccupancyEvent::Exactly { k: 2, j: 2 };
        assert!(e.holds(&[2, 0, 2]));
        assert!(!e.holds(&[2, 0, 1]));
        assert!(OccupancyEvent::FirstEmpty.holds(&[0, 3]));
    }

    #[test]
    fn patches_override_in_order() {
        let mut cfg = ExperimentConfig::defaults(Experiment::Valtr);
        ConfigPatch::from_json(r#"{"trials": 7, "n_grid": [4, 8], "event": {"kind": "max-at-least", "m": 3}}"#)
            .unwrap()
            .apply(&mut cfg);
        ConfigPatch { trials: Some(9), ..Default::default() }.apply(&mut cfg);
        assert_eq!((cfg.trials, cfg.n_grid.clone()), (9, vec![4, 8]));
        assert_eq!(cfg.event, OccupancyEvent::MaxAtLeast { m: 3 });
        assert!(ConfigPatch::from_json(r#"{"trails": 7}"#).is_err());
    }

    #[test]
    fn validation() {
        let mut cfg = ExperimentConfig::defaults(Experiment::Bl);
        cfg.validate(Experiment::Bl).unwrap();
        cfg.n_grid = vec![200, 100];
        assert!(cfg.validate(Experiment::Bl).is_err());
        cfg.n_grid = vec![201];
        assert!(cfg.validate(Experiment::Bl).is_err());
        cfg.n_grid = vec![200];
        cfg.trials = 0;
        assert!(cfg.validate(Experiment::Bl).is_err());
        assert_eq!(parse_grid("3, 4,5").unwrap(), [3, 4, 5]);
        assert!(parse_grid("3,x").is_err());
    }
}
