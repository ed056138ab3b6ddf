//! Near pairs at distance `T = alpha / n`.

use std::f64::consts::PI;

use emptri_core::body::ConvexBody;
use emptri_core::engine::near_pairs;
use emptri_core::sample::{sample_uniform_with, Degeneracy, DEFAULT_SCALE};
use emptri_core::stats::{wilson, Moments, Z95};
use emptri_core::Result;
use serde_json::{json, Value};

use super::{run_trials, EstimateRow, Experiment, ExperimentConfig, ExperimentResult};

fn degeneracy(cfg: &ExperimentConfig) -> Degeneracy {
    if cfg.check_general_position {
        Degeneracy::GeneralPosition
    } else {
        Degeneracy::Duplicates
    }
}

fn near_pair_counts(cfg: &ExperimentConfig, exp: Experiment, body: &ConvexBody, n: usize) -> Result<Vec<u64>> {
    let t = cfg.t_alpha / n as f64;
    run_trials(cfg, exp, n, 0, |_, rng| {
        let set = sample_uniform_with(body, n, DEFAULT_SCALE, degeneracy(cfg), rng);
        near_pairs(&set, t, false).map(|s| s.count)
    })
    .into_iter()
    .collect()
}

/// Mean `N_T` against `(pi / 2) alpha^2`.
pub fn ntpairs(cfg: &ExperimentConfig, body: &ConvexBody, out: &mut ExperimentResult) -> Result<()> {
    let predicted = PI / 2.0 * cfg.t_alpha * cfg.t_alpha;
    for &n in &cfg.n_grid {
        let m: Moments = near_pair_counts(cfg, Experiment::Ntpairs, body, n)?.into_iter().map(|c| c as f64).collect();
        out.rows.push(EstimateRow::mean(n, "N_T", &m));
        out.rows.push(EstimateRow::scaled(n, "N_T_ratio", &m, 1.0 / predicted));
    }
    out.summary.insert("predicted_mean".into(), json!(predicted));
    Ok(())
}

/// Frequency of `N_T >= 144 ln n`.
pub fn tail(cfg: &ExperimentConfig, body: &ConvexBody, out: &mut ExperimentResult) -> Result<()> {
    let mut per_n = Vec::new();
    for &n in &cfg.n_grid {
        let counts = near_pair_counts(cfg, Experiment::Tail, body, n)?;
        let ln_n = (n as f64).ln();
        let threshold = 144.0 * ln_n;
        let hits = counts.iter().filter(|&&c| c as f64 >= threshold).count() as u64;
        let m: Moments = counts.iter().map(|&c| c as f64).collect();
        out.rows.push(EstimateRow::mean(n, "N_T", &m));
        out.rows.push(EstimateRow::proportion(n, "tail_frequency", hits, cfg.trials));
        let (_, upper) = wilson(hits, cfg.trials, Z95);
        per_n.push(json!({
            "n": n,
            "threshold": threshold,
            "k_n": cfg.k_factor * ln_n,
            "hits": hits,
            "max_observed": counts.iter().max(),
            "wilson_upper": upper,
            "n_pow_minus_3": (n as f64).powi(-3),
        }));
    }
    out.summary.insert("levels".into(), Value::Array(per_n));
    out.summary.insert(
        "note".into(),
        json!("one-sided check: zero hits are consistent with an n^-3 tail, but the interval cannot resolve rates that small"),
    );
    Ok(())
}
