//! Maximum pair degree and the number of empty triangles of uniform samples.

use emptri_core::body::ConvexBody;
use emptri_core::engine::{degree_report, EmptyTriangleReport};
use emptri_core::rng::TrialRng;
use emptri_core::sample::{sample_uniform_with, Degeneracy, DEFAULT_SCALE};
use emptri_core::stats::{linear_fit, Moments};
use emptri_core::Result;
use serde_json::{json, Value};

use super::{run_trials, EstimateRow, Experiment, ExperimentConfig, ExperimentResult, InvariantTally};

struct Trial {
    f: u64,
    deg_max: u32,
    checks: InvariantTally,
}

/// Samples `n` points in general position, reports, and audits the report.
fn audited_report(cfg: &ExperimentConfig, body: &ConvexBody, n: usize, t: u64, rng: &mut TrialRng) -> Result<Trial> {
    let set = sample_uniform_with(body, n, DEFAULT_SCALE, Degeneracy::GeneralPosition, rng);
    let report: EmptyTriangleReport = degree_report(&set)?;
    let context = format!("n={n} trial={t}");
    let mut checks = InvariantTally::default();
    checks.check_report(&report, &context);
    checks.check_first_moment(&set, &report, cfg.t_alpha / n as f64, &context);
    if cfg.oracle && n <= cfg.oracle_limit {
        checks.check_oracle(&set, &report, &context);
    }
    Ok(Trial { f: report.f, deg_max: report.deg_max, checks })
}

fn trials_at(cfg: &ExperimentConfig, exp: Experiment, body: &ConvexBody, n: usize, out: &mut ExperimentResult) -> Result<Vec<Trial>> {
    let trials = run_trials(cfg, exp, n, 0, |t, rng| audited_report(cfg, body, n, t, rng))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    for t in &trials {
        out.checks.merge(&t.checks);
    }
    Ok(trials)
}

/// Mean `deg` per `n`, its ratio to `n / ln n`, and a least-squares fit of
/// the means against `n / ln n`.
pub fn deg_growth(cfg: &ExperimentConfig, body: &ConvexBody, out: &mut ExperimentResult) -> Result<()> {
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    let mut ratios = Vec::new();
    for &n in &cfg.n_grid {
        let trials = trials_at(cfg, Experiment::DegGrowth, body, n, out)?;
        let m: Moments = trials.iter().map(|t| t.deg_max as f64).collect();
        let x = n as f64 / (n as f64).ln();
        out.rows.push(EstimateRow::mean(n, "deg_max", &m));
        out.rows.push(EstimateRow::scaled(n, "deg_max_ln_n_over_n", &m, 1.0 / x));
        xs.push(x);
        ys.push(m.mean());
        ratios.push(json!({ "n": n, "ratio": m.mean() / x }));
    }
    let increasing = ys.windows(2).all(|w| w[0] < w[1]);
    let fit = linear_fit(&xs, &ys).map(|f| {
        json!({
            "c_hat": f.slope,
            "intercept": f.intercept,
            "r_squared": f.r_squared,
            "slope_through_origin": f.slope_through_origin,
        })
    });
    out.summary.insert("fit".into(), fit.unwrap_or(Value::Null));
    out.summary.insert("strictly_increasing".into(), json!(increasing));
    out.summary.insert("ratios".into(), Value::Array(ratios));
    Ok(())
}

/// Mean `f / n^2` per `n` and its distance from 2.
pub fn valtr(cfg: &ExperimentConfig, body: &ConvexBody, out: &mut ExperimentResult) -> Result<()> {
    let mut deviations = Vec::new();
    for &n in &cfg.n_grid {
        let trials = trials_at(cfg, Experiment::Valtr, body, n, out)?;
        let n2 = (n * n) as f64;
        let f: Moments = trials.iter().map(|t| t.f as f64).collect();
        let scaled: Moments = trials.iter().map(|t| t.f as f64 / n2).collect();
        out.rows.push(EstimateRow::mean(n, "f", &f));
        out.rows.push(EstimateRow::mean(n, "f_over_n2", &scaled));
        deviations.push(json!({ "n": n, "deviation_from_2": (scaled.mean() - 2.0).abs() }));
    }
    let dev = |v: &Value| v["deviation_from_2"].as_f64().unwrap_or(f64::NAN);
    let shrinks = deviations.len() >= 2 && dev(&deviations[deviations.len() - 1]) < dev(&deviations[0]);
    out.summary.insert("deviations".into(), Value::Array(deviations));
    out.summary.insert("deviation_shrinks".into(), json!(shrinks));
    Ok(())
}
