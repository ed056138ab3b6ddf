//! Hill climbing towards point sets with few empty triangles.

use emptri_core::engine::count_empty_triangles;
use emptri_core::geom::cross;
use emptri_core::rng::TrialRng;
use emptri_core::stats::Moments;
use emptri_core::{Error, Point, PointSet, Result};
use rand::Rng;
use serde_json::json;

use super::{run_trials, EstimateRow, Experiment, ExperimentConfig, ExperimentResult};

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    pub n: usize,
    pub initial_f: u64,
    pub best_f: u64,
    pub best: Vec<Point>,
    /// `(iteration, f)` at the start and after every strict improvement.
    pub trace: Vec<(u64, u64)>,
}

/// `p` would be a repeated point or complete a collinear triple among
/// `points` without index `skip`.
fn degenerate_with(points: &[Point], skip: usize, p: Point) -> bool {
    let n = points.len();
    for i in (0..n).filter(|&i| i != skip) {
        if points[i] == p {
            return true;
        }
        for j in (i + 1..n).filter(|&j| j != skip) {
            if cross(points[i], points[j], p) == 0 {
                return true;
            }
        }
    }
    false
}

/// Random start in the box `[0, 4n^2)^2`, then `iterations` proposals moving
/// one point by an offset in `[-n, n]^2`. A proposal is accepted when the set
/// stays in general position and inside the box and `f` does not increase.
pub fn minimize_f(n: usize, iterations: u64, rng: &mut TrialRng) -> Result<SearchOutcome> {
    if n < 5 {
        return Err(Error::TooFewPoints { needed: 5, got: n });
    }
    let side = 4 * (n as i64) * (n as i64);
    let step = n as i64;
    let mut points: Vec<Point> = Vec::with_capacity(n);
    while points.len() < n {
        let p = Point::new(rng.random_range(0..side), rng.random_range(0..side));
        if !degenerate_with(&points, usize::MAX, p) {
            points.push(p);
        }
    }
    let count = |pts: &[Point]| count_empty_triangles(&PointSet::new(pts.to_vec(), emptri_core::Scale::ONE)?);
    let initial_f = count(&points)?;
    let mut f = initial_f;
    let mut trace = vec![(0, f)];
    let mut candidate = points.clone();
    for it in 1..=iterations {
        let i = rng.random_range(0..n);
        let old = points[i];
        let p = Point::new(old.x + rng.random_range(-step..=step), old.y + rng.random_range(-step..=step));
        if p == old || p.x < 0 || p.y < 0 || p.x >= side || p.y >= side || degenerate_with(&points, i, p) {
            continue;
        }
        candidate[i] = p;
        let g = count(&candidate)?;
        if g <= f {
            points[i] = p;
            if g < f {
                trace.push((it, g));
            }
            f = g;
        } else {
            candidate[i] = old;
        }
    }
    Ok(SearchOutcome { n, initial_f, best_f: f, best: points, trace })
}

pub fn run(cfg: &ExperimentConfig, out: &mut ExperimentResult) -> Result<()> {
    let mut best_runs = Vec::new();
    for &n in &cfg.n_grid {
        let runs = run_trials(cfg, Experiment::MinimizeF, n, 0, |_, rng| minimize_f(n, cfg.iterations, rng))
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        let n2 = (n * n) as f64;
        for (t, run) in runs.iter().enumerate() {
            let set = PointSet::new(run.best.clone(), emptri_core::Scale::ONE)?;
            let report = emptri_core::engine::degree_report(&set)?;
            let context = format!("n={n} restart={t}");
            out.checks.check_report(&report, &context);
            if cfg.oracle && n <= cfg.oracle_limit {
                out.checks.check_oracle(&set, &report, &context);
            }
        }
        let initial: Moments = runs.iter().map(|r| r.initial_f as f64 / n2).collect();
        let last: Moments = runs.iter().map(|r| r.best_f as f64 / n2).collect();
        out.rows.push(EstimateRow::mean(n, "f_initial_over_n2", &initial));
        out.rows.push(EstimateRow::mean(n, "f_final_over_n2", &last));
        let best = runs.iter().min_by_key(|r| r.best_f).expect("at least one restart");
        best_runs.push(json!({
            "n": n,
            "best_f": best.best_f,
            "lower_bound": (n * n).saturating_sub(5 * n),
            "points": best.best.iter().map(|p| [p.x, p.y]).collect::<Vec<_>>(),
            "trace": best.trace,
            "monotone": runs.iter().all(|r| r.best_f <= r.initial_f),
        }));
    }
    out.summary.insert("best".into(), serde_json::Value::Array(best_runs));
    Ok(())
}
