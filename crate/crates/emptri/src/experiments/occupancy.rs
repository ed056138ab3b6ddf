//! Experiments on the `n/2` mesh squares: Poisson transfer, `B_L` and
//! order types inside squares.

use emptri_core::body::ConvexBody;
use emptri_core::engine::degree_report;
use emptri_core::grid::{
    build_grid, occupancy_counts, occupancy_from_sample, sample_poisson_counts, sample_poisson_grid, MeshGrid,
};
use emptri_core::order_type::{canonical_label, OrderTypeLabel};
use emptri_core::sample::{sample_uniform_with, Degeneracy, DEFAULT_SCALE};
use emptri_core::stats::proportion_ratio;
use emptri_core::{Point, PointSet, Result};
use serde_json::{json, Value};

use super::{run_trials, EstimateRow, Experiment, ExperimentConfig, ExperimentResult, InvariantTally};

const MULTINOMIAL: u64 = 0;
const POISSON: u64 = 1;

fn degeneracy(cfg: &ExperimentConfig) -> Degeneracy {
    if cfg.check_general_position {
        Degeneracy::GeneralPosition
    } else {
        Degeneracy::Duplicates
    }
}

fn grid_for(body: &ConvexBody, n: usize) -> Result<MeshGrid> {
    build_grid(body, n, DEFAULT_SCALE)
}

/// `P(event)` under the multinomial occupancy of `n` uniform points and under
/// independent `Poisson(1)` counts, and their ratio.
pub fn transfer(cfg: &ExperimentConfig, body: &ConvexBody, out: &mut ExperimentResult) -> Result<()> {
    let event = cfg.event;
    let mut indeterminate = Vec::new();
    let mut ratios = Vec::new();
    for &n in &cfg.n_grid {
        let grid = grid_for(body, n)?;
        let multinomial = run_trials(cfg, Experiment::Transfer, n, MULTINOMIAL, |_, rng| {
            let set = sample_uniform_with(body, n, DEFAULT_SCALE, degeneracy(cfg), rng);
            event.holds(&occupancy_counts(set.points(), &grid).0)
        });
        let poisson = run_trials(cfg, Experiment::Transfer, n, POISSON, |_, rng| {
            event.holds(&sample_poisson_counts(grid.len(), n, rng).0)
        });
        let h1 = multinomial.iter().filter(|&&h| h).count() as u64;
        let h2 = poisson.iter().filter(|&&h| h).count() as u64;
        out.rows.push(EstimateRow::proportion(n, "p_multinomial", h1, cfg.trials));
        out.rows.push(EstimateRow::proportion(n, "p_poisson", h2, cfg.trials));
        match proportion_ratio(h1, cfg.trials, h2, cfg.trials) {
            Some(r) => {
                out.rows.push(EstimateRow {
                    n,
                    statistic: "ratio".into(),
                    mean: r.ratio,
                    std_err: r.std_err,
                    ci_lo: r.ci.0,
                    ci_hi: r.ci.1,
                    trials: cfg.trials,
                });
                ratios.push(json!({ "n": n, "ratio": r.ratio, "ci_hi": r.ci.1 }));
            }
            None => indeterminate.push(n),
        }
    }
    out.summary.insert("event".into(), json!(event.to_string()));
    out.summary.insert("ratios".into(), Value::Array(ratios));
    out.summary.insert("indeterminate".into(), json!(indeterminate));
    Ok(())
}

/// Which levels `3 <= l <= max_l` have a payload of exactly `l` points with
/// `deg = l - 2`. Payloads with a collinear triple never count.
fn satisfied_levels<I>(payloads: I, max_l: usize, scale: emptri_core::Scale, checks: &mut InvariantTally) -> Vec<bool>
where
    I: IntoIterator<Item = Vec<Point>>,
{
    let mut found = vec![false; max_l + 1];
    for pts in payloads {
        let l = pts.len();
        if l < 3 || l > max_l || found[l] {
            continue;
        }
        let Ok(set) = PointSet::new(pts, scale) else { continue };
        let Ok(report) = degree_report(&set) else { continue };
        checks.check_report(&report, "square payload");
        if report.deg_max as usize == l - 2 {
            found[l] = true;
        }
    }
    found
}

struct BlTrial {
    levels: Vec<bool>,
    checks: InvariantTally,
}

impl BlTrial {
    fn holds(&self) -> bool {
        self.levels.iter().skip(3).all(|&b| b)
    }
}

/// `P(B_L)`: every level `3 <= l <= L` is realized by some square. Levels
/// below 3 hold vacuously.
pub fn bl(cfg: &ExperimentConfig, body: &ConvexBody, out: &mut ExperimentResult) -> Result<()> {
    let max_l = cfg.l;
    for &n in &cfg.n_grid {
        let grid = grid_for(body, n)?;
        let scale = grid.scale();
        let multinomial = run_trials(cfg, Experiment::Bl, n, MULTINOMIAL, |_, rng| {
            let set = sample_uniform_with(body, n, DEFAULT_SCALE, degeneracy(cfg), rng);
            let occ = occupancy_from_sample(&set, &grid);
            let mut checks = InvariantTally::default();
            let payloads = occ
                .members
                .iter()
                .filter(|m| (3..=max_l).contains(&m.len()))
                .map(|m| m.iter().map(|&i| set.points()[i]).collect());
            let levels = satisfied_levels(payloads, max_l, scale, &mut checks);
            BlTrial { levels, checks }
        });
        let poisson = run_trials(cfg, Experiment::Bl, n, POISSON, |_, rng| {
            let model = sample_poisson_grid(&grid, n, rng);
            let mut checks = InvariantTally::default();
            let levels = satisfied_levels(model.payloads, max_l, scale, &mut checks);
            BlTrial { levels, checks }
        });
        for t in multinomial.iter().chain(&poisson) {
            out.checks.merge(&t.checks);
        }
        let hits = |ts: &[BlTrial]| ts.iter().filter(|t| t.holds()).count() as u64;
        out.rows.push(EstimateRow::proportion(n, "p_bl", hits(&multinomial), cfg.trials));
        out.rows.push(EstimateRow::proportion(n, "p_bl_poisson", hits(&poisson), cfg.trials));
        for l in 3..=max_l {
            let h = multinomial.iter().filter(|t| t.levels[l]).count() as u64;
            out.rows.push(EstimateRow::proportion(n, &format!("p_level_{l}"), h, cfg.trials));
        }
    }
    out.summary.insert("l".into(), json!(max_l));
    out.summary.insert("levels_below_3".into(), json!("vacuous"));
    Ok(())
}

struct SearchTrial {
    first: Option<usize>,
    matches: u64,
    squares: u64,
}

/// Frequency with which some square holds exactly `k` points of the target
/// order type, and the per-square match rate.
pub fn ordertype_search(cfg: &ExperimentConfig, body: &ConvexBody, out: &mut ExperimentResult) -> Result<()> {
    let label: OrderTypeLabel = cfg.target_label().map_err(|_| emptri_core::Error::InvalidArgument("bad target"))?;
    let k = label.k();
    for &n in &cfg.n_grid {
        let grid = grid_for(body, n)?;
        let trials = run_trials(cfg, Experiment::OrdertypeSearch, n, MULTINOMIAL, |_, rng| {
            let set = sample_uniform_with(body, n, DEFAULT_SCALE, degeneracy(cfg), rng);
            let occ = occupancy_from_sample(&set, &grid);
            let mut buf = Vec::with_capacity(k);
            let mut first = None;
            let mut matches = 0;
            for (q, members) in occ.members.iter().enumerate() {
                if members.len() != k {
                    continue;
                }
                buf.clear();
                buf.extend(members.iter().map(|&i| set.points()[i]));
                if canonical_label(&buf).is_ok_and(|l| l == label) {
                    matches += 1;
                    first.get_or_insert(q);
                }
            }
            SearchTrial { first, matches, squares: grid.len() as u64 }
        });
        let hits = trials.iter().filter(|t| t.first.is_some()).count() as u64;
        let matches: u64 = trials.iter().map(|t| t.matches).sum();
        let squares: u64 = trials.iter().map(|t| t.squares).sum();
        out.rows.push(EstimateRow::proportion(n, "hit_frequency", hits, cfg.trials));
        out.rows.push(EstimateRow::proportion(n, "square_rate", matches, squares));
    }
    out.summary.insert("target".into(), json!(label.to_string()));
    out.summary.insert("k".into(), json!(k));
    Ok(())
}
