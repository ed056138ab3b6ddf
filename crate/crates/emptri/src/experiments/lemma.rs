//! Expected degree of a fixed close pair: Monte Carlo against quadrature.

use emptri_core::body::ConvexBody;
use emptri_core::engine::pair_degree;
use emptri_core::quad::{expected_pair_degree, Tolerance};
use emptri_core::sample::{extend_uniform, DEFAULT_SCALE};
use emptri_core::stats::Moments;
use emptri_core::{Error, Point, Result};
use serde_json::{json, Value};

use super::{run_trials, EstimateRow, Experiment, ExperimentConfig, ExperimentResult};

/// Relative tolerance of the quadrature side.
pub const QUADRATURE_TOLERANCE: f64 = 1e-6;

pub fn lemma_ad(cfg: &ExperimentConfig, body: &ConvexBody, out: &mut ExperimentResult) -> Result<()> {
    let [x, y] = cfg.pair.unwrap_or_else(|| {
        let c = body.inscribed_center();
        [c, [c[0] + 0.01, c[1]]]
    });
    let scale = DEFAULT_SCALE;
    let grid = |p: [f64; 2]| Point::new(scale.to_grid(p[0]), scale.to_grid(p[1]));
    let (gx, gy) = (grid(x), grid(y));
    if gx == gy || !body.contains_grid_point(gx, scale) || !body.contains_grid_point(gy, scale) {
        return Err(Error::InvalidArgument("the pair must be two distinct points of the body"));
    }
    // Both sides use the quantized pair.
    let (bx, by) = (scale.point_to_body(gx), scale.point_to_body(gy));
    let distance = (bx[0] - by[0]).hypot(bx[1] - by[1]);
    let center = body.inscribed_center();
    let rho = body.rho();
    let in_rho_disk = [bx, by].iter().all(|p| (p[0] - center[0]).hypot(p[1] - center[1]) <= rho);

    let mut levels = Vec::new();
    for &n in &cfg.n_grid {
        if distance > (1.0 + 1e-6) / n as f64 {
            return Err(Error::InvalidArgument("the pair is farther apart than 1/n"));
        }
        let degrees = run_trials(cfg, Experiment::LemmaAd, n, 0, |_, rng| {
            let set = extend_uniform(body, &[gx, gy], n - 2, scale, rng);
            pair_degree(&set, 0, 1)
        })
        .into_iter()
        .collect::<Result<Vec<u32>>>()?;
        let mc: Moments = degrees.iter().map(|&d| d as f64).collect();
        let quad = expected_pair_degree(body, bx, by, n, Tolerance::relative(QUADRATURE_TOLERANCE))?;
        out.rows.push(EstimateRow::mean(n, "mc_pair_degree", &mc));
        out.rows.push(EstimateRow::exact(n, "quadrature", quad.value, quad.error));

        let diff = mc.mean() - quad.value;
        let spread = (mc.std_err().powi(2) + quad.error.powi(2)).sqrt();
        let z = if diff == 0.0 { 0.0 } else { diff / spread };
        let bound = rho * n as f64 * (1.0 - (-rho / 2.0).exp());
        levels.push(json!({
            "n": n,
            "mc_mean": mc.mean(),
            "quadrature": quad.value,
            "quadrature_error": quad.error,
            "z_score": z,
            "lower_bound": bound,
            "both_above_bound": mc.mean() >= bound && quad.value >= bound,
        }));
    }
    out.summary.insert("pair".into(), json!([bx, by]));
    out.summary.insert("distance".into(), json!(distance));
    out.summary.insert("rho".into(), json!(rho));
    out.summary.insert("pair_in_rho_disk".into(), json!(in_rho_disk));
    out.summary.insert("levels".into(), Value::Array(levels));
    Ok(())
}
