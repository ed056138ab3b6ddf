//! Globally adaptive Gauss–Kronrod (7/15) quadrature in one dimension and an
//! iterated version over convex bodies.
//!
//! The two-dimensional rule integrates each horizontal chord of the body
//! exactly up to the inner tolerance, so the body's boundary never shows up
//! as a discontinuity of the integrand.

use alloc::vec::Vec;

use crate::body::ConvexBody;
use crate::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
/// Gauss weights for the nodes `XGK[1], XGK[3], XGK[5], XGK[7]`.
const WG: [f64; 4] = [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    /// Sum of the per-interval `|Kronrod - Gauss|` differences.
    pub error: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
    pub max_intervals: usize,
}

impl Tolerance {
    pub fn relative(rel: f64) -> Self {
        Tolerance { rel, abs: 0.0, max_intervals: 2000 }
    }

    fn met(&self, value: f64, error: f64) -> bool {
        error <= self.abs.max(self.rel * value.abs())
    }
}

fn kronrod<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let x = h * XGK[i];
        let s = f(c - x) + f(c + x);
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Integrates `f` over `[a, b]`, splitting first at the sorted `breaks` that
/// fall strictly inside, then bisecting the interval with the largest error.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, breaks: &[f64], tol: Tolerance) -> Result<Estimate> {
    if a == b {
        return Ok(Estimate { value: 0.0, error: 0.0, evaluations: 0 });
    }
    let mut cuts: Vec<f64> = Vec::with_capacity(breaks.len() + 2);
    cuts.push(a);
    cuts.extend(breaks.iter().copied().filter(|&x| x > a && x < b));
    cuts.push(b);
    let mut parts: Vec<(f64, f64, f64, f64)> = cuts
        .windows(2)
        .map(|w| {
            let (v, e) = kronrod(&mut f, w[0], w[1]);
            (w[0], w[1], v, e)
        })
        .collect();
    let mut evaluations = 15 * parts.len();
    loop {
        let value: f64 = parts.iter().map(|p| p.2).sum();
        let error: f64 = parts.iter().map(|p| p.3).sum();
        if tol.met(value, error) {
            return Ok(Estimate { value, error, evaluations });
        }
        if parts.len() >= tol.max_intervals {
            return Err(Error::QuadratureDiverged);
        }
        let worst = (0..parts.len()).max_by(|&i, &j| parts[i].3.total_cmp(&parts[j].3)).unwrap();
        let (lo, hi, _, _) = parts[worst];
        let mid = 0.5 * (lo + hi);
        if !(mid > lo && mid < hi) {
            return Err(Error::QuadratureDiverged);
        }
        let (v1, e1) = kronrod(&mut f, lo, mid);
        let (v2, e2) = kronrod(&mut f, mid, hi);
        evaluations += 30;
        parts[worst] = (lo, mid, v1, e1);
        parts.push((mid, hi, v2, e2));
    }
}

/// `∫_C f(x, y) dx dy` as an outer integral over `y` of chord integrals over
/// `x`. `x_breaks(y)` may name a kink of `f` on the chord at height `y`;
/// `y_breaks` lists kinks of the outer integrand.
pub fn integrate_over_body<F, B>(body: &ConvexBody, f: F, x_breaks: B, y_breaks: &[f64], tol: Tolerance) -> Result<Estimate>
where
    F: Fn(f64, f64) -> f64,
    B: Fn(f64) -> Option<f64>,
{
    let [_, _, ymin, ymax] = body.bounding_box();
    let inner_tol = Tolerance { rel: tol.rel * 1e-2, abs: tol.abs * 1e-2, max_intervals: tol.max_intervals };
    let mut evaluations = 0;
    let mut failure = None;
    let outer = integrate(
        |y| {
            let Some((lo, hi)) = body.chord_at(y) else { return 0.0 };
            let kink: Vec<f64> = x_breaks(y).into_iter().collect();
            match integrate(|x| f(x, y), lo, hi, &kink, inner_tol) {
                Ok(e) => {
                    evaluations += e.evaluations;
                    e.value
                }
                Err(err) => {
                    failure = Some(err);
                    0.0
                }
            }
        },
        ymin,
        ymax,
        y_breaks,
        tol,
    )?;
    if let Some(err) = failure {
        return Err(err);
    }
    Ok(Estimate { evaluations, ..outer })
}

/// `(n - 2) ∫_C (1 - A(x, y, u))^(n - 3) du`, the expected degree of the pair
/// `{x, y}` among `n - 2` further uniform points of an area-one body, where
/// `A(x, y, u)` is the area of the triangle `x y u`.
///
/// For `n = 3` the integrand is constant and the value is `area(C)` exactly.
pub fn expected_pair_degree(body: &ConvexBody, x: [f64; 2], y: [f64; 2], n: usize, tol: Tolerance) -> Result<Estimate> {
    if n < 3 {
        return Err(Error::TooFewPoints { needed: 3, got: n });
    }
    let factor = (n - 2) as f64;
    if n == 3 {
        return Ok(Estimate { value: factor * body.area(), error: 0.0, evaluations: 0 });
    }
    let power = (n - 3) as i32;
    let (dx, dy) = (y[0] - x[0], y[1] - x[1]);
    let integrand = |u: f64, v: f64| {
        let area = 0.5 * (dx * (v - x[1]) - dy * (u - x[0])).abs();
        libm::pow(1.0 - area, power as f64)
    };
    // The line through x and y, where the area vanishes.
    let kink = |v: f64| (dy != 0.0).then(|| x[0] + dx * (v - x[1]) / dy);
    let y_breaks: Vec<f64> = if dy == 0.0 { alloc::vec![x[1]] } else { Vec::new() };
    let est = integrate_over_body(body, integrand, kink, &y_breaks, tol)?;
    Ok(Estimate { value: factor * est.value, error: factor * est.error, evaluations: est.evaluations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn one_dimensional_rules() {
        let e = integrate(|x| x * x, 0.0, 3.0, &[], Tolerance::relative(1e-12)).unwrap();
        assert!((e.value - 9.0).abs() < 1e-12);
        let e = integrate(|x| (x - 0.3).abs(), 0.0, 1.0, &[], Tolerance::relative(1e-10)).unwrap();
        assert!((e.value - 0.29).abs() < 1e-10);
        let e = integrate(libm::sin, 0.0, PI, &[1.0], Tolerance::relative(1e-12)).unwrap();
        assert!((e.value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn divergence_is_reported() {
        let tol = Tolerance { rel: 1e-14, abs: 0.0, max_intervals: 3 };
        assert_eq!(integrate(|x| 1.0 / x.sqrt(), 0.0, 1.0, &[], tol), Err(Error::QuadratureDiverged));
    }

    #[test]
    fn areas_and_moments_over_bodies() {
        let tol = Tolerance::relative(1e-10);
        let disk = ConvexBody::unit_area_disk();
        let a = integrate_over_body(&disk, |_, _| 1.0, |_| None, &[], tol).unwrap();
        assert!((a.value - 1.0).abs() < 1e-9);
        // second moment of a disk of radius R: pi R^4 / 4 per axis
        let r2 = 1.0 / PI;
        let m = integrate_over_body(&disk, |x, _| x * x, |_| None, &[], tol).unwrap();
        assert!((m.value - PI * r2 * r2 / 4.0).abs() < 1e-10);
        let tri = ConvexBody::polygon([[0.0, 0.0], [2.0, 0.0], [0.0, 1.0]].to_vec()).unwrap();
        let a = integrate_over_body(&tri, |_, _| 1.0, |_| None, &[], tol).unwrap();
        assert!((a.value - 1.0).abs() < 1e-10);
    }

    #[test]
    fn expected_degree_closed_forms() {
        let sq = ConvexBody::unit_square();
        let tol = Tolerance::relative(1e-8);
        let e3 = expected_pair_degree(&sq, [0.5, 0.5], [0.51, 0.5], 3, tol).unwrap();
        assert_eq!(e3.value, 1.0);
        // Horizontal pair at height 1/2 and distance d: A = d |v - 1/2| / 2,
        // so the integral is 2 ∫_0^{1/2} (1 - d t / 2)^m dt in closed form.
        let (d, n) = (0.01, 100usize);
        let m = (n - 3) as f64;
        let c = d / 2.0;
        let exact = (n - 2) as f64 * 2.0 * (1.0 - libm::pow(1.0 - c * 0.5, m + 1.0)) / (c * (m + 1.0));
        let est = expected_pair_degree(&sq, [0.5, 0.5], [0.5 + d, 0.5], n, tol).unwrap();
        assert!(((est.value - exact) / exact).abs() < 1e-8, "{} vs {}", est.value, exact);
    }
}
