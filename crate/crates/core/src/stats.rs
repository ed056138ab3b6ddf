//! Estimators for the Monte Carlo laboratory.
//!
//! All accumulators fold their inputs in the order given, which keeps the
//! floating-point results bit-identical across runs.

/// Two-sided 95% standard normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Running mean and variance (Welford).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Moments {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Unbiased sample variance; zero for fewer than two observations.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }

    pub fn std_err(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            libm::sqrt(self.variance() / self.count as f64)
        }
    }

    /// Normal-approximation 95% interval for the mean.
    pub fn ci95(&self) -> (f64, f64) {
        let h = Z95 * self.std_err();
        (self.mean - h, self.mean + h)
    }
}

impl FromIterator<f64> for Moments {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut m = Moments::new();
        for x in iter {
            m.push(x);
        }
        m
    }
}

/// Wilson score interval for `successes` out of `trials` at quantile `z`.
pub fn wilson(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * libm::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Ordinary least squares `y = intercept + slope * x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// Slope of the fit constrained through the origin.
    pub slope_through_origin: f64,
}

pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Option<LinearFit> {
    let n = xs.len();
    if n < 2 || ys.len() != n {
        return None;
    }
    let mx = xs.iter().sum::<f64>() / n as f64;
    let my = ys.iter().sum::<f64>() / n as f64;
    let (mut sxx, mut sxy, mut syy, mut xx, mut xy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
        xx += x * x;
        xy += x * y;
    }
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Some(LinearFit { slope, intercept: my - slope * mx, r_squared, slope_through_origin: xy / xx })
}

/// Ratio `p1 / p2` of two independent proportion estimates with a 95%
/// interval from the first-order delta method.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioEstimate {
    pub ratio: f64,
    pub std_err: f64,
    pub ci: (f64, f64),
}

/// `None` when the denominator estimate is zero.
pub fn proportion_ratio(hits1: u64, trials1: u64, hits2: u64, trials2: u64) -> Option<RatioEstimate> {
    if hits2 == 0 || trials1 == 0 || trials2 == 0 {
        return None;
    }
    let p1 = hits1 as f64 / trials1 as f64;
    let p2 = hits2 as f64 / trials2 as f64;
    let ratio = p1 / p2;
    // Var(p1/p2) ~ r^2 (Var p1 / p1^2 + Var p2 / p2^2)
    let rel1 = if hits1 == 0 { 0.0 } else { (1.0 - p1) / (p1 * trials1 as f64) };
    let rel2 = (1.0 - p2) / (p2 * trials2 as f64);
    let mut std_err = ratio * libm::sqrt(rel1 + rel2);
    if hits1 == 0 {
        // No information on p1 beyond "small": use the Wilson upper bound.
        let (_, hi) = wilson(0, trials1, Z95);
        std_err = hi / p2 / Z95;
    }
    Some(RatioEstimate { ratio, std_err, ci: ((ratio - Z95 * std_err).max(0.0), ratio + Z95 * std_err) })
}

/// Pearson statistic `sum (o - e)^2 / e` over cells with positive expectation.
pub fn chi_square_statistic(observed: &[u64], expected: &[f64]) -> f64 {
    observed
        .iter()
        .zip(expected)
        .filter(|(_, &e)| e > 0.0)
        .map(|(&o, &e)| {
            let d = o as f64 - e;
            d * d / e
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moments_match_closed_form() {
        let m: Moments = [1.0, 2.0, 3.0, 4.0].into_iter().collect();
        assert_eq!(m.count(), 4);
        assert!((m.mean() - 2.5).abs() < 1e-15);
        assert!((m.variance() - 5.0 / 3.0).abs() < 1e-15);
        assert!((m.std_err() - (5.0f64 / 12.0).sqrt()).abs() < 1e-15);
        let one: Moments = [7.0].into_iter().collect();
        assert_eq!((one.variance(), one.ci95()), (0.0, (7.0, 7.0)));
    }

    #[test]
    fn wilson_at_zero_successes() {
        let (lo, hi) = wilson(0, 10_000, Z95);
        assert_eq!(lo, 0.0);
        // z^2 / (n + z^2)
        assert!((hi - Z95 * Z95 / (10_000.0 + Z95 * Z95)).abs() < 1e-12);
        assert!((3.7e-4..3.9e-4).contains(&hi));
        let (lo, hi) = wilson(50, 100, Z95);
        assert!(lo < 0.5 && hi > 0.5 && ((0.5 - lo) - (hi - 0.5)).abs() < 1e-12);
    }

    #[test]
    fn fit_recovers_a_line() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let ys: [f64; 4] = xs.map(|x| 0.5 + 2.0 * x);
        let fit = linear_fit(&xs, &ys).unwrap();
        assert!((fit.slope - 2.0).abs() < 1e-12 && (fit.intercept - 0.5).abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
        assert!(linear_fit(&[1.0, 1.0], &[2.0, 3.0]).is_none());
    }

    #[test]
    fn ratio_of_equal_certain_events_is_exactly_one() {
        let r = proportion_ratio(500, 500, 700, 700).unwrap();
        assert_eq!((r.ratio, r.std_err, r.ci), (1.0, 0.0, (1.0, 1.0)));
        assert!(proportion_ratio(3, 10, 0, 10).is_none());
    }

    #[test]
    fn chi_square_of_perfect_fit_is_zero() {
        assert_eq!(chi_square_statistic(&[10, 20], &[10.0, 20.0]), 0.0);
        assert!((chi_square_statistic(&[12, 18], &[10.0, 20.0]) - 0.6).abs() < 1e-12);
    }
}
