//! Empty triangles, pair degrees and near pairs.
//!
//! The optimized enumerator anchors every triangle at its lexicographically
//! smallest vertex `p`. The points after `p` are sorted counterclockwise
//! around it; a triangle `p q_i q_j` is empty exactly when `q_i` sees `q_j`
//! inside the star-shaped chain `p, q_1, ..., q_m`. The visible pairs are
//! produced by the queue-based visibility sweep of Dobkin, Edelsbrunner and
//! Overmars, in time proportional to their number, so a full report costs
//! `O(n^2 log n + f)`.

use alloc::vec;
use alloc::vec::Vec;

use crate::geom::{classify, cross, lex_order, sort_by_angle, squared_distance, Containment, Point, PointSet};
use crate::{Error, Result};

/// Largest point count accepted by the degree table (32-bit pair counters).
pub const MAX_POINTS: usize = 65_535;

/// Default size limit for the `O(n^4)` reference enumerator.
pub const DEFAULT_ORACLE_CAP: usize = 64;

/// Dense symmetric table of pair degrees, stored as a strict lower triangle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeTable {
    n: usize,
    counts: Vec<u32>,
}

impl DegreeTable {
    pub fn new(n: usize) -> Self {
        DegreeTable { n, counts: vec![0; n * n.saturating_sub(1) / 2] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    fn slot(i: usize, j: usize) -> usize {
        let (lo, hi) = if i < j { (i, j) } else { (j, i) };
        hi * (hi - 1) / 2 + lo
    }

    /// Degree of the pair `{i, j}`; `i != j`.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.counts[Self::slot(i, j)]
    }

    #[inline]
    pub fn add_triangle(&mut self, a: usize, b: usize, c: usize) {
        self.counts[Self::slot(a, b)] += 1;
        self.counts[Self::slot(b, c)] += 1;
        self.counts[Self::slot(a, c)] += 1;
    }

    /// Entry-wise sum; both tables must have the same size.
    pub fn merge(&mut self, other: &DegreeTable) {
        assert_eq!(self.n, other.n, "degree tables of different sizes");
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += *b;
        }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().map(|&c| c as u64).sum()
    }

    /// All pairs `(i, j, deg)` with `i < j`, in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        (0..self.n).flat_map(move |i| (i + 1..self.n).map(move |j| (i, j, self.get(i, j))))
    }

    /// `hist[d]` is the number of pairs with degree `d`.
    pub fn histogram(&self) -> Vec<u64> {
        let max = self.counts.iter().copied().max().unwrap_or(0) as usize;
        let mut hist = vec![0u64; max + 1];
        for &c in &self.counts {
            hist[c as usize] += 1;
        }
        if self.counts.is_empty() {
            hist.clear();
        }
        hist
    }

    /// Maximum entry and the lexicographically smallest pair attaining it.
    pub fn argmax(&self) -> Option<(u32, (usize, usize))> {
        let max = self.counts.iter().copied().max()?;
        self.iter().find(|&(_, _, d)| d == max).map(|(i, j, d)| (d, (i, j)))
    }
}

/// `f(X)`, the degree table, `deg X` and a pair attaining it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmptyTriangleReport {
    pub n: usize,
    pub f: u64,
    pub degree: DegreeTable,
    pub deg_max: u32,
    pub argmax_pair: (usize, usize),
}

/// A broken identity or bound in an [`EmptyTriangleReport`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InvariantViolation {
    Handshake { degree_sum: u64, f: u64 },
    DegreeAboveBound { i: usize, j: usize, degree: u32 },
    BelowLowerBound { f: u64, bound: u64 },
    AboveTripleCount { f: u64 },
    InconsistentMax { deg_max: u32 },
}

impl EmptyTriangleReport {
    pub fn from_table(f: u64, degree: DegreeTable) -> Self {
        let (deg_max, argmax_pair) = degree.argmax().unwrap_or((0, (0, 0)));
        EmptyTriangleReport { n: degree.n(), f, degree, deg_max, argmax_pair }
    }

    pub fn degree_histogram(&self) -> Vec<u64> {
        self.degree.histogram()
    }

    /// Checks `sum deg = 3f`, `deg <= n - 2`, `n^2 - 5n <= f <= C(n, 3)` and
    /// the consistency of `deg_max`.
    pub fn validate(&self) -> core::result::Result<(), InvariantViolation> {
        let n = self.n as u64;
        let degree_sum = self.degree.total();
        if degree_sum != 3 * self.f {
            return Err(InvariantViolation::Handshake { degree_sum, f: self.f });
        }
        let cap = n.saturating_sub(2);
        if let Some((i, j, degree)) = self.degree.iter().find(|&(_, _, d)| d as u64 > cap) {
            return Err(InvariantViolation::DegreeAboveBound { i, j, degree });
        }
        if n >= 5 && self.f < n * n - 5 * n {
            return Err(InvariantViolation::BelowLowerBound { f: self.f, bound: n * n - 5 * n });
        }
        if self.f > binomial3(n) {
            return Err(InvariantViolation::AboveTripleCount { f: self.f });
        }
        if self.n >= 2 {
            let (i, j) = self.argmax_pair;
            let max = self.degree.argmax().map(|m| m.0).unwrap_or(0);
            if self.deg_max != max || self.degree.get(i, j) != max {
                return Err(InvariantViolation::InconsistentMax { deg_max: self.deg_max });
            }
        }
        Ok(())
    }
}

pub fn binomial3(n: u64) -> u64 {
    if n < 3 {
        0
    } else {
        n * (n - 1) * (n - 2) / 6
    }
}

fn check_size(set: &PointSet, min: usize) -> Result<()> {
    if set.len() < min {
        return Err(Error::TooFewPoints { needed: min, got: set.len() });
    }
    if set.len() > MAX_POINTS {
        return Err(Error::TooManyPoints { n: set.len(), max: MAX_POINTS });
    }
    Ok(())
}

/// Lexicographic anchor order shared by all anchor sweeps over one point set.
///
/// A `Sweeper` is immutable and can be shared between threads; each thread
/// brings its own [`SweepScratch`].
#[derive(Debug, Clone)]
pub struct Sweeper<'a> {
    points: &'a [Point],
    order: Vec<usize>,
}

/// Reusable per-thread buffers for [`Sweeper::sweep_anchor`].
#[derive(Debug, Default, Clone)]
pub struct SweepScratch {
    around: Vec<usize>,
    queues: Vec<Vec<u32>>,
    heads: Vec<usize>,
    stack: Vec<u32>,
}

impl SweepScratch {
    fn reset(&mut self, m: usize) {
        if self.queues.len() < m {
            self.queues.resize_with(m, Vec::new);
        }
        for q in &mut self.queues[..m] {
            q.clear();
        }
        self.heads.clear();
        self.heads.resize(m, 0);
    }
}

impl<'a> Sweeper<'a> {
    pub fn new(points: &'a [Point]) -> Self {
        Sweeper { points, order: lex_order(points) }
    }

    /// Number of anchors (one per point).
    pub fn anchors(&self) -> usize {
        self.order.len()
    }

    /// Emits every empty triangle whose lexicographically smallest vertex is
    /// the `rank`-th point in lexicographic order, as `(anchor, q, r)` point
    /// indices. Returns the number emitted.
    pub fn sweep_anchor<F>(&self, rank: usize, scratch: &mut SweepScratch, mut emit: F) -> Result<u64>
    where
        F: FnMut(usize, usize, usize),
    {
        let pts = self.points;
        let anchor = self.order[rank];
        let p = pts[anchor];
        let around = &mut scratch.around;
        around.clear();
        around.extend_from_slice(&self.order[rank + 1..]);
        let m = around.len();
        if m < 2 {
            return Ok(0);
        }
        sort_by_angle(pts, p, around);
        for w in around.windows(2) {
            if cross(p, pts[w[0]], pts[w[1]]) == 0 {
                let mut t = [anchor, w[0], w[1]];
                t.sort_unstable();
                return Err(Error::Collinear(t[0], t[1], t[2]));
            }
        }

        scratch.reset(m);
        let SweepScratch { around, queues, heads, stack, .. } = scratch;
        let at = |i: u32| pts[around[i as usize]];
        let mut count = 0u64;
        for j in 1..m as u32 {
            // Visibility edges ending at j, in the order produced by
            // PROCEED(j - 1, j) with its recursion unrolled onto `stack`.
            let qj = at(j);
            stack.clear();
            stack.push(j - 1);
            while let Some(&top) = stack.last() {
                let t = top as usize;
                if let Some(&k) = queues[t].get(heads[t]) {
                    if cross(at(k), at(top), qj) > 0 {
                        stack.push(k);
                        continue;
                    }
                }
                emit(anchor, around[t], around[j as usize]);
                count += 1;
                queues[j as usize].push(top);
                stack.pop();
                if let Some(&parent) = stack.last() {
                    heads[parent as usize] += 1;
                }
            }
        }
        Ok(count)
    }
}

/// Calls `consumer` once per empty triangle with sorted indices `i < j < k`
/// and returns `f(X)`.
pub fn enumerate_empty_triangles<F>(set: &PointSet, mut consumer: F) -> Result<u64>
where
    F: FnMut([usize; 3]),
{
    check_size(set, 3)?;
    let sweeper = Sweeper::new(set.points());
    let mut scratch = SweepScratch::default();
    let mut f = 0;
    for rank in 0..sweeper.anchors() {
        f += sweeper.sweep_anchor(rank, &mut scratch, |a, b, c| {
            let mut t = [a, b, c];
            t.sort_unstable();
            consumer(t);
        })?;
    }
    Ok(f)
}

/// Full report through the optimized enumerator (single-threaded).
pub fn degree_report(set: &PointSet) -> Result<EmptyTriangleReport> {
    check_size(set, 3)?;
    let sweeper = Sweeper::new(set.points());
    let mut scratch = SweepScratch::default();
    let mut table = DegreeTable::new(set.len());
    let mut f = 0;
    for rank in 0..sweeper.anchors() {
        f += sweeper.sweep_anchor(rank, &mut scratch, |a, b, c| table.add_triangle(a, b, c))?;
    }
    Ok(EmptyTriangleReport::from_table(f, table))
}

/// Only `f(X)`, without a degree table.
pub fn count_empty_triangles(set: &PointSet) -> Result<u64> {
    enumerate_empty_triangles(set, |_| {})
}

fn triangle_is_empty(pts: &[Point], t: [usize; 3]) -> Result<bool> {
    let [a, b, c] = t.map(|i| pts[i]);
    let turn = crate::geom::orientation(a, b, c);
    if turn == crate::geom::Orientation::Collinear {
        return Err(Error::Collinear(t[0], t[1], t[2]));
    }
    Ok(pts
        .iter()
        .enumerate()
        .filter(|&(w, _)| !t.contains(&w))
        .all(|(_, &q)| classify(q, a, b, c, turn) == Containment::Exterior))
}

/// `O(n^4)` reference: every triple tested against every other point.
pub fn brute_force_empty_triangles(set: &PointSet, cap: usize) -> Result<EmptyTriangleReport> {
    check_size(set, 3)?;
    if set.len() > cap {
        return Err(Error::TooManyPoints { n: set.len(), max: cap });
    }
    let pts = set.points();
    let n = pts.len();
    let mut table = DegreeTable::new(n);
    let mut f = 0;
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if triangle_is_empty(pts, [i, j, k])? {
                    table.add_triangle(i, j, k);
                    f += 1;
                }
            }
        }
    }
    Ok(EmptyTriangleReport::from_table(f, table))
}

/// `deg(x_i, x_j; X)` by a direct `O(n^2)` scan. Degenerate triangles
/// through the pair are never counted.
pub fn pair_degree(set: &PointSet, i: usize, j: usize) -> Result<u32> {
    let pts = set.points();
    let n = pts.len();
    for index in [i, j] {
        if index >= n {
            return Err(Error::IndexOutOfRange { index, n });
        }
    }
    if i == j {
        return Err(Error::SameIndex(i));
    }
    let (a, b) = (pts[i], pts[j]);
    let mut degree = 0;
    for (z, &c) in pts.iter().enumerate() {
        if z == i || z == j {
            continue;
        }
        let turn = crate::geom::orientation(a, b, c);
        if turn == crate::geom::Orientation::Collinear {
            continue;
        }
        let empty = pts
            .iter()
            .enumerate()
            .filter(|&(w, _)| w != i && w != j && w != z)
            .all(|(_, &q)| classify(q, a, b, c, turn) == Containment::Exterior);
        degree += empty as u32;
    }
    Ok(degree)
}

/// `N_T(X)` together with the exact squared threshold it was counted at.
#[derive(Debug, Clone, PartialEq)]
pub struct NearPairStat {
    /// Requested threshold in body units, when it was given that way.
    pub t: Option<f64>,
    /// Threshold in squared grid units: pairs with `d^2 <= threshold_sq` count.
    pub threshold_sq: u128,
    /// `(t * scale)^2 - threshold_sq`, the part lost to rounding down.
    pub rounding: f64,
    pub count: u64,
    /// Qualifying pairs `(i, j)` with `i < j`, sorted, when requested.
    pub pairs: Option<Vec<(usize, usize)>>,
}

/// Converts a body-unit threshold to squared grid units, rounding down.
pub fn squared_threshold(t: f64, scale: crate::Scale) -> (u128, f64) {
    let g = t * scale.as_f64();
    let exact = g * g;
    let floor = libm::floor(exact);
    let thr = if floor <= 0.0 || floor.is_nan() {
        0
    } else if floor >= u128::MAX as f64 {
        u128::MAX
    } else {
        floor as u128
    };
    (thr, exact - thr as f64)
}

/// `N_T(X)` for a threshold `t` in body units.
pub fn near_pairs(set: &PointSet, t: f64, collect_pairs: bool) -> Result<NearPairStat> {
    if t.is_nan() || t <= 0.0 {
        return Err(Error::InvalidArgument("near-pair threshold must be positive"));
    }
    let (thr, rounding) = squared_threshold(t, set.scale());
    let mut stat = near_pairs_squared(set.points(), thr, collect_pairs);
    stat.t = Some(t);
    stat.rounding = rounding;
    Ok(stat)
}

fn isqrt_ceil(v: u128) -> u128 {
    if v == 0 {
        return 0;
    }
    let mut r = libm::sqrt(v as f64) as u128;
    while r * r > v {
        r -= 1;
    }
    while r * r < v {
        r += 1;
    }
    r
}

/// Counts pairs with squared distance `<= threshold_sq` by bucketing points
/// into square cells of side `ceil(sqrt(threshold_sq))`, so only the cell of
/// a point and its neighbours need to be scanned.
pub fn near_pairs_squared(points: &[Point], threshold_sq: u128, collect_pairs: bool) -> NearPairStat {
    let side = isqrt_ceil(threshold_sq).clamp(1, 1 << 40) as i64;
    let mut cells: Vec<((i64, i64), usize)> = points
        .iter()
        .enumerate()
        .map(|(i, p)| ((p.x.div_euclid(side), p.y.div_euclid(side)), i))
        .collect();
    cells.sort_unstable();

    let mut count = 0u64;
    let mut pairs = collect_pairs.then(Vec::new);
    let mut visit = |i: usize, j: usize| {
        if squared_distance(points[i], points[j]) <= threshold_sq {
            count += 1;
            if let Some(list) = pairs.as_mut() {
                list.push((i.min(j), i.max(j)));
            }
        }
    };
    let range_of = |key: (i64, i64)| {
        let lo = cells.partition_point(|c| c.0 < key);
        let hi = lo + cells[lo..].partition_point(|c| c.0 == key);
        lo..hi
    };

    let mut start = 0;
    while start < cells.len() {
        let key = cells[start].0;
        let end = start + cells[start..].partition_point(|c| c.0 == key);
        for a in start..end {
            for b in a + 1..end {
                visit(cells[a].1, cells[b].1);
            }
        }
        let (cx, cy) = key;
        for nb in [(cx, cy + 1), (cx + 1, cy - 1), (cx + 1, cy), (cx + 1, cy + 1)] {
            let r = range_of(nb);
            for a in start..end {
                for b in r.clone() {
                    visit(cells[a].1, cells[b].1);
                }
            }
        }
        start = end;
    }
    if let Some(list) = pairs.as_mut() {
        list.sort_unstable();
    }
    NearPairStat { t: None, threshold_sq, rounding: 0.0, count, pairs }
}

/// `O(n^2)` all-pairs count, the reference for [`near_pairs_squared`].
pub fn near_pairs_scan(points: &[Point], threshold_sq: u128) -> u64 {
    let mut count = 0;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            count += (squared_distance(points[i], points[j]) <= threshold_sq) as u64;
        }
    }
    count
}

/// Both sides of the first-moment inequality
/// `sum 1(|x - y| <= T) deg(x, y) <= N_T(X) deg X`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FirstMoment {
    pub degree_sum: u64,
    pub near_pairs: u64,
    pub deg_max: u32,
}

impl FirstMoment {
    pub fn holds(&self) -> bool {
        self.degree_sum <= self.near_pairs * self.deg_max as u64
    }

    /// Average degree over near pairs, `0/0` read as zero. Never exceeds `deg X`.
    pub fn mean_near_degree(&self) -> f64 {
        if self.near_pairs == 0 {
            0.0
        } else {
            self.degree_sum as f64 / self.near_pairs as f64
        }
    }
}

/// Sums `deg(x, y)` over the near pairs listed in `stat`.
pub fn first_moment(report: &EmptyTriangleReport, stat: &NearPairStat) -> Result<FirstMoment> {
    let pairs = stat
        .pairs
        .as_ref()
        .ok_or(Error::InvalidArgument("near-pair statistic was computed without its pair list"))?;
    let degree_sum = pairs.iter().map(|&(i, j)| report.degree.get(i, j) as u64).sum();
    Ok(FirstMoment { degree_sum, near_pairs: stat.count, deg_max: report.deg_max })
}

/// `sum over pairs with |x - y| <= t of deg(x, y)`.
pub fn thresholded_degree_sum(set: &PointSet, t: f64) -> Result<u64> {
    let stat = near_pairs(set, t, true)?;
    if stat.count == 0 {
        return Ok(0);
    }
    let report = degree_report(set)?;
    Ok(first_moment(&report, &stat)?.degree_sum)
}
