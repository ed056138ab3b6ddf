//! Mesh squares of side `1/sqrt(n)`, occupancy vectors and the independent
//! Poisson model on the same squares.
//!
//! Square boundaries are rounded to grid units once, and squares are
//! half-open `[x0, x1) x [y0, y1)`, so classifying a quantized point is exact
//! and the squares partition the plane.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use rand_distr::{Distribution, Poisson};

use crate::body::ConvexBody;
use crate::geom::{cross, find_duplicate, Point, PointSet, Scale};
use crate::{Error, Result};

/// A half-open mesh square in grid units.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MeshSquare {
    pub col: i64,
    pub row: i64,
    pub x0: i64,
    pub x1: i64,
    pub y0: i64,
    pub y1: i64,
}

impl MeshSquare {
    pub fn contains(&self, p: Point) -> bool {
        self.x0 <= p.x && p.x < self.x1 && self.y0 <= p.y && p.y < self.y1
    }
}

/// The `n/2` chosen squares `Q_1, ..., Q_{n/2}`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeshGrid {
    n: usize,
    mesh: f64,
    scale: Scale,
    squares: Vec<MeshSquare>,
    col_range: (i64, i64),
    row_range: (i64, i64),
    lookup: Vec<u32>,
}

const NO_SQUARE: u32 = u32::MAX;

impl MeshGrid {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Side length in body units, `1/sqrt(n)`.
    pub fn mesh(&self) -> f64 {
        self.mesh
    }

    pub fn scale(&self) -> Scale {
        self.scale
    }

    pub fn squares(&self) -> &[MeshSquare] {
        &self.squares
    }

    pub fn len(&self) -> usize {
        self.squares.len()
    }

    pub fn is_empty(&self) -> bool {
        self.squares.is_empty()
    }

    /// Grid coordinate of the `k`-th mesh line.
    fn line(mesh: f64, scale: Scale, k: i64) -> i64 {
        scale.to_grid(k as f64 * mesh)
    }

    fn locate(&self, v: i64) -> i64 {
        let step = self.mesh * self.scale.as_f64();
        let mut k = libm::floor(v as f64 / step) as i64;
        while Self::line(self.mesh, self.scale, k) > v {
            k -= 1;
        }
        while Self::line(self.mesh, self.scale, k + 1) <= v {
            k += 1;
        }
        k
    }

    /// Index of the chosen square containing `p`, if any.
    pub fn classify(&self, p: Point) -> Option<usize> {
        let (c, r) = (self.locate(p.x), self.locate(p.y));
        if c < self.col_range.0 || c > self.col_range.1 || r < self.row_range.0 || r > self.row_range.1 {
            return None;
        }
        let width = (self.col_range.1 - self.col_range.0 + 1) as usize;
        let slot = (r - self.row_range.0) as usize * width + (c - self.col_range.0) as usize;
        match self.lookup[slot] {
            NO_SQUARE => None,
            i => Some(i as usize),
        }
    }
}

/// Selects the first `n/2` mesh squares fully inside the body, scanning the
/// origin-anchored grid row by row (bottom to top, left to right).
pub fn build_grid(body: &ConvexBody, n: usize, scale: Scale) -> Result<MeshGrid> {
    if n % 2 == 1 {
        return Err(Error::OddCount(n));
    }
    if n == 0 {
        return Err(Error::TooFewPoints { needed: 2, got: 0 });
    }
    let mesh = 1.0 / libm::sqrt(n as f64);
    let needed = n / 2;
    let [xmin, xmax, ymin, ymax] = body.bounding_box();
    let (c0, c1) = (libm::floor(xmin / mesh) as i64 - 1, libm::ceil(xmax / mesh) as i64 + 1);
    let (r0, r1) = (libm::floor(ymin / mesh) as i64 - 1, libm::ceil(ymax / mesh) as i64 + 1);
    let line = |k| MeshGrid::line(mesh, scale, k);
    let corner_inside = |x: i64, y: i64| body.contains([scale.to_body(x), scale.to_body(y)]);

    let mut squares = Vec::with_capacity(needed);
    let mut available = 0usize;
    for row in r0..r1 {
        for col in c0..c1 {
            let sq = MeshSquare { col, row, x0: line(col), x1: line(col + 1), y0: line(row), y1: line(row + 1) };
            let inside = [(sq.x0, sq.y0), (sq.x1, sq.y0), (sq.x1, sq.y1), (sq.x0, sq.y1)]
                .iter()
                .all(|&(x, y)| corner_inside(x, y));
            if inside {
                available += 1;
                if squares.len() < needed {
                    squares.push(sq);
                }
            }
        }
    }
    if squares.len() < needed {
        return Err(Error::InsufficientSquares { needed, available });
    }
    let col_range = squares.iter().fold((i64::MAX, i64::MIN), |(a, b), s| (a.min(s.col), b.max(s.col)));
    let row_range = squares.iter().fold((i64::MAX, i64::MIN), |(a, b), s| (a.min(s.row), b.max(s.row)));
    let width = (col_range.1 - col_range.0 + 1) as usize;
    let height = (row_range.1 - row_range.0 + 1) as usize;
    let mut lookup = vec![NO_SQUARE; width * height];
    for (i, s) in squares.iter().enumerate() {
        lookup[(s.row - row_range.0) as usize * width + (s.col - col_range.0) as usize] = i as u32;
    }
    Ok(MeshGrid { n, mesh, scale, squares, col_range, row_range, lookup })
}

/// `(N_1, ..., N_M, N*)` of a sample together with the members of each square.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridOccupancy {
    pub counts: Vec<u32>,
    pub remainder: usize,
    /// Point indices per square, in increasing order.
    pub members: Vec<Vec<usize>>,
}

impl GridOccupancy {
    pub fn total(&self) -> usize {
        self.remainder + self.counts.iter().map(|&c| c as usize).sum::<usize>()
    }
}

pub fn occupancy_from_sample(set: &PointSet, grid: &MeshGrid) -> GridOccupancy {
    let mut counts = vec![0u32; grid.len()];
    let mut members = vec![Vec::new(); grid.len()];
    let mut remainder = 0;
    for (i, &p) in set.points().iter().enumerate() {
        match grid.classify(p) {
            Some(q) => {
                counts[q] += 1;
                members[q].push(i);
            }
            None => remainder += 1,
        }
    }
    GridOccupancy { counts, remainder, members }
}

/// Counts only, for events that do not look at positions.
pub fn occupancy_counts(points: &[Point], grid: &MeshGrid) -> (Vec<u32>, usize) {
    let mut counts = vec![0u32; grid.len()];
    let mut remainder = 0;
    for &p in points {
        match grid.classify(p) {
            Some(q) => counts[q] += 1,
            None => remainder += 1,
        }
    }
    (counts, remainder)
}

/// Independent `Poisson(1)` counts `P(j)` with uniform payloads, plus
/// `P* ~ Poisson(n/2)` without payload.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoissonGridModel {
    pub counts: Vec<u32>,
    pub remainder: u64,
    /// Points of `zeta^(j)` in grid units, inside square `j`.
    pub payloads: Vec<Vec<Point>>,
}

fn poisson<R: Rng + ?Sized>(lambda: f64, rng: &mut R) -> u64 {
    Poisson::new(lambda).expect("positive rate").sample(rng) as u64
}

/// `M` independent `Poisson(1)` counts and `P* ~ Poisson(n/2)`.
pub fn sample_poisson_counts<R: Rng + ?Sized>(m: usize, n: usize, rng: &mut R) -> (Vec<u32>, u64) {
    let unit = Poisson::new(1.0).expect("positive rate");
    let counts = (0..m).map(|_| unit.sample(rng) as u32).collect();
    let remainder = if n == 0 { 0 } else { poisson(n as f64 / 2.0, rng) };
    (counts, remainder)
}

/// One draw of the Poisson model on the squares of `grid`. Payload points are
/// uniform grid points of their half-open square, redrawn (newest first)
/// until each payload is in general position.
pub fn sample_poisson_grid<R: Rng + ?Sized>(grid: &MeshGrid, n: usize, rng: &mut R) -> PoissonGridModel {
    let (counts, remainder) = sample_poisson_counts(grid.len(), n, rng);
    let payloads = grid
        .squares()
        .iter()
        .zip(&counts)
        .map(|(sq, &k)| uniform_in_square(sq, k as usize, rng))
        .collect();
    PoissonGridModel { counts, remainder, payloads }
}

/// `k` uniform grid points of a square in general position (small `k`).
pub fn uniform_in_square<R: Rng + ?Sized>(sq: &MeshSquare, k: usize, rng: &mut R) -> Vec<Point> {
    let draw = |rng: &mut R| Point::new(rng.random_range(sq.x0..sq.x1), rng.random_range(sq.y0..sq.y1));
    let mut pts: Vec<Point> = Vec::with_capacity(k);
    while pts.len() < k {
        let p = draw(rng);
        let n = pts.len();
        let clash = pts.contains(&p) || (0..n).any(|i| (i + 1..n).any(|j| cross(pts[i], pts[j], p) == 0));
        if !clash {
            pts.push(p);
        }
    }
    debug_assert!(find_duplicate(&pts).is_none());
    pts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::DEFAULT_SCALE;

    #[test]
    fn unit_square_with_eight_points() {
        let g = build_grid(&ConvexBody::unit_square(), 8, DEFAULT_SCALE).unwrap();
        assert_eq!(g.len(), 4);
        let cells: Vec<(i64, i64)> = g.squares().iter().map(|s| (s.col, s.row)).collect();
        assert_eq!(cells, [(0, 0), (1, 0), (0, 1), (1, 1)]);
    }

    #[test]
    fn odd_and_oversized_requests_fail() {
        let sq = ConvexBody::unit_square();
        assert_eq!(build_grid(&sq, 7, DEFAULT_SCALE), Err(Error::OddCount(7)));
        // n = 2: one square of side 0.707 fits.
        assert!(build_grid(&sq, 2, DEFAULT_SCALE).is_ok());
        let disk = ConvexBody::unit_area_disk();
        assert!(matches!(build_grid(&disk, 4, DEFAULT_SCALE), Err(Error::InsufficientSquares { .. })));
    }

    #[test]
    fn classification_is_a_partition() {
        let g = build_grid(&ConvexBody::unit_square(), 50, DEFAULT_SCALE).unwrap();
        for (i, s) in g.squares().iter().enumerate() {
            for p in [Point::new(s.x0, s.y0), Point::new(s.x1 - 1, s.y1 - 1), Point::new((s.x0 + s.x1) / 2, s.y0)] {
                assert_eq!(g.classify(p), Some(i));
            }
            assert_ne!(g.classify(Point::new(s.x1, s.y0)), Some(i));
            assert_ne!(g.classify(Point::new(s.x0, s.y1)), Some(i));
        }
        assert_eq!(g.classify(Point::new(-5, -5)), None);
    }

    #[test]
    fn occupancy_extremes() {
        let g = build_grid(&ConvexBody::unit_square(), 8, DEFAULT_SCALE).unwrap();
        let s = g.squares()[2];
        let inside: Vec<Point> = (0..8).map(|i| Point::new(s.x0 + 10 + i, s.y0 + 3 + i * i)).collect();
        let occ = occupancy_from_sample(&PointSet::new(inside, DEFAULT_SCALE).unwrap(), &g);
        assert_eq!(occ.counts, [0, 0, 8, 0]);
        assert_eq!(occ.remainder, 0);
        assert_eq!(occ.members[2], (0..8).collect::<Vec<_>>());
        let top = (0.9 * DEFAULT_SCALE.as_f64()) as i64;
        let outside: Vec<Point> = (0..8).map(|i| Point::new(top + i, top + 2 * i * i)).collect();
        let occ = occupancy_from_sample(&PointSet::new(outside, DEFAULT_SCALE).unwrap(), &g);
        assert_eq!((occ.remainder, occ.total()), (8, 8));
    }

    #[test]
    fn payloads_stay_in_their_squares() {
        let g = build_grid(&ConvexBody::unit_square(), 40, DEFAULT_SCALE).unwrap();
        let mut rng = crate::rng::from_seed(5);
        let model = sample_poisson_grid(&g, 40, &mut rng);
        for ((sq, pts), &k) in g.squares().iter().zip(&model.payloads).zip(&model.counts) {
            assert_eq!(pts.len(), k as usize);
            assert!(pts.iter().all(|&p| sq.contains(p)));
            assert!(crate::geom::is_general_position(pts).is_ok());
        }
    }
}
