//! Exact planar primitives on integer coordinates.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::{Error, Result};

/// Exclusive bound on the absolute value of a coordinate.
pub const COORD_LIMIT: i64 = 1 << 31;

/// A point on the integer grid.
///
/// Coordinates satisfy `|x|, |y| < 2^31`, which keeps every orientation
/// determinant exact in `i128`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: i64,
    pub y: i64,
}

impl Point {
    /// Builds a point without checking the coordinate range.
    pub const fn new(x: i64, y: i64) -> Self {
        Point { x, y }
    }

    pub fn checked(x: i64, y: i64) -> Result<Self> {
        let p = Point { x, y };
        if p.in_range() {
            Ok(p)
        } else {
            Err(Error::CoordinateOutOfRange { x, y })
        }
    }

    pub fn in_range(&self) -> bool {
        self.x > -COORD_LIMIT && self.x < COORD_LIMIT && self.y > -COORD_LIMIT && self.y < COORD_LIMIT
    }
}

impl From<(i64, i64)> for Point {
    fn from((x, y): (i64, i64)) -> Self {
        Point { x, y }
    }
}

/// Sign of an orientation determinant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(i8)]
pub enum Orientation {
    Clockwise = -1,
    Collinear = 0,
    CounterClockwise = 1,
}

impl Orientation {
    pub fn as_i8(self) -> i8 {
        self as i8
    }

    pub fn reversed(self) -> Self {
        match self {
            Orientation::Clockwise => Orientation::CounterClockwise,
            Orientation::Collinear => Orientation::Collinear,
            Orientation::CounterClockwise => Orientation::Clockwise,
        }
    }
}

/// The doubled signed area `(q - p) x (r - p)`, exact for in-range points.
#[inline]
pub fn cross(p: Point, q: Point, r: Point) -> i128 {
    let ux = (q.x - p.x) as i128;
    let uy = (q.y - p.y) as i128;
    let vx = (r.x - p.x) as i128;
    let vy = (r.y - p.y) as i128;
    ux * vy - uy * vx
}

#[inline]
pub fn orientation(p: Point, q: Point, r: Point) -> Orientation {
    match cross(p, q, r).cmp(&0) {
        Ordering::Less => Orientation::Clockwise,
        Ordering::Equal => Orientation::Collinear,
        Ordering::Greater => Orientation::CounterClockwise,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Containment {
    Interior,
    Boundary,
    Exterior,
}

/// Classifies `p` against the closed triangle `abc` from three orientation signs.
pub fn point_in_triangle(p: Point, a: Point, b: Point, c: Point) -> Result<Containment> {
    let turn = orientation(a, b, c);
    if turn == Orientation::Collinear {
        return Err(Error::DegenerateTriangle);
    }
    Ok(classify(p, a, b, c, turn))
}

/// Same as [`point_in_triangle`] with the triangle's orientation already known
/// to be non-degenerate.
#[inline]
pub(crate) fn classify(p: Point, a: Point, b: Point, c: Point, turn: Orientation) -> Containment {
    let s1 = orientation(a, b, p);
    let s2 = orientation(b, c, p);
    let s3 = orientation(c, a, p);
    let opposite = turn.reversed();
    if s1 == opposite || s2 == opposite || s3 == opposite {
        Containment::Exterior
    } else if s1 == turn && s2 == turn && s3 == turn {
        Containment::Interior
    } else {
        Containment::Boundary
    }
}

#[inline]
pub fn squared_distance(p: Point, q: Point) -> u128 {
    let dx = (p.x - q.x) as i128;
    let dy = (p.y - q.y) as i128;
    (dx * dx + dy * dy) as u128
}

/// Grid units per unit length of the sampling body, as a positive rational.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Scale {
    num: u64,
    den: u64,
}

impl Scale {
    pub const ONE: Scale = Scale { num: 1, den: 1 };

    pub fn new(num: u64, den: u64) -> Result<Self> {
        if num == 0 || den == 0 {
            return Err(Error::InvalidScale { num, den });
        }
        let g = gcd(num, den);
        Ok(Scale { num: num / g, den: den / g })
    }

    pub const fn power_of_two(bits: u32) -> Self {
        Scale { num: 1 << bits, den: 1 }
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Nearest grid coordinate of a body-unit coordinate.
    pub fn to_grid(&self, v: f64) -> i64 {
        libm::round(v * self.as_f64()) as i64
    }

    pub fn to_body(&self, v: i64) -> f64 {
        v as f64 / self.as_f64()
    }

    pub fn point_to_body(&self, p: Point) -> [f64; 2] {
        [self.to_body(p.x), self.to_body(p.y)]
    }
}

impl Default for Scale {
    fn default() -> Self {
        Scale::ONE
    }
}

impl fmt::Display for Scale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// A finite planar point configuration with its embedding scale.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PointSet {
    points: Vec<Point>,
    scale: Scale,
}

impl PointSet {
    /// Validates coordinate ranges and distinctness.
    pub fn new(points: Vec<Point>, scale: Scale) -> Result<Self> {
        if let Some(p) = points.iter().find(|p| !p.in_range()) {
            return Err(Error::CoordinateOutOfRange { x: p.x, y: p.y });
        }
        if let Some((i, j)) = find_duplicate(&points) {
            return Err(Error::DuplicatePoint(i, j));
        }
        Ok(PointSet { points, scale })
    }

    /// Unit scale, checked like [`PointSet::new`].
    pub fn from_coords(coords: &[(i64, i64)]) -> Result<Self> {
        PointSet::new(coords.iter().map(|&c| Point::from(c)).collect(), Scale::ONE)
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn scale(&self) -> Scale {
        self.scale
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn into_points(self) -> Vec<Point> {
        self.points
    }

    /// The subset selected by `indices`, keeping their order.
    pub fn subset(&self, indices: &[usize]) -> PointSet {
        PointSet {
            points: indices.iter().map(|&i| self.points[i]).collect(),
            scale: self.scale,
        }
    }

    pub fn is_general_position(&self) -> Result<()> {
        is_general_position(&self.points)
    }
}

/// First pair of equal points, if any, as `(i, j)` with `i < j`.
pub fn find_duplicate(points: &[Point]) -> Option<(usize, usize)> {
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_unstable_by_key(|&i| (points[i], i));
    idx.windows(2)
        .filter(|w| points[w[0]] == points[w[1]])
        .map(|w| (w[0].min(w[1]), w[0].max(w[1])))
        .min()
}

/// Brute force over all `C(n, 3)` triples; reports the lexicographically first
/// collinear triple.
pub fn is_general_position(points: &[Point]) -> Result<()> {
    let n = points.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if cross(points[i], points[j], points[k]) == 0 {
                    return Err(Error::Collinear(i, j, k));
                }
            }
        }
    }
    Ok(())
}

/// Finds some collinear triple (or a duplicated point, reported as a triple)
/// in `O(n^2 log n)` by sorting around each anchor.
///
/// Every collinear triple is seen from its lexicographically smallest point,
/// where the other two share a direction and end up adjacent after the sort.
pub fn find_collinear_triple(points: &[Point]) -> Option<[usize; 3]> {
    let n = points.len();
    if n < 3 {
        return None;
    }
    if let Some((i, j)) = find_duplicate(points) {
        let k = (0..n).find(|&k| k != i && k != j).unwrap();
        let mut t = [i, j, k];
        t.sort_unstable();
        return Some(t);
    }
    let order = lex_order(points);
    let mut around: Vec<usize> = Vec::with_capacity(n);
    for (rank, &a) in order.iter().enumerate() {
        let p = points[a];
        around.clear();
        around.extend_from_slice(&order[rank + 1..]);
        if around.len() < 2 {
            break;
        }
        sort_by_angle(points, p, &mut around);
        for w in around.windows(2) {
            if cross(p, points[w[0]], points[w[1]]) == 0 {
                let mut t = [a, w[0], w[1]];
                t.sort_unstable();
                return Some(t);
            }
        }
    }
    None
}

/// Indices sorted by `(x, y)`.
pub(crate) fn lex_order(points: &[Point]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_unstable_by_key(|&i| points[i]);
    order
}

/// Sorts points that are lexicographically greater than `p` counterclockwise
/// around `p`. Those points span an angle range shorter than a half turn, so
/// the orientation test is a valid comparator.
pub(crate) fn sort_by_angle(points: &[Point], p: Point, idx: &mut [usize]) {
    idx.sort_unstable_by(|&a, &b| 0.cmp(&cross(p, points[a], points[b])));
}

/// Strict convex hull in counterclockwise order (monotone chain), starting at
/// the lexicographically smallest point. Collinear boundary points are dropped.
pub fn convex_hull(points: &[Point]) -> Vec<usize> {
    let n = points.len();
    if n < 3 {
        return lex_order(points);
    }
    let order = lex_order(points);
    let mut hull: Vec<usize> = Vec::with_capacity(2 * n);
    let turn_left = |hull: &[usize], i: usize| {
        let k = hull.len();
        cross(points[hull[k - 2]], points[hull[k - 1]], points[i]) > 0
    };
    for &i in &order {
        while hull.len() >= 2 && !turn_left(&hull, i) {
            hull.pop();
        }
        hull.push(i);
    }
    let lower = hull.len() + 1;
    for &i in order.iter().rev().skip(1) {
        while hull.len() >= lower && !turn_left(&hull, i) {
            hull.pop();
        }
        hull.push(i);
    }
    hull.pop();
    hull
}

/// `x -> (M x + t) / den` with integer numerators and a positive common
/// denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AffineMap {
    m: [[i64; 2]; 2],
    t: [i64; 2],
    den: i64,
}

impl AffineMap {
    pub fn new(m: [[i64; 2]; 2], t: [i64; 2], den: i64) -> Result<Self> {
        if den <= 0 {
            return Err(Error::InvalidArgument("affine denominator must be positive"));
        }
        let map = AffineMap { m, t, den };
        if map.det_numerator() == 0 {
            return Err(Error::SingularMap);
        }
        Ok(map)
    }

    pub fn integer(m: [[i64; 2]; 2], t: [i64; 2]) -> Result<Self> {
        AffineMap::new(m, t, 1)
    }

    pub fn identity() -> Self {
        AffineMap { m: [[1, 0], [0, 1]], t: [0, 0], den: 1 }
    }

    fn det_numerator(&self) -> i128 {
        self.m[0][0] as i128 * self.m[1][1] as i128 - self.m[0][1] as i128 * self.m[1][0] as i128
    }

    /// Sign of `det M`; never zero for a constructed map.
    pub fn det_sign(&self) -> i8 {
        self.det_numerator().signum() as i8
    }

    pub fn apply_point(&self, p: Point) -> Option<Point> {
        let [[a, b], [c, d]] = self.m;
        let x = a as i128 * p.x as i128 + b as i128 * p.y as i128 + self.t[0] as i128;
        let y = c as i128 * p.x as i128 + d as i128 * p.y as i128 + self.t[1] as i128;
        let den = self.den as i128;
        if x % den != 0 || y % den != 0 {
            return None;
        }
        let (x, y) = (x / den, y / den);
        let lim = COORD_LIMIT as i128;
        if x <= -lim || x >= lim || y <= -lim || y >= lim {
            return None;
        }
        Some(Point::new(x as i64, y as i64))
    }

    /// Maps every point, keeping indices. Fails if an image leaves the grid.
    pub fn apply(&self, set: &PointSet) -> Result<PointSet> {
        let points = set
            .points()
            .iter()
            .enumerate()
            .map(|(index, &p)| self.apply_point(p).ok_or(Error::AffineOverflow { index }))
            .collect::<Result<Vec<_>>>()?;
        PointSet::new(points, set.scale())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn p(x: i64, y: i64) -> Point {
        Point::new(x, y)
    }

    #[test]
    fn orientation_examples() {
        assert_eq!(orientation(p(0, 0), p(1, 0), p(0, 1)), Orientation::CounterClockwise);
        assert_eq!(orientation(p(0, 0), p(1, 0), p(2, 0)), Orientation::Collinear);
        assert_eq!(orientation(p(0, 0), p(0, 1), p(1, 0)), Orientation::Clockwise);
    }

    #[test]
    fn orientation_is_exact_at_the_coordinate_limit() {
        let m = COORD_LIMIT - 1;
        assert_eq!(orientation(p(-m, -m), p(m, m), p(m - 1, m)), Orientation::CounterClockwise);
        assert_eq!(orientation(p(-m, -m), p(m, m), p(0, 0)), Orientation::Collinear);
        assert_eq!(orientation(p(-m, -m), p(m, m), p(m, m - 1)), Orientation::Clockwise);
    }

    #[test]
    fn triangle_classification() {
        let (a, b, c) = (p(0, 0), p(6, 0), p(0, 6));
        assert_eq!(point_in_triangle(p(1, 1), a, b, c), Ok(Containment::Interior));
        assert_eq!(point_in_triangle(p(3, 0), a, b, c), Ok(Containment::Boundary));
        assert_eq!(point_in_triangle(p(7, 7), a, b, c), Ok(Containment::Exterior));
        assert_eq!(point_in_triangle(a, a, b, c), Ok(Containment::Boundary));
        assert_eq!(point_in_triangle(p(1, 1), a, b, c), point_in_triangle(p(1, 1), c, b, a));
        assert_eq!(point_in_triangle(p(1, 1), a, p(1, 0), p(2, 0)), Err(Error::DegenerateTriangle));
    }

    #[test]
    fn general_position_examples() {
        assert_eq!(is_general_position(&[p(0, 0), p(1, 0), p(0, 1)]), Ok(()));
        assert_eq!(is_general_position(&[p(0, 0), p(1, 0), p(2, 0)]), Err(Error::Collinear(0, 1, 2)));
        assert_eq!(is_general_position(&[p(0, 0), p(4, 1), p(1, 4), p(5, 5)]), Ok(()));
    }

    #[test]
    fn fast_collinear_search_finds_hidden_triple() {
        let pts = vec![p(5, 1), p(0, 0), p(9, 4), p(2, 2), p(7, 3), p(4, 4)];
        // (0,0), (2,2), (4,4)
        assert_eq!(find_collinear_triple(&pts), Some([1, 3, 5]));
        let dup = vec![p(1, 1), p(3, 0), p(1, 1)];
        assert_eq!(find_collinear_triple(&dup), Some([0, 1, 2]));
        assert_eq!(find_collinear_triple(&[p(0, 0), p(4, 1), p(1, 4), p(5, 5)]), None);
    }

    #[test]
    fn affine_examples() {
        let set = PointSet::from_coords(&[(0, 0), (1, 0), (0, 1)]).unwrap();
        assert_eq!(AffineMap::identity().apply(&set).unwrap(), set);
        let shear = AffineMap::integer([[1, 1], [0, 1]], [0, 0]).unwrap();
        let img = shear.apply(&set).unwrap();
        assert_eq!(img.points(), &[p(0, 0), p(1, 0), p(1, 1)]);
        let rot = AffineMap::integer([[0, -1], [1, 0]], [0, 0]).unwrap();
        let r = rot.apply(&set).unwrap();
        assert_eq!(
            orientation(r.points()[0], r.points()[1], r.points()[2]),
            orientation(set.points()[0], set.points()[1], set.points()[2])
        );
        assert_eq!(AffineMap::integer([[1, 2], [2, 4]], [0, 0]), Err(Error::SingularMap));
        let big = AffineMap::integer([[1 << 20, 0], [0, 1]], [0, 0]).unwrap();
        let far = PointSet::from_coords(&[(1 << 12, 0)]).unwrap();
        assert_eq!(big.apply(&far), Err(Error::AffineOverflow { index: 0 }));
        let half = AffineMap::new([[1, 0], [0, 1]], [0, 0], 2).unwrap();
        assert_eq!(half.apply(&set), Err(Error::AffineOverflow { index: 1 }));
    }

    #[test]
    fn distances() {
        assert_eq!(squared_distance(p(0, 0), p(3, 4)), 25);
        assert_eq!(squared_distance(p(2, 2), p(2, 2)), 0);
        assert_eq!(squared_distance(p(0, 0), p(1, 1)), 2);
    }

    #[test]
    fn hull_drops_interior_and_collinear_points() {
        let pts = [p(0, 0), p(6, 0), p(3, 5), p(3, 2), p(3, 0)];
        assert_eq!(convex_hull(&pts), vec![0, 1, 2]);
    }

    #[test]
    fn point_set_validation() {
        assert_eq!(PointSet::from_coords(&[(0, 0), (1, 1), (0, 0)]), Err(Error::DuplicatePoint(0, 2)));
        assert!(matches!(
            PointSet::from_coords(&[(COORD_LIMIT, 0)]),
            Err(Error::CoordinateOutOfRange { .. })
        ));
        assert_eq!(Scale::new(6, 4).unwrap(), Scale::new(3, 2).unwrap());
        assert!(Scale::new(0, 1).is_err());
    }
}
