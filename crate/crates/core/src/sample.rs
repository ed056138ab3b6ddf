//! Seeded uniform samples of convex bodies, quantized to the integer grid.

use alloc::vec::Vec;

use rand::Rng;

use crate::body::ConvexBody;
use crate::geom::{find_collinear_triple, find_duplicate, Point, PointSet, Scale};
use crate::rng;

/// Grid units per body unit for sampled sets: `2^28`, leaving room for bodies
/// that reach up to 8 units from the origin.
pub const DEFAULT_SCALE: Scale = Scale::power_of_two(28);

/// What a sampler must rule out before returning.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Degeneracy {
    /// Repeated points only (`O(n log n)`).
    Duplicates,
    /// Repeated points and collinear triples (`O(n^2 log n)`).
    GeneralPosition,
}

/// One grid point of the body, redrawn until it passes the containment test.
pub fn draw_point<R: Rng + ?Sized>(body: &ConvexBody, scale: Scale, rng: &mut R) -> Point {
    loop {
        let q = body.sample(rng);
        if !body.contains(q) {
            continue;
        }
        let p = Point::new(scale.to_grid(q[0]), scale.to_grid(q[1]));
        if p.in_range() && body.contains_grid_point(p, scale) {
            return p;
        }
    }
}

/// `n` independent uniform points of a normalized body in general position.
pub fn sample_uniform(body: &ConvexBody, n: usize, seed: u64) -> PointSet {
    sample_uniform_with(body, n, DEFAULT_SCALE, Degeneracy::GeneralPosition, &mut rng::from_seed(seed))
}

/// Full control over scale, degeneracy checks and the random stream.
///
/// Points are drawn in index order. Whenever a duplicate (or, if requested, a
/// collinear triple) shows up, the highest index involved is redrawn from the
/// same stream, so the result is a deterministic function of the stream.
pub fn sample_uniform_with<R: Rng + ?Sized>(
    body: &ConvexBody,
    n: usize,
    scale: Scale,
    check: Degeneracy,
    rng: &mut R,
) -> PointSet {
    let mut points: Vec<Point> = (0..n).map(|_| draw_point(body, scale, rng)).collect();
    loop {
        if let Some((_, j)) = find_duplicate(&points) {
            points[j] = draw_point(body, scale, rng);
            continue;
        }
        if check == Degeneracy::GeneralPosition {
            if let Some([_, _, k]) = find_collinear_triple(&points) {
                points[k] = draw_point(body, scale, rng);
                continue;
            }
        }
        break;
    }
    PointSet::new(points, scale).expect("sampled points are distinct and in range")
}

/// Adds `extra` uniform points to `fixed`, keeping the fixed points at the
/// front and redrawing new points that create duplicates or collinear triples.
pub fn extend_uniform<R: Rng + ?Sized>(body: &ConvexBody, fixed: &[Point], extra: usize, scale: Scale, rng: &mut R) -> PointSet {
    let mut points = fixed.to_vec();
    points.extend((0..extra).map(|_| draw_point(body, scale, rng)));
    loop {
        if let Some((_, j)) = find_duplicate(&points) {
            assert!(j >= fixed.len(), "fixed points must be distinct");
            points[j] = draw_point(body, scale, rng);
            continue;
        }
        if let Some([_, _, k]) = find_collinear_triple(&points) {
            assert!(k >= fixed.len(), "fixed points must be in general position");
            points[k] = draw_point(body, scale, rng);
            continue;
        }
        break;
    }
    PointSet::new(points, scale).expect("sampled points are distinct and in range")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_point_lies_in_the_body() {
        for seed in 0..50 {
            let s = sample_uniform(&ConvexBody::unit_square(), 1, seed);
            assert_eq!(s.len(), 1);
            assert!(ConvexBody::unit_square().contains_grid_point(s.points()[0], s.scale()));
        }
    }

    #[test]
    fn same_seed_same_set() {
        let disk = ConvexBody::unit_area_disk();
        assert_eq!(sample_uniform(&disk, 300, 9), sample_uniform(&disk, 300, 9));
        assert_ne!(sample_uniform(&disk, 300, 9), sample_uniform(&disk, 300, 10));
    }

    #[test]
    fn coarse_grid_forces_redraws() {
        // On a 12x12 lattice collinear triples are everywhere, so this only
        // terminates if the redraw loop works.
        let scale = Scale::new(12, 1).unwrap();
        let mut rng = rng::from_seed(3);
        let s = sample_uniform_with(&ConvexBody::unit_square(), 7, scale, Degeneracy::GeneralPosition, &mut rng);
        assert!(s.is_general_position().is_ok());
        let d = sample_uniform_with(&ConvexBody::unit_square(), 60, scale, Degeneracy::Duplicates, &mut rng);
        assert!(find_duplicate(d.points()).is_none());
    }

    #[test]
    fn fixed_points_are_kept() {
        let fixed = [Point::new(1 << 27, 1 << 27), Point::new((1 << 27) + 1000, 1 << 27)];
        let mut rng = rng::from_seed(1);
        let s = extend_uniform(&ConvexBody::unit_square(), &fixed, 50, DEFAULT_SCALE, &mut rng);
        assert_eq!(&s.points()[..2], &fixed);
        assert_eq!(s.len(), 52);
        assert!(s.is_general_position().is_ok());
    }
}
