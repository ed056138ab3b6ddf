//! Convex sampling domains.
//!
//! A body is a strictly convex counterclockwise polygon or an ellipse. Its
//! inscribed and circumscribed disk hints describe the standard position
//! `r D ⊂ C ⊂ 2 r D` once the body has gone through [`ConvexBody::normalize`].

use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::Rng;

use crate::geom::{Point, Scale};
use crate::{Error, Result};

/// Inradius of the unit-area equilateral triangle, `27^(-1/4)`: the radius
/// `r` with `r D ⊂ C ⊂ 2 r D` that works for every body in standard position.
pub fn standard_radius() -> f64 {
    libm::pow(27.0, -0.25)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    /// Counterclockwise, strictly convex.
    Polygon(Vec<[f64; 2]>),
    Ellipse { center: [f64; 2], semi_axes: [f64; 2], rotation: f64 },
}

/// A real affine map `x -> M x + t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealAffine {
    pub m: [[f64; 2]; 2],
    pub t: [f64; 2],
}

impl RealAffine {
    pub fn identity() -> Self {
        RealAffine { m: [[1.0, 0.0], [0.0, 1.0]], t: [0.0, 0.0] }
    }

    pub fn apply(&self, p: [f64; 2]) -> [f64; 2] {
        [
            self.m[0][0] * p[0] + self.m[0][1] * p[1] + self.t[0],
            self.m[1][0] * p[0] + self.m[1][1] * p[1] + self.t[1],
        ]
    }

    pub fn det(&self) -> f64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvexBody {
    shape: Shape,
    area: f64,
    inscribed_center: [f64; 2],
    inscribed_radius: f64,
    circumscribed_radius: f64,
    /// Cumulative areas of the fan triangles `(v0, v_i, v_{i+1})`.
    fan: Vec<f64>,
}

fn cross3(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    libm::hypot(a[0] - b[0], a[1] - b[1])
}

impl ConvexBody {
    pub fn polygon(vertices: Vec<[f64; 2]>) -> Result<Self> {
        let k = vertices.len();
        if k < 3 {
            return Err(Error::InvalidBody("a polygon needs at least three vertices"));
        }
        if vertices.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::InvalidBody("non-finite vertex"));
        }
        for i in 0..k {
            let (a, b) = (vertices[i], vertices[(i + 1) % k]);
            for (j, &c) in vertices.iter().enumerate() {
                if j != i && j != (i + 1) % k && cross3(a, b, c) <= 0.0 {
                    return Err(Error::InvalidBody("polygon is not strictly convex and counterclockwise"));
                }
            }
        }
        let mut fan = Vec::with_capacity(k - 2);
        let mut acc = 0.0;
        for i in 1..k - 1 {
            acc += 0.5 * cross3(vertices[0], vertices[i], vertices[i + 1]);
            fan.push(acc);
        }
        let (inscribed_center, inscribed_radius) = polygon_inscribed_disk(&vertices);
        let circumscribed_radius = vertices.iter().map(|&v| dist(v, inscribed_center)).fold(0.0, f64::max);
        Ok(ConvexBody {
            shape: Shape::Polygon(vertices),
            area: acc,
            inscribed_center,
            inscribed_radius,
            circumscribed_radius,
            fan,
        })
    }

    pub fn ellipse(center: [f64; 2], semi_axes: [f64; 2], rotation: f64) -> Result<Self> {
        let [a, b] = semi_axes;
        if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) || !rotation.is_finite() {
            return Err(Error::InvalidBody("ellipse semi-axes must be positive and finite"));
        }
        if !(center[0].is_finite() && center[1].is_finite()) {
            return Err(Error::InvalidBody("non-finite ellipse center"));
        }
        Ok(ConvexBody {
            shape: Shape::Ellipse { center, semi_axes, rotation },
            area: PI * a * b,
            inscribed_center: center,
            inscribed_radius: a.min(b),
            circumscribed_radius: a.max(b),
            fan: Vec::new(),
        })
    }

    /// `[0, 1]^2`.
    pub fn unit_square() -> Self {
        ConvexBody::polygon([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]].to_vec()).unwrap()
    }

    /// The area-one disk centered at the origin, in standard position.
    pub fn unit_area_disk() -> Self {
        let (body, _) = ConvexBody::ellipse([0.0, 0.0], [1.0, 1.0], 0.0).unwrap().normalize().unwrap();
        body
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn inscribed_center(&self) -> [f64; 2] {
        self.inscribed_center
    }

    /// `r`: a disk of this radius around [`Self::inscribed_center`] lies in the body.
    pub fn inscribed_radius(&self) -> f64 {
        self.inscribed_radius
    }

    /// Every point of the body is within this distance of the inscribed center.
    pub fn circumscribed_radius(&self) -> f64 {
        self.circumscribed_radius
    }

    /// `rho = r / 2`: points of the `rho`-disk are at least `rho` away from the boundary.
    pub fn rho(&self) -> f64 {
        self.inscribed_radius / 2.0
    }

    /// Closed containment; ellipses allow a relative slack of `1e-12`.
    pub fn contains(&self, p: [f64; 2]) -> bool {
        match &self.shape {
            Shape::Polygon(v) => (0..v.len()).all(|i| cross3(v[i], v[(i + 1) % v.len()], p) >= 0.0),
            &Shape::Ellipse { center, semi_axes: [a, b], rotation } => {
                let (s, c) = libm::sincos(rotation);
                let (dx, dy) = (p[0] - center[0], p[1] - center[1]);
                let u = (c * dx + s * dy) / a;
                let v = (-s * dx + c * dy) / b;
                u * u + v * v <= 1.0 + 1e-12
            }
        }
    }

    /// Exact closed containment of a grid point in the polygon whose vertices
    /// are the grid-rounded body vertices. Ellipses fall back to [`Self::contains`].
    pub fn contains_grid_point(&self, p: Point, scale: Scale) -> bool {
        match &self.shape {
            Shape::Polygon(v) => {
                let q = |c: [f64; 2]| Point::new(scale.to_grid(c[0]), scale.to_grid(c[1]));
                (0..v.len()).all(|i| crate::geom::cross(q(v[i]), q(v[(i + 1) % v.len()]), p) >= 0)
            }
            Shape::Ellipse { .. } => self.contains(scale.point_to_body(p)),
        }
    }

    /// `[xmin, xmax, ymin, ymax]`.
    pub fn bounding_box(&self) -> [f64; 4] {
        match &self.shape {
            Shape::Polygon(v) => v.iter().fold(
                [f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY],
                |b, p| [b[0].min(p[0]), b[1].max(p[0]), b[2].min(p[1]), b[3].max(p[1])],
            ),
            &Shape::Ellipse { center, semi_axes: [a, b], rotation } => {
                let (s, c) = libm::sincos(rotation);
                let hx = libm::hypot(a * c, b * s);
                let hy = libm::hypot(a * s, b * c);
                [center[0] - hx, center[0] + hx, center[1] - hy, center[1] + hy]
            }
        }
    }

    /// The horizontal chord `[x_lo, x_hi]` at height `y`, if the line meets the body.
    pub fn chord_at(&self, y: f64) -> Option<(f64, f64)> {
        match &self.shape {
            Shape::Polygon(v) => {
                let mut lo = f64::INFINITY;
                let mut hi = f64::NEG_INFINITY;
                for i in 0..v.len() {
                    let (a, b) = (v[i], v[(i + 1) % v.len()]);
                    let (ylo, yhi) = (a[1].min(b[1]), a[1].max(b[1]));
                    if y < ylo || y > yhi {
                        continue;
                    }
                    if a[1] == b[1] {
                        lo = lo.min(a[0].min(b[0]));
                        hi = hi.max(a[0].max(b[0]));
                    } else {
                        let x = a[0] + (y - a[1]) * (b[0] - a[0]) / (b[1] - a[1]);
                        lo = lo.min(x);
                        hi = hi.max(x);
                    }
                }
                (lo <= hi).then_some((lo, hi))
            }
            &Shape::Ellipse { center, semi_axes: [a, b], rotation } => {
                // Solve for x on the ellipse boundary: A x^2 + B x + C = 0 in dx.
                let (s, c) = libm::sincos(rotation);
                let dy = y - center[1];
                let qa = (c * c) / (a * a) + (s * s) / (b * b);
                let qb = 2.0 * dy * c * s * (1.0 / (a * a) - 1.0 / (b * b));
                let qc = dy * dy * ((s * s) / (a * a) + (c * c) / (b * b)) - 1.0;
                let disc = qb * qb - 4.0 * qa * qc;
                if disc < 0.0 {
                    return None;
                }
                let r = libm::sqrt(disc);
                Some((center[0] + (-qb - r) / (2.0 * qa), center[0] + (-qb + r) / (2.0 * qa)))
            }
        }
    }

    /// Maps the body to standard position: area one, and for ellipses the
    /// disk of radius `1/sqrt(pi)` at the origin. Polygons are scaled about
    /// the origin and their second-moment tensor is made isotropic by an
    /// area-preserving linear map (the identity when it already is).
    pub fn normalize(&self) -> Result<(ConvexBody, RealAffine)> {
        if self.area.is_nan() || self.area <= 0.0 || !self.area.is_finite() {
            return Err(Error::InvalidBody("body has zero area"));
        }
        match &self.shape {
            &Shape::Ellipse { center, semi_axes: [a, b], rotation } => {
                let radius = 1.0 / libm::sqrt(PI);
                let (s, c) = libm::sincos(rotation);
                // diag(R/a, R/b) * Rot(-rotation)
                let m = [[radius / a * c, radius / a * s], [-radius / b * s, radius / b * c]];
                let t = [-(m[0][0] * center[0] + m[0][1] * center[1]), -(m[1][0] * center[0] + m[1][1] * center[1])];
                let mut body = ConvexBody::ellipse([0.0, 0.0], [radius, radius], 0.0)?;
                let r = standard_radius();
                body.inscribed_radius = r;
                body.circumscribed_radius = 2.0 * r;
                Ok((body, RealAffine { m, t }))
            }
            Shape::Polygon(v) => {
                let s = 1.0 / libm::sqrt(self.area);
                let [sxx, sxy, syy] = polygon_covariance(v);
                let m = isotropic_map(sxx, sxy, syy);
                let map = RealAffine { m: [[m[0][0] * s, m[0][1] * s], [m[1][0] * s, m[1][1] * s]], t: [0.0, 0.0] };
                let body = ConvexBody::polygon(v.iter().map(|&p| map.apply(p)).collect())?;
                if ((body.area - 1.0) / 1.0).abs() > 1e-12 {
                    return Err(Error::InvalidBody("normalization lost area accuracy"));
                }
                Ok((body, map))
            }
        }
    }

    /// One uniform point of the body.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> [f64; 2] {
        match &self.shape {
            &Shape::Ellipse { center, semi_axes: [a, b], rotation } => {
                let r = libm::sqrt(rng.random::<f64>());
                let phi = 2.0 * PI * rng.random::<f64>();
                let (sp, cp) = libm::sincos(phi);
                let (u, v) = (a * r * cp, b * r * sp);
                let (s, c) = libm::sincos(rotation);
                [center[0] + c * u - s * v, center[1] + s * u + c * v]
            }
            Shape::Polygon(v) => {
                let total = *self.fan.last().unwrap();
                let pick = rng.random::<f64>() * total;
                let i = self.fan.partition_point(|&acc| acc <= pick).min(self.fan.len() - 1);
                let (a, b, c) = (v[0], v[i + 1], v[i + 2]);
                let mut s = rng.random::<f64>();
                let mut t = rng.random::<f64>();
                if s + t > 1.0 {
                    s = 1.0 - s;
                    t = 1.0 - t;
                }
                [a[0] + s * (b[0] - a[0]) + t * (c[0] - a[0]), a[1] + s * (b[1] - a[1]) + t * (c[1] - a[1])]
            }
        }
    }
}

/// Second central moments `[sxx, sxy, syy]` of a uniform distribution on the polygon.
fn polygon_covariance(v: &[[f64; 2]]) -> [f64; 3] {
    let (mut area, mut cx, mut cy, mut ixx, mut ixy, mut iyy) = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
    for i in 0..v.len() {
        let (a, b) = (v[i], v[(i + 1) % v.len()]);
        let w = a[0] * b[1] - b[0] * a[1];
        area += w / 2.0;
        cx += (a[0] + b[0]) * w / 6.0;
        cy += (a[1] + b[1]) * w / 6.0;
        ixx += (a[0] * a[0] + a[0] * b[0] + b[0] * b[0]) * w / 12.0;
        iyy += (a[1] * a[1] + a[1] * b[1] + b[1] * b[1]) * w / 12.0;
        ixy += (a[0] * b[1] + 2.0 * a[0] * a[1] + 2.0 * b[0] * b[1] + b[0] * a[1]) * w / 24.0;
    }
    let (cx, cy) = (cx / area, cy / area);
    [ixx / area - cx * cx, ixy / area - cx * cy, iyy / area - cy * cy]
}

/// Determinant-one symmetric `M` with `M S M^T` a multiple of the identity.
fn isotropic_map(sxx: f64, sxy: f64, syy: f64) -> [[f64; 2]; 2] {
    let scale = sxx.abs().max(syy.abs());
    if sxy.abs() <= 1e-14 * scale && (sxx - syy).abs() <= 1e-14 * scale {
        return [[1.0, 0.0], [0.0, 1.0]];
    }
    if sxy.abs() <= 1e-14 * scale {
        let g = libm::pow(sxx * syy, 0.25);
        return [[g / libm::sqrt(sxx), 0.0], [0.0, g / libm::sqrt(syy)]];
    }
    // Eigen-decomposition of the 2x2 symmetric tensor.
    let tr = sxx + syy;
    let det = sxx * syy - sxy * sxy;
    let disc = libm::sqrt((tr * tr / 4.0 - det).max(0.0));
    let (l1, l2) = (tr / 2.0 + disc, tr / 2.0 - disc);
    let (ex, ey) = (sxy, l1 - sxx);
    let norm = libm::hypot(ex, ey);
    let (c, s) = (ex / norm, ey / norm);
    let g = libm::pow(l1 * l2, 0.25);
    let (d1, d2) = (g / libm::sqrt(l1), g / libm::sqrt(l2));
    // R diag(d1, d2) R^T with R = [[c, -s], [s, c]]
    [[c * c * d1 + s * s * d2, c * s * (d1 - d2)], [c * s * (d1 - d2), s * s * d1 + c * c * d2]]
}

/// Distance from `p` to the boundary of a convex polygon (negative outside).
fn boundary_distance(v: &[[f64; 2]], p: [f64; 2]) -> f64 {
    (0..v.len())
        .map(|i| {
            let (a, b) = (v[i], v[(i + 1) % v.len()]);
            cross3(a, b, p) / dist(a, b)
        })
        .fold(f64::INFINITY, f64::min)
}

/// Approximate Chebyshev center by coarse-to-fine grid search. The returned
/// radius is the exact boundary distance of the returned center, so the disk
/// is always inscribed.
fn polygon_inscribed_disk(v: &[[f64; 2]]) -> ([f64; 2], f64) {
    const SIDE: usize = 48;
    let bb = v.iter().fold([f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY], |b, p| {
        [b[0].min(p[0]), b[1].max(p[0]), b[2].min(p[1]), b[3].max(p[1])]
    });
    let (mut x0, mut x1, mut y0, mut y1) = (bb[0], bb[1], bb[2], bb[3]);
    let mut best = ([(x0 + x1) / 2.0, (y0 + y1) / 2.0], f64::NEG_INFINITY);
    best.1 = boundary_distance(v, best.0);
    loop {
        let (hx, hy) = ((x1 - x0) / SIDE as f64, (y1 - y0) / SIDE as f64);
        for i in 0..=SIDE {
            for j in 0..=SIDE {
                let p = [x0 + i as f64 * hx, y0 + j as f64 * hy];
                let d = boundary_distance(v, p);
                if d > best.1 {
                    best = (p, d);
                }
            }
        }
        if hx.max(hy) < 1e-7 {
            break;
        }
        let [cx, cy] = best.0;
        (x0, x1, y0, y1) = (cx - 4.0 * hx, cx + 4.0 * hx, cy - 4.0 * hy, cy + 4.0 * hy);
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disk_normalization() {
        let (disk, map) = ConvexBody::ellipse([3.0, -1.0], [1.0, 1.0], 0.0).unwrap().normalize().unwrap();
        assert!((disk.area() - 1.0).abs() < 1e-12);
        let r = standard_radius();
        assert!((r - 0.438_691_337_650_831).abs() < 1e-12);
        // r D ⊂ C ⊂ 2 r D
        let radius = 1.0 / PI.sqrt();
        assert!(r <= radius && radius <= 2.0 * r);
        assert_eq!(disk.rho(), r / 2.0);
        let image = map.apply([4.0, -1.0]);
        assert!((image[0] - radius).abs() < 1e-15 && image[1].abs() < 1e-15);
    }

    #[test]
    fn rotated_ellipse_normalization() {
        let e = ConvexBody::ellipse([1.0, 2.0], [3.0, 0.5], 0.7).unwrap();
        let (disk, map) = e.normalize().unwrap();
        assert!((map.det() * e.area() - 1.0).abs() < 1e-12);
        let (s, c) = libm::sincos(0.7);
        let tip = [1.0 + 3.0 * c, 2.0 + 3.0 * s];
        let img = map.apply(tip);
        assert!((libm::hypot(img[0], img[1]) - 1.0 / PI.sqrt()).abs() < 1e-12);
        assert!(disk.contains([0.0, 0.56]));
    }

    #[test]
    fn triangle_and_rectangle_normalization() {
        let tri = ConvexBody::polygon([[0.0, 0.0], [5.0, 1.0], [2.0, 3.0]].to_vec()).unwrap();
        let (t1, _) = tri.normalize().unwrap();
        assert!((t1.area() - 1.0).abs() < 1e-12);

        let rect = ConvexBody::polygon([[0.0, 0.0], [2.0, 0.0], [2.0, 0.5], [0.0, 0.5]].to_vec()).unwrap();
        let (sq, _) = rect.normalize().unwrap();
        let Shape::Polygon(v) = sq.shape() else { unreachable!() };
        for (got, want) in v.iter().zip([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]) {
            assert!((got[0] - want[0]).abs() < 1e-12 && (got[1] - want[1]).abs() < 1e-12);
        }
        let (same, map) = ConvexBody::unit_square().normalize().unwrap();
        assert_eq!(map, RealAffine::identity());
        assert_eq!(same, ConvexBody::unit_square());
    }

    #[test]
    fn inscribed_disks() {
        let sq = ConvexBody::unit_square();
        assert!((sq.inscribed_radius() - 0.5).abs() < 1e-6);
        assert!((sq.inscribed_center()[0] - 0.5).abs() < 1e-5);
        assert!((sq.circumscribed_radius() - 0.5f64.sqrt()).abs() < 1e-5);
        // 3-4-5 right triangle: inradius 1 at (1, 1).
        let tri = ConvexBody::polygon([[0.0, 0.0], [4.0, 0.0], [0.0, 3.0]].to_vec()).unwrap();
        assert!((tri.inscribed_radius() - 1.0).abs() < 1e-6);
        assert!(tri.inscribed_radius() <= 1.0);
    }

    #[test]
    fn rejects_bad_bodies() {
        assert!(ConvexBody::polygon([[0.0, 0.0], [0.0, 1.0], [1.0, 0.0]].to_vec()).is_err());
        assert!(ConvexBody::polygon([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]].to_vec()).is_err());
        let star = [[0.0, 1.0], [-0.59, -0.81], [0.95, 0.31], [-0.95, 0.31], [0.59, -0.81]];
        assert!(ConvexBody::polygon(star.to_vec()).is_err());
        assert!(ConvexBody::ellipse([0.0, 0.0], [0.0, 1.0], 0.0).is_err());
    }

    #[test]
    fn chords() {
        let sq = ConvexBody::unit_square();
        assert_eq!(sq.chord_at(0.3), Some((0.0, 1.0)));
        assert_eq!(sq.chord_at(1.5), None);
        let e = ConvexBody::ellipse([0.0, 0.0], [2.0, 1.0], PI / 2.0).unwrap();
        let (lo, hi) = e.chord_at(0.0).unwrap();
        assert!((lo + 1.0).abs() < 1e-12 && (hi - 1.0).abs() < 1e-12);
        let bb = e.bounding_box();
        assert!((bb[3] - 2.0).abs() < 1e-12);
    }
}
