//! Chirotopes and canonical order-type labels of small point sets.
//!
//! Two general-position sets have the same order type when some bijection
//! preserves the orientation of every triple. The canonical label is the
//! lexicographically smallest triple-sign vector over all relabelings, so
//! equal labels mean equal types. Mirror images are *not* identified.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::geom::{convex_hull, cross, is_general_position, Point, PointSet};
use crate::grid::GridOccupancy;
use crate::{Error, Result};

/// Largest set handled by the exhaustive relabeling search.
pub const MAX_LABEL_POINTS: usize = 9;

/// Orientation signs of all triples `h < i < j`, in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Chirotope {
    pub k: usize,
    pub signs: Vec<i8>,
}

fn triples(k: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    (0..k).flat_map(move |h| (h + 1..k).flat_map(move |i| (i + 1..k).map(move |j| (h, i, j))))
}

fn sign(p: Point, q: Point, r: Point) -> i8 {
    cross(p, q, r).signum() as i8
}

pub fn chirotope(points: &[Point]) -> Result<Chirotope> {
    is_general_position(points)?;
    let signs = triples(points.len()).map(|(h, i, j)| sign(points[h], points[i], points[j])).collect();
    Ok(Chirotope { k: points.len(), signs })
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrderTypeLabel {
    k: usize,
    signs: Vec<i8>,
}

impl OrderTypeLabel {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    /// The type of `k` points in convex position.
    pub fn convex(k: usize) -> Result<Self> {
        let pts: Vec<Point> = (0..k as i64).map(|i| Point::new(i, i * i)).collect();
        canonical_label(&pts)
    }
}

impl fmt::Display for OrderTypeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.k)?;
        for &s in &self.signs {
            f.write_str(if s > 0 { "+" } else { "-" })?;
        }
        Ok(())
    }
}

impl FromStr for OrderTypeLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (k, body) = s.trim().split_once(':').ok_or(Error::InvalidArgument("order-type label needs 'k:'"))?;
        let k: usize = k.parse().map_err(|_| Error::InvalidArgument("bad order-type size"))?;
        let signs = body
            .chars()
            .map(|c| match c {
                '+' => Ok(1),
                '-' => Ok(-1),
                _ => Err(Error::InvalidArgument("order-type signs must be '+' or '-'")),
            })
            .collect::<Result<Vec<i8>>>()?;
        if signs.len() as u64 != crate::engine::binomial3(k as u64) {
            return Err(Error::InvalidArgument("order-type label has the wrong number of signs"));
        }
        Ok(OrderTypeLabel { k, signs })
    }
}

/// Advances `perm` to the next permutation in lexicographic order.
fn next_permutation(perm: &mut [usize]) -> bool {
    let Some(i) = (1..perm.len()).rev().find(|&i| perm[i - 1] < perm[i]) else {
        return false;
    };
    let j = (i..perm.len()).rev().find(|&j| perm[j] > perm[i - 1]).unwrap();
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

/// Minimum sign vector over all `k!` relabelings.
pub fn canonical_label(points: &[Point]) -> Result<OrderTypeLabel> {
    let k = points.len();
    if k > MAX_LABEL_POINTS {
        return Err(Error::TooManyPoints { n: k, max: MAX_LABEL_POINTS });
    }
    is_general_position(points)?;
    let mut table = vec![0i8; k * k * k];
    for a in 0..k {
        for b in 0..k {
            for c in 0..k {
                if a != b && b != c && a != c {
                    table[(a * k + b) * k + c] = sign(points[a], points[b], points[c]);
                }
            }
        }
    }
    let order: Vec<(usize, usize, usize)> = triples(k).collect();
    let mut best: Option<Vec<i8>> = None;
    let mut current = Vec::with_capacity(order.len());
    let mut perm: Vec<usize> = (0..k).collect();
    loop {
        current.clear();
        let mut worse = false;
        let mut tied = best.is_some();
        for (t, &(h, i, j)) in order.iter().enumerate() {
            let s = table[(perm[h] * k + perm[i]) * k + perm[j]];
            if tied {
                let b = best.as_ref().unwrap()[t];
                if s > b {
                    worse = true;
                    break;
                }
                tied = s == b;
            }
            current.push(s);
        }
        if !worse && current.len() == order.len() && (best.is_none() || !tied) {
            best = Some(current.clone());
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(OrderTypeLabel { k, signs: best.unwrap_or_default() })
}

/// Outcome of comparing the order types of two sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TypeComparison {
    Same,
    Different,
    SizeMismatch { left: usize, right: usize },
}

impl TypeComparison {
    pub fn is_same(self) -> bool {
        self == TypeComparison::Same
    }
}

pub fn same_type(a: &[Point], b: &[Point]) -> Result<TypeComparison> {
    if a.len() != b.len() {
        return Ok(TypeComparison::SizeMismatch { left: a.len(), right: b.len() });
    }
    Ok(if canonical_label(a)? == canonical_label(b)? { TypeComparison::Same } else { TypeComparison::Different })
}

/// Every point is a vertex of the convex hull.
pub fn is_convex_position(points: &[Point]) -> bool {
    convex_hull(points).len() == points.len()
}

/// First square whose payload has exactly `label.k()` points of that order type.
/// Payloads that are not in general position never match.
pub fn find_type_in_payloads<'a, I>(payloads: I, label: &OrderTypeLabel) -> Option<usize>
where
    I: IntoIterator<Item = &'a [Point]>,
{
    payloads
        .into_iter()
        .position(|pts| pts.len() == label.k() && canonical_label(pts).is_ok_and(|l| &l == label))
}

pub fn find_type_in_squares(set: &PointSet, occupancy: &GridOccupancy, label: &OrderTypeLabel) -> Option<usize> {
    let mut buf: Vec<Point> = Vec::new();
    occupancy.members.iter().position(|members| {
        if members.len() != label.k() {
            return false;
        }
        buf.clear();
        buf.extend(members.iter().map(|&i| set.points()[i]));
        canonical_label(&buf).is_ok_and(|l| &l == label)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn pts(c: &[(i64, i64)]) -> Vec<Point> {
        c.iter().map(|&p| Point::from(p)).collect()
    }

    #[test]
    fn chirotope_examples() {
        assert_eq!(chirotope(&pts(&[(0, 0), (1, 0), (0, 1)])).unwrap().signs, [1]);
        assert_eq!(chirotope(&pts(&[(0, 0), (1, 0), (1, 1), (0, 1)])).unwrap().signs, [1, 1, 1, 1]);
        // abc, abd, acd, bcd
        let inner = chirotope(&pts(&[(0, 0), (6, 0), (3, 5), (3, 2)])).unwrap();
        assert_eq!(inner.signs, [1, 1, -1, 1]);
        assert_eq!(chirotope(&pts(&[(0, 0), (1, 1), (2, 2)])), Err(Error::Collinear(0, 1, 2)));
    }

    #[test]
    fn labels() {
        let t1 = canonical_label(&pts(&[(0, 0), (1, 0), (0, 1)])).unwrap();
        let t2 = canonical_label(&pts(&[(5, 5), (1, 9), (7, -3)])).unwrap();
        assert_eq!(t1, t2);
        assert_eq!(t1.to_string(), "3:-");
        let square = pts(&[(0, 0), (1, 0), (1, 1), (0, 1)]);
        let quad = pts(&[(0, 0), (7, 1), (8, 6), (1, 5)]);
        let inner = pts(&[(0, 0), (6, 0), (3, 5), (3, 2)]);
        assert_eq!(same_type(&square, &quad), Ok(TypeComparison::Same));
        assert_eq!(same_type(&square, &inner), Ok(TypeComparison::Different));
        assert_eq!(
            same_type(&square, &inner[..3]),
            Ok(TypeComparison::SizeMismatch { left: 4, right: 3 })
        );
        assert_eq!(canonical_label(&square).unwrap(), OrderTypeLabel::convex(4).unwrap());
        let ten: Vec<Point> = (0..10).map(|i| Point::new(i, i * i)).collect();
        assert!(matches!(canonical_label(&ten), Err(Error::TooManyPoints { .. })));
    }

    #[test]
    fn mirror_of_convex_quadrilateral_is_same_type() {
        let a = pts(&[(0, 0), (4, 1), (5, 5), (1, 3)]);
        let mirrored: Vec<Point> = a.iter().map(|p| Point::new(-p.x, p.y)).collect();
        assert_eq!(same_type(&a, &mirrored), Ok(TypeComparison::Same));
    }

    #[test]
    fn label_round_trips_through_text() {
        let l = canonical_label(&pts(&[(0, 0), (6, 0), (3, 5), (3, 2)])).unwrap();
        let text = l.to_string();
        assert_eq!(text.parse::<OrderTypeLabel>().unwrap(), l);
        assert!("4:+++".parse::<OrderTypeLabel>().is_err());
        assert!("x".parse::<OrderTypeLabel>().is_err());
    }

    #[test]
    fn convexity() {
        assert!(is_convex_position(&pts(&[(0, 0), (4, 1), (5, 5), (1, 3)])));
        assert!(!is_convex_position(&pts(&[(0, 0), (6, 0), (3, 5), (3, 2)])));
        // regular hexagon, rounded
        let hex = pts(&[(1000, 0), (500, 866), (-500, 866), (-1000, 0), (-500, -866), (500, -866)]);
        assert!(is_convex_position(&hex));
    }

    #[test]
    fn next_permutation_enumerates_all() {
        let mut p = [0, 1, 2, 3];
        let mut count = 1;
        while next_permutation(&mut p) {
            count += 1;
        }
        assert_eq!((count, p), (24, [3, 2, 1, 0]));
    }
}
