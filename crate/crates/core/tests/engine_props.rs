use emptri_core::engine::{
    binomial3, brute_force_empty_triangles, degree_report, near_pairs_scan, near_pairs_squared, pair_degree,
    DEFAULT_ORACLE_CAP,
};
use emptri_core::geom::{find_collinear_triple, is_general_position, AffineMap};
use emptri_core::{Point, PointSet};
use proptest::prelude::*;

fn general_position_set(max_n: usize, span: i64) -> impl Strategy<Value = PointSet> {
    prop::collection::vec((0..span, 0..span), 3..=max_n).prop_filter_map("collinear", |coords| {
        let set = PointSet::from_coords(&coords).ok()?;
        set.is_general_position().ok()?;
        Some(set)
    })
}

/// Small integer unimodular maps as products of shears and a swap.
fn unimodular() -> impl Strategy<Value = AffineMap> {
    (prop::collection::vec((-2i64..=2, any::<bool>()), 1..4), any::<bool>(), -50i64..50, -50i64..50).prop_map(
        |(shears, swap, tx, ty)| {
            let mut m = [[1i64, 0], [0, 1]];
            for (k, upper) in shears {
                let s = if upper { [[1, k], [0, 1]] } else { [[1, 0], [k, 1]] };
                m = mul(s, m);
            }
            if swap {
                m = mul([[0, 1], [1, 0]], m);
            }
            AffineMap::integer(m, [tx, ty]).unwrap()
        },
    )
}

fn mul(a: [[i64; 2]; 2], b: [[i64; 2]; 2]) -> [[i64; 2]; 2] {
    [
        [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
        [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn sweep_matches_oracle(set in general_position_set(14, 40)) {
        let fast = degree_report(&set).unwrap();
        let slow = brute_force_empty_triangles(&set, DEFAULT_ORACLE_CAP).unwrap();
        prop_assert_eq!(&fast, &slow);
        prop_assert!(fast.validate().is_ok());
    }

    #[test]
    fn pair_degree_matches_table(set in general_position_set(12, 60)) {
        let r = degree_report(&set).unwrap();
        for (i, j, d) in r.degree.iter() {
            prop_assert_eq!(pair_degree(&set, i, j).unwrap(), d);
            prop_assert_eq!(pair_degree(&set, j, i).unwrap(), d);
        }
    }

    #[test]
    fn collinear_sets_are_rejected(coords in prop::collection::vec((0i64..6, 0i64..6), 3..10)) {
        if let Ok(set) = PointSet::from_coords(&coords) {
            let brute = is_general_position(set.points());
            prop_assert_eq!(brute.is_ok(), find_collinear_triple(set.points()).is_none());
            prop_assert_eq!(brute.is_ok(), degree_report(&set).is_ok());
        }
    }

    #[test]
    fn affine_images_have_identical_tables(set in general_position_set(12, 100), map in unimodular()) {
        let image = map.apply(&set).unwrap();
        prop_assert!(image.is_general_position().is_ok());
        let a = degree_report(&set).unwrap();
        let b = degree_report(&image).unwrap();
        prop_assert_eq!(a, b);
        let n = set.len();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let (p, q) = (set.points(), image.points());
                    let before = emptri_core::geom::orientation(p[i], p[j], p[k]).as_i8();
                    let after = emptri_core::geom::orientation(q[i], q[j], q[k]).as_i8();
                    prop_assert_eq!(after, before * map.det_sign());
                }
            }
        }
    }

    #[test]
    fn orientation_is_antisymmetric(a in (-1000i64..1000, -1000i64..1000), b in (-1000i64..1000, -1000i64..1000), c in (-1000i64..1000, -1000i64..1000)) {
        use emptri_core::geom::orientation;
        let (a, b, c) = (Point::from(a), Point::from(b), Point::from(c));
        prop_assert_eq!(orientation(a, b, c), orientation(b, a, c).reversed());
        prop_assert_eq!(orientation(a, b, c), orientation(a, c, b).reversed());
        prop_assert_eq!(orientation(a, b, c), orientation(b, c, a));
    }

    #[test]
    fn triangle_test_ignores_vertex_order(p in (0i64..30, 0i64..30), tri in prop::collection::vec((0i64..30, 0i64..30), 3)) {
        use emptri_core::geom::point_in_triangle;
        let p = Point::from(p);
        let [a, b, c] = [tri[0], tri[1], tri[2]].map(Point::from);
        let base = point_in_triangle(p, a, b, c);
        for (x, y, z) in [(a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)] {
            prop_assert_eq!(point_in_triangle(p, x, y, z), base.clone());
        }
    }

    #[test]
    fn bucketing_matches_scan(coords in prop::collection::vec((-500i64..500, -500i64..500), 0..80), thr in 0u128..40_000) {
        let pts: Vec<Point> = coords.into_iter().map(Point::from).collect();
        let stat = near_pairs_squared(&pts, thr, true);
        prop_assert_eq!(stat.count, near_pairs_scan(&pts, thr));
        prop_assert_eq!(stat.pairs.unwrap().len() as u64, stat.count);
    }
}

#[test]
fn convex_position_counts() {
    for n in 3..=30usize {
        // Points on the parabola y = x^2 are in strictly convex position.
        let coords: Vec<(i64, i64)> = (0..n as i64).map(|i| (i, i * i)).collect();
        let set = PointSet::from_coords(&coords).unwrap();
        let r = degree_report(&set).unwrap();
        assert_eq!(r.f, binomial3(n as u64));
        assert_eq!(r.deg_max as usize, n - 2);
        assert!(r.degree.iter().all(|(_, _, d)| d as usize == n - 2));
    }
}
