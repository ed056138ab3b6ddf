use emptri_core::body::ConvexBody;
use emptri_core::grid::{build_grid, occupancy_counts, sample_poisson_counts, sample_poisson_grid};
use emptri_core::rng;
use emptri_core::sample::{extend_uniform, sample_uniform, sample_uniform_with, Degeneracy, DEFAULT_SCALE};
use emptri_core::stats::Moments;
use emptri_core::Point;

#[test]
fn unit_square_coordinates_average_one_half() {
    let set = sample_uniform_with(
        &ConvexBody::unit_square(),
        10_000,
        DEFAULT_SCALE,
        Degeneracy::Duplicates,
        &mut rng::from_seed(7),
    );
    let scale = set.scale();
    let mx: Moments = set.points().iter().map(|p| scale.to_body(p.x)).collect();
    let my: Moments = set.points().iter().map(|p| scale.to_body(p.y)).collect();
    assert!((0.49..=0.51).contains(&mx.mean()), "{}", mx.mean());
    assert!((0.49..=0.51).contains(&my.mean()), "{}", my.mean());
}

#[test]
fn disk_mass_within_half_radius() {
    let disk = ConvexBody::unit_area_disk();
    let radius = 1.0 / core::f64::consts::PI.sqrt();
    let set = sample_uniform_with(&disk, 10_000, DEFAULT_SCALE, Degeneracy::Duplicates, &mut rng::from_seed(8));
    let scale = set.scale();
    let inside = set
        .points()
        .iter()
        .filter(|p| {
            let [x, y] = scale.point_to_body(**p);
            (x * x + y * y).sqrt() <= radius / 2.0
        })
        .count();
    let frac = inside as f64 / 10_000.0;
    assert!((frac - 0.25).abs() <= 0.02, "{frac}");
}

#[test]
fn poisson_counts_have_unit_mean() {
    let mut r = rng::from_seed(9);
    let (counts, _) = sample_poisson_counts(100_000, 0, &mut r);
    let m: Moments = counts.iter().map(|&c| c as f64).collect();
    assert!((0.99..=1.01).contains(&m.mean()), "{}", m.mean());
    let zeros = counts.iter().filter(|&&c| c == 0).count() as f64 / counts.len() as f64;
    assert!((zeros - (-1.0f64).exp()).abs() <= 0.01, "{zeros}");
}

#[test]
fn multinomial_counts_average_one() {
    let body = ConvexBody::unit_square();
    let n = 400;
    let grid = build_grid(&body, n, DEFAULT_SCALE).unwrap();
    let mut m = Moments::new();
    for trial in 0..50 {
        let set = sample_uniform_with(&body, n, DEFAULT_SCALE, Degeneracy::Duplicates, &mut rng::derive(1, 2, trial));
        let (counts, rest) = occupancy_counts(set.points(), &grid);
        assert_eq!(counts.iter().map(|&c| c as usize).sum::<usize>() + rest, n);
        counts.iter().for_each(|&c| m.push(c as f64));
    }
    assert!((m.mean() - 1.0).abs() <= 0.02, "{}", m.mean());
}

#[test]
fn poisson_payloads_stay_in_their_squares() {
    let grid = build_grid(&ConvexBody::unit_square(), 200, DEFAULT_SCALE).unwrap();
    let model = sample_poisson_grid(&grid, 200, &mut rng::from_seed(3));
    for ((sq, pts), &k) in grid.squares().iter().zip(&model.payloads).zip(&model.counts) {
        assert_eq!(pts.len(), k as usize);
        assert!(pts.iter().all(|&p| sq.contains(p) && grid.classify(p).is_some()));
    }
}

#[test]
fn sampling_is_reproducible() {
    let body = ConvexBody::unit_area_disk();
    assert_eq!(sample_uniform(&body, 300, 11), sample_uniform(&body, 300, 11));
    assert_ne!(sample_uniform(&body, 300, 11), sample_uniform(&body, 300, 12));
    let s = sample_uniform(&body, 300, 11);
    s.is_general_position().unwrap();
    assert!(s.points().iter().all(|&p| body.contains_grid_point(p, s.scale())));
}

#[test]
fn extension_keeps_the_fixed_pair() {
    let body = ConvexBody::unit_square();
    let x = Point::new(DEFAULT_SCALE.to_grid(0.5), DEFAULT_SCALE.to_grid(0.5));
    let y = Point::new(DEFAULT_SCALE.to_grid(0.51), DEFAULT_SCALE.to_grid(0.5));
    let set = extend_uniform(&body, &[x, y], 98, DEFAULT_SCALE, &mut rng::from_seed(5));
    assert_eq!(set.len(), 100);
    assert_eq!(&set.points()[..2], &[x, y]);
    set.is_general_position().unwrap();
}
