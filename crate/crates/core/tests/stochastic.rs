use approx::assert_relative_eq;
use proptest::prelude::*;
use std::f64::consts::PI;
use zonolab::par::{sequential, with_workers};
use zonolab::stochastic::{
    asymptotic_probe, cauchy_surface_integral, expected_random_wedge, expected_volume_random_zonotope,
    kubota_intrinsic_integral, steiner_mc_volume, zonotope_membership, Membership, ProbeFamily,
};
use zonolab::zonotope::make_cube;

#[test]
fn random_wedge_matches_closed_forms() {
    let c2 = expected_random_wedge(2, 100_000, 1).unwrap();
    assert_relative_eq!(c2.exact, 2.0 / PI, max_relative = 1e-14);
    assert!(c2.within(4.0), "{c2:?}");
    let c3 = expected_random_wedge(3, 100_000, 2).unwrap();
    assert_relative_eq!(c3.exact, PI / 8.0, max_relative = 1e-14);
    assert!(c3.within(4.0), "{c3:?}");
}

#[test]
fn random_zonotope_volume() {
    let c = expected_volume_random_zonotope(5, 2, 20_000, 3).unwrap();
    assert_relative_eq!(c.exact, 10.0 * 2.0 / PI, max_relative = 1e-14);
    assert!(c.within(4.0), "{c:?}");
}

#[test]
fn cube_integral_geometry() {
    let cube = make_cube(3, 1.0).unwrap();
    let s = cauchy_surface_integral(&cube, 10_000, 4).unwrap();
    assert_relative_eq!(s.exact, 6.0, max_relative = 1e-12);
    assert!(s.within(4.0), "{s:?}");
    for k in [1, 2] {
        let v = kubota_intrinsic_integral(&cube, 1, k, 10_000, 5).unwrap();
        assert_relative_eq!(v.exact, 3.0, max_relative = 1e-12);
        assert!(v.within(4.0), "k={k}: {v:?}");
    }
}

#[test]
fn unit_square_parallel_body() {
    let sq = make_cube(2, 1.0).unwrap();
    let c = steiner_mc_volume(&sq, 1.0, 100_000, 6).unwrap();
    assert_relative_eq!(c.exact, 5.0 + PI, max_relative = 1e-14);
    assert!((c.estimate.mean - c.exact).abs() <= 0.01 * c.exact, "{c:?}");
    assert!(c.within(4.0), "{c:?}");
}

#[test]
fn estimates_ignore_worker_count() {
    let sq = make_cube(2, 1.0).unwrap();
    let base = steiner_mc_volume(&sq, 0.5, 5_000, 9).unwrap();
    for workers in [1, 2, 7] {
        let other = with_workers(workers, || steiner_mc_volume(&sq, 0.5, 5_000, 9).unwrap());
        assert_eq!(base.estimate.mean.to_bits(), other.estimate.mean.to_bits());
        assert_eq!(base.estimate.std_error.to_bits(), other.estimate.std_error.to_bits());
    }
    let seq = sequential(|| expected_random_wedge(3, 5_000, 9).unwrap());
    assert_eq!(seq, expected_random_wedge(3, 5_000, 9).unwrap());
}

#[test]
fn planar_regular_bounds_for_all_n() {
    let ns: Vec<usize> = (2..=64).collect();
    let table = asymptotic_probe(ProbeFamily::PlanarRegular, 2, &ns, 0).unwrap();
    for row in &table.rows {
        let x = PI / (2 * row.n) as f64;
        let n = row.n as f64;
        let area_gap = 2.0 * n * x.tan() / PI - 1.0;
        let width_gap = 1.0 - 2.0 * n * x.sin() / PI;
        assert!((row.inradius_gaps[1] - area_gap).abs() <= 1e-12, "n={}", row.n);
        assert!((row.circumradius_gaps[0] - width_gap).abs() <= 1e-12, "n={}", row.n);
        assert!(area_gap + 1e-12 >= PI * PI / (12.0 * n * n));
        assert!(width_gap + 1e-12 >= PI * PI / (24.0 * n * n) - PI.powi(4) / (1920.0 * n.powi(4)));
        assert!(row.lower_bounds_hold(), "{row:?}");
    }
    let slope = table.fitted_ratio_exponent().unwrap();
    assert!((slope + 2.0).abs() < 0.05, "slope {slope}");
}

#[test]
fn probe_families_check_dimension() {
    assert!(asymptotic_probe(ProbeFamily::FibonacciSphere, 4, &[10], 0).is_err());
    assert!(asymptotic_probe(ProbeFamily::PlanarRegular, 3, &[10], 0).is_err());
    let t = asymptotic_probe(ProbeFamily::FibonacciSphere, 3, &[8, 16, 32], 0).unwrap();
    assert!(t.rows.iter().all(|r| r.lower_bounds_hold()));
}

/// Distance from `(x, y)` to the unit square.
fn square_distance(x: f64, y: f64) -> f64 {
    let dx = (-x).max(x - 1.0).max(0.0);
    let dy = (-y).max(y - 1.0).max(0.0);
    dx.hypot(dy)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn membership_agrees_with_square_distance(x in -1.5..2.5f64, y in -1.5..2.5f64, t in 0.0..1.0f64) {
        let dist = square_distance(x, y);
        prop_assume!((dist - t).abs() > 1e-7);
        let sq = make_cube(2, 1.0).unwrap();
        let expected = if dist <= t { Membership::Inside } else { Membership::Outside };
        prop_assert_eq!(zonotope_membership(&sq, &[x, y], t), expected);
    }
}
