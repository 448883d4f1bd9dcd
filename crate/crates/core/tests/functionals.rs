mod common;

use approx::assert_relative_eq;
use proptest::prelude::*;
use std::f64::consts::PI;
use zonolab::functionals::{
    intrinsic_volume, intrinsic_volumes, mean_width, power_k_volume, power_k_volume_enumerated, steiner_polynomial,
    surface_area, EnumerationLimits,
};
use zonolab::geometry::binomial;
use zonolab::zonotope::{make_cube, make_regular_rhombic_dodecahedron};
use zonolab::GeneratorSet;

fn generator_set(max_n: usize, max_d: usize) -> impl Strategy<Value = GeneratorSet> {
    (2..=max_d)
        .prop_flat_map(move |d| (Just(d), d..=max_n))
        .prop_flat_map(|(d, n)| prop::collection::vec(prop::collection::vec(-2.0..2.0f64, d), n).prop_map(move |g| (d, g)))
        .prop_map(|(d, g)| GeneratorSet::new(d, g).unwrap())
}

#[test]
fn cube_intrinsic_volumes_are_binomials() {
    for d in 1..=6 {
        let v = intrinsic_volumes(&make_cube(d, 1.0).unwrap(), EnumerationLimits::default()).unwrap();
        for (k, vk) in v.iter().enumerate() {
            assert_relative_eq!(*vk, binomial(d, k), max_relative = 1e-12);
        }
    }
}

#[test]
fn cube_three_report() {
    let c = make_cube(3, 1.0).unwrap();
    assert_eq!(mean_width(&c), 1.5);
    assert_relative_eq!(surface_area(&c).unwrap(), 6.0, max_relative = 1e-14);
}

#[test]
fn unit_square_steiner_at_one() {
    let p = steiner_polynomial(&make_cube(2, 1.0).unwrap()).unwrap();
    assert_relative_eq!(p.eval(1.0), 5.0 + PI, max_relative = 1e-14);
    assert_relative_eq!(p.eval(0.0), 1.0, max_relative = 1e-14);
}

#[test]
fn planar_three_generator_power_volume() {
    let gs = GeneratorSet::new(2, vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]]).unwrap();
    assert_relative_eq!(power_k_volume(&gs, 2, 2.0).unwrap().value, 3.0, max_relative = 1e-12);
    assert_relative_eq!(power_k_volume(&gs, 2, 1.0).unwrap().value, 3.0, max_relative = 1e-12);
}

#[test]
fn regular_rhombic_dodecahedron_second_volume() {
    for d in 2..=6 {
        let rd = make_regular_rhombic_dodecahedron(d, 1.0).unwrap();
        let closed = 0.5 * (d as f64 + 1.0) * ((d * d - 1) as f64).sqrt();
        assert_relative_eq!(intrinsic_volume(&rd, 2).unwrap(), closed, max_relative = 1e-10);
    }
}

#[test]
fn gram_path_matches_enumeration_on_fixed_instances() {
    for seed in 0..200u64 {
        let d = 2 + (seed % 5) as usize;
        let n = d + (seed as usize * 7) % (13 - d);
        let gs = common::random_set(n, d, seed);
        for k in 1..=d {
            let fast = power_k_volume(&gs, k, 2.0).unwrap().value;
            let slow = power_k_volume_enumerated(&gs, k, 2.0, EnumerationLimits::default()).unwrap();
            assert!(common::rel_diff(fast, slow) <= 1e-10, "seed {seed} k {k}: {fast} vs {slow}");
        }
    }
}

#[test]
fn rank_deficient_sets() {
    let flat = GeneratorSet::new(3, vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![1.0, 1.0, 0.0]]).unwrap();
    assert_eq!(intrinsic_volume(&flat, 3).unwrap(), 0.0);
    assert_eq!(power_k_volume(&flat, 3, 2.0).unwrap().value, 0.0);
    assert!(surface_area(&flat).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn intrinsic_volumes_match_brute_force(gs in generator_set(7, 4)) {
        for k in 1..=gs.dim() {
            let fast = intrinsic_volume(&gs, k).unwrap();
            let slow = common::total_volume(&gs, k, 1.0);
            prop_assert!((fast - slow).abs() <= 1e-9 * slow.max(1.0), "k={} {} vs {}", k, fast, slow);
        }
    }

    #[test]
    fn power_two_matches_brute_force(gs in generator_set(12, 6)) {
        for k in 1..=gs.dim() {
            let fast = power_k_volume(&gs, k, 2.0).unwrap().value;
            let slow = common::total_volume(&gs, k, 2.0);
            prop_assert!((fast - slow).abs() <= 1e-9 * slow.max(1e-3), "k={} {} vs {}", k, fast, slow);
        }
    }

    #[test]
    fn homogeneity(gs in generator_set(6, 4), s in 0.1..5.0f64) {
        let scaled = gs.scaled(s);
        for k in 0..=gs.dim() {
            let a = intrinsic_volume(&scaled, k).unwrap();
            let b = s.powi(k as i32) * intrinsic_volume(&gs, k).unwrap();
            prop_assert!((a - b).abs() <= 1e-9 * b.abs().max(1.0));
        }
    }

    #[test]
    fn generator_order_and_sign_do_not_matter(gs in generator_set(6, 4), flip in prop::collection::vec(any::<bool>(), 6)) {
        let mut gens: Vec<Vec<f64>> = gs.generators().iter().rev().cloned().collect();
        for (g, f) in gens.iter_mut().zip(flip) {
            if f {
                g.iter_mut().for_each(|x| *x = -*x);
            }
        }
        let other = GeneratorSet::new(gs.dim(), gens).unwrap();
        for k in 1..=gs.dim() {
            let a = intrinsic_volume(&gs, k).unwrap();
            let b = intrinsic_volume(&other, k).unwrap();
            prop_assert!((a - b).abs() <= 1e-9 * a.max(1.0));
        }
    }

    #[test]
    fn steiner_polynomial_is_consistent(gs in generator_set(5, 3), t in 0.0..3.0f64) {
        let p = steiner_polynomial(&gs).unwrap();
        let v = intrinsic_volumes(&gs, EnumerationLimits::default()).unwrap();
        let d = gs.dim();
        let direct: f64 = (0..=d).map(|j| zonolab::geometry::kappa(j) * v[d - j] * t.powi(j as i32)).sum();
        prop_assert!((p.eval(t) - direct).abs() <= 1e-9 * direct.max(1.0));
    }
}
