mod common;

use approx::assert_relative_eq;
use proptest::prelude::*;
use zonolab::functionals::mean_width;
use zonolab::radii::{circumradius, circumradius_with, inradius, near_maximal_sign_vectors, CircumMethod, CircumOptions};
use zonolab::zonotope::{make_cube, make_regular_rhombic_dodecahedron, make_regular_zonogon};
use zonolab::GeneratorSet;

fn regular_rd_circumradius(d: usize) -> f64 {
    let d = d as f64;
    if (d as usize).is_multiple_of(2) {
        (d + 2.0).sqrt() / 2.0
    } else {
        (d + 1.0) / (2.0 * d.sqrt())
    }
}

#[test]
fn regular_rhombic_dodecahedron_circumradius() {
    for d in 2..=6 {
        let rd = make_regular_rhombic_dodecahedron(d, 1.0).unwrap();
        let cert = circumradius(&rd).unwrap();
        assert_relative_eq!(cert.value, regular_rd_circumradius(d), max_relative = 1e-10);
        assert_relative_eq!(cert.value, common::circumradius(&rd), max_relative = 1e-12);
    }
}

#[test]
fn cube_and_zonogon_radii() {
    for d in 2..=5 {
        let c = make_cube(d, 1.0).unwrap();
        assert_relative_eq!(circumradius(&c).unwrap().value, (d as f64).sqrt() / 2.0, max_relative = 1e-12);
        assert_relative_eq!(inradius(&c).unwrap().value, 0.5, max_relative = 1e-12);
    }
    for n in 2..=12 {
        let z = make_regular_zonogon(n, 1.0).unwrap();
        let x = std::f64::consts::PI / (2 * n) as f64;
        assert_relative_eq!(circumradius(&z).unwrap().value, 0.5 / x.sin(), max_relative = 1e-12);
        assert_relative_eq!(inradius(&z).unwrap().value, 0.5 / x.tan(), max_relative = 1e-12);
    }
}

#[test]
fn witnesses_of_the_square() {
    let sq = make_cube(2, 1.0).unwrap();
    let w = near_maximal_sign_vectors(&sq, 1e-12).unwrap();
    assert_eq!(w.len(), 2);
    assert!(w.iter().all(|s| s.0[0] == 1));
}

fn generator_set(max_n: usize, max_d: usize) -> impl Strategy<Value = GeneratorSet> {
    (2..=max_d)
        .prop_flat_map(move |d| (Just(d), d..=max_n))
        .prop_flat_map(|(d, n)| prop::collection::vec(prop::collection::vec(-2.0..2.0f64, d), n).prop_map(move |g| (d, g)))
        .prop_map(|(d, g)| GeneratorSet::new(d, g).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn circumradius_methods_agree(gs in generator_set(10, 4)) {
        let brute = common::circumradius(&gs);
        for method in [CircumMethod::Gray, CircumMethod::BranchAndBound, CircumMethod::Arrangement] {
            let v = circumradius_with(&gs, CircumOptions { method, allow_large: false }).unwrap().value;
            prop_assert!((v - brute).abs() <= 1e-10 * brute.max(1.0), "{:?}: {} vs {}", method, v, brute);
        }
    }

    #[test]
    fn radii_bracket_half_mean_width(gs in generator_set(8, 4)) {
        prop_assume!(gs.rank() == gs.dim());
        let c = circumradius(&gs).unwrap().value;
        let r = inradius(&gs).unwrap().value;
        let half_w = mean_width(&gs) / 2.0;
        prop_assert!(c >= half_w * (1.0 - 1e-12));
        prop_assert!(r <= half_w * (1.0 + 1e-12));
        prop_assert!((r - common::inradius(&gs)).abs() <= 1e-9 * r.max(1.0));
    }
}
