//! Randomized properties of the geometry, the spherical functions and the
//! region boundaries.

use hyperlac::geometry::{distance, two_point_distance};
use hyperlac::num::re;
use hyperlac::operators::region::{region_threshold, Curve};
use hyperlac::specfun::{phi_closed_form_n3, spherical_phi};
use hyperlac::{Dimension, HyperPoint64};
use proptest::prelude::*;

fn dim(n: usize) -> Dimension {
    Dimension::new(n).unwrap()
}

fn direction(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, n).prop_filter("nonzero", |v| v.iter().map(|x| x * x).sum::<f64>() > 1e-3)
}

fn point(n: usize) -> impl Strategy<Value = HyperPoint64> {
    (0.0f64..4.0, direction(n)).prop_map(|(r, s)| HyperPoint64::polar(r, &s).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn distance_is_a_metric(x in point(3), y in point(3), z in point(3)) {
        let dxy = distance(&x, &y).unwrap();
        prop_assert!(dxy >= 0.0);
        prop_assert_eq!(dxy, distance(&y, &x).unwrap());
        prop_assert!(distance(&x, &x).unwrap() < 1e-7);
        let via = distance(&x, &z).unwrap() + distance(&z, &y).unwrap();
        prop_assert!(dxy <= via * (1.0 + 1e-12) + 1e-9);
    }

    #[test]
    fn distance_from_origin_is_the_polar_radius(x in point(2)) {
        let o = HyperPoint64::origin(dim(2));
        prop_assert!((distance(&o, &x).unwrap() - x.radius()).abs() < 1e-9 * (1.0 + x.radius()));
    }

    #[test]
    fn law_of_cosines_matches_the_hyperboloid(r in 0.0f64..3.0, t in 0.0f64..3.0, theta in 0.0f64..std::f64::consts::PI) {
        let x = HyperPoint64::polar(r, &[1.0, 0.0]).unwrap();
        let y = HyperPoint64::polar(t, &[theta.cos(), theta.sin()]).unwrap();
        let direct = distance(&x, &y).unwrap();
        let law = two_point_distance(r, t, theta);
        prop_assert!((direct - law).abs() < 1e-8 * (1.0 + law), "{} vs {}", direct, law);
    }

    #[test]
    fn spherical_functions_are_bounded_by_one(lambda in 0.0f64..30.0, r in 0.0f64..6.0, n in 2usize..5) {
        let phi = spherical_phi(re(lambda), r, dim(n)).unwrap();
        prop_assert!(phi.norm() <= 1.0 + 1e-10);
    }

    #[test]
    fn three_dimensional_phi_has_a_closed_form(lambda in 0.0f64..30.0, r in 0.0f64..6.0) {
        let phi = spherical_phi(re(lambda), r, dim(3)).unwrap();
        let closed = phi_closed_form_n3(lambda, r);
        prop_assert!((phi.re - closed).abs() <= 1e-9 && phi.im.abs() <= 1e-9);
    }

    #[test]
    fn lacunary_region_contains_the_full_region(p in 1.0001f64..50.0, n in 2usize..6) {
        let lac = region_threshold(p, dim(n), Curve::Lacunary).unwrap();
        let full = region_threshold(p, dim(n), Curve::Full).unwrap();
        prop_assert!(lac <= full + 1e-12, "p={} lacunary {} full {}", p, lac, full);
    }
}
