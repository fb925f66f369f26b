use apollonian::calculus::{flag_curvature, ricci, s_curvature, spray_closed, SRoute};
use apollonian::finsler::{finsler_norm, fundamental_tensor, indicatrix_ellipse, TensorMode};
use apollonian::navigation::{hyperboloid_map, pullback_check, zermelo_data, zermelo_reconstruct};
use apollonian::weakmetric::{
    apollonian_distance, barbilian_distance, geodesic_arc, supremum_points,
};
use apollonian::{DiscPoint, TangentVector};
use proptest::prelude::*;

fn point(max: f64) -> impl Strategy<Value = DiscPoint> {
    (0.0..max, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| DiscPoint::from_polar(r, t).unwrap())
}

fn vector() -> impl Strategy<Value = TangentVector> {
    (0.05f64..5.0, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| {
        let u = TangentVector::from_angle(t);
        TangentVector::new(r * u.xi1, r * u.xi2)
    })
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn triangle_inequality(x in point(0.95), y in point(0.95), z in point(0.95)) {
        let excess = apollonian_distance(&x, &z) - apollonian_distance(&x, &y) - apollonian_distance(&y, &z);
        prop_assert!(excess <= 1e-12, "excess {excess}");
    }

    #[test]
    fn distance_is_nonnegative(x in point(0.95), y in point(0.95)) {
        prop_assert!(apollonian_distance(&x, &y) >= 0.0);
    }

    #[test]
    fn barbilian_is_symmetric(x in point(0.95), y in point(0.95)) {
        prop_assert!((barbilian_distance(&x, &y) - barbilian_distance(&y, &x)).abs() <= 1e-12);
    }

    #[test]
    fn supremum_attains_distance(x in point(0.9), y in point(0.9)) {
        prop_assume!(x.distance_to(&y) > 1e-6);
        let s = supremum_points(&x, &y).unwrap();
        let [a1, a2] = s.a_plus.coords();
        let ratio = (x.x1() - a1).hypot(x.x2() - a2) / (y.x1() - a1).hypot(y.x2() - a2);
        prop_assert!(rel(ratio.ln(), apollonian_distance(&x, &y)) <= 1e-9);
        let arc = geodesic_arc(&x, &y).unwrap();
        prop_assert!(arc.residual(s.a_plus.coords()) <= 1e-9);
    }

    #[test]
    fn norm_is_positively_homogeneous(x in point(0.95), xi in vector(), t in 0.1f64..10.0) {
        let scaled = TangentVector::new(t * xi.xi1, t * xi.xi2);
        prop_assert!(rel(finsler_norm(&x, scaled), t * finsler_norm(&x, xi)) <= 1e-12);
        prop_assert!(finsler_norm(&x, xi) > 0.0);
    }

    #[test]
    fn tensor_is_zero_homogeneous(x in point(0.95), xi in vector(), t in 0.1f64..10.0) {
        let scaled = TangentVector::new(t * xi.xi1, t * xi.xi2);
        let a = fundamental_tensor(&x, xi, TensorMode::Closed).unwrap();
        let b = fundamental_tensor(&x, scaled, TensorMode::Closed).unwrap();
        prop_assert!(a.relative_difference(&b) <= 1e-12);
        prop_assert!(a.is_positive_definite());
    }

    #[test]
    fn spray_is_two_homogeneous(x in point(0.95), xi in vector(), t in 0.1f64..10.0) {
        let scaled = TangentVector::new(t * xi.xi1, t * xi.xi2);
        let g = spray_closed(&x, xi).unwrap().g_spray;
        let h = spray_closed(&x, scaled).unwrap().g_spray;
        for k in 0..2 {
            prop_assert!(rel(h[k], t * t * g[k]) <= 1e-11);
        }
    }

    #[test]
    fn flag_curvature_is_zero_homogeneous(x in point(0.9), xi in vector(), t in 0.1f64..10.0) {
        let scaled = TangentVector::new(t * xi.xi1, t * xi.xi2);
        prop_assert!(rel(flag_curvature(&x, scaled).unwrap(), flag_curvature(&x, xi).unwrap()) <= 1e-10);
        prop_assert!(rel(ricci(&x, scaled).unwrap(), t * t * ricci(&x, xi).unwrap()) <= 1e-10);
    }

    #[test]
    fn s_curvature_lower_bound(x in point(0.95), xi in vector()) {
        let s = s_curvature(&x, xi, SRoute::Closed).unwrap();
        prop_assert!(s >= 1.5 * finsler_norm(&x, xi) - 1e-10);
    }

    #[test]
    fn zermelo_round_trip(x in point(0.95), xi in vector()) {
        let f = finsler_norm(&x, xi);
        prop_assert!(rel(zermelo_reconstruct(&zermelo_data(&x), xi).unwrap(), f) <= 1e-12);
    }

    #[test]
    fn hyperboloid_pullback_doubles(x in point(0.95), xi in vector()) {
        prop_assert!(hyperboloid_map(&x).constraint_residual().abs() <= 1e-10);
        let (pulled, twice) = pullback_check(&x, xi).unwrap();
        prop_assert!(rel(pulled, twice) <= 1e-10);
    }

    #[test]
    fn indicatrix_eccentricity_is_radius(x in point(0.95)) {
        prop_assert!((indicatrix_ellipse(&x).eccentricity - x.norm()).abs() <= 1e-10);
    }
}
