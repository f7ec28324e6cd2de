use std::f64::consts::PI;

use approx::assert_relative_eq;
use compact_hydrogen::potential::{
    axial_integral, bohr_to_meters, closed_form, image_sum, meters_to_bohr, remainder_w, PotentialSpec, SpacePoint,
    ORACLE_IMAGES,
};
use proptest::prelude::*;

fn radius() -> impl Strategy<Value = f64> {
    prop_oneof![Just(0.05), Just(0.25), Just(1.0), 0.02f64..3.0]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn closed_form_matches_the_image_sum(radius in radius(), lr in -3.0f64..2.0, t in -1.0f64..1.0) {
        let spec = PotentialSpec::physical(radius).unwrap();
        let oracle = spec.with_images(ORACLE_IMAGES).unwrap();
        let p = SpacePoint::new(radius * 10f64.powf(lr), PI * radius * t);
        let s = image_sum(p, &oracle).unwrap();
        let c = closed_form(p, &spec).unwrap();
        prop_assert!((s.value - c).abs() <= s.tail_bound, "diff {} bound {}", (s.value - c).abs(), s.tail_bound);
        prop_assert!((s.partial - c).abs() <= s.comparison_bound);
    }

    #[test]
    fn potential_is_even_periodic_and_below_the_bare_charge(radius in radius(), r in 1e-3f64..50.0, t in -1.0f64..1.0) {
        let spec = PotentialSpec::physical(radius).unwrap();
        let x4 = PI * radius * t;
        let v = closed_form(SpacePoint::new(r, x4), &spec).unwrap();
        let mirrored = closed_form(SpacePoint::new(r, -x4), &spec).unwrap();
        let shifted = closed_form(SpacePoint::reduced(r, x4 + 6.0 * PI * radius, radius), &spec).unwrap();
        prop_assert_eq!(v, mirrored);
        prop_assert!((v - shifted).abs() <= 1e-12 * v.abs());
        prop_assert!(v <= -1.0 / (r * r + x4 * x4) * (1.0 - 1e-12));
    }

    #[test]
    fn remainder_is_bounded_and_non_positive(radius in radius(), r in 0.0f64..20.0, t in -1.0f64..1.0) {
        let spec = PotentialSpec::physical(radius).unwrap();
        let w = remainder_w(SpacePoint::new(r, PI * radius * t), &spec).unwrap();
        prop_assert!(w <= 0.0);
        prop_assert!(w.abs() <= 1.0 / (4.0 * radius * radius));
    }

    #[test]
    fn axial_identity_holds_for_every_radius(radius in 0.01f64..10.0, lr in -2.0f64..2.0) {
        let spec = PotentialSpec::physical(radius).unwrap();
        let r = 10f64.powf(lr);
        let a = axial_integral(r, &spec).unwrap();
        prop_assert!((a.value * r / PI + 1.0).abs() <= 1e-8);
        prop_assert!((a.antiderivative * r / PI + 1.0).abs() <= 1e-12);
    }

    #[test]
    fn unit_round_trip(length in 1e-15f64..1e-6) {
        let back = bohr_to_meters(meters_to_bohr(length));
        prop_assert!((back - length).abs() <= 1e-12 * length);
    }
}

#[test]
fn far_field_is_the_axial_mean() {
    // For r >> R the images smear into a line charge: V_c -> -1/(2 R r).
    let spec = PotentialSpec::physical(0.1).unwrap();
    for &r in &[50.0, 200.0] {
        let v = closed_form(SpacePoint::new(r, 0.2), &spec).unwrap();
        assert_relative_eq!(v, -1.0 / (2.0 * 0.1 * r), max_relative = 1e-12);
    }
}

#[test]
fn singular_and_out_of_cell_points_are_rejected() {
    let spec = PotentialSpec::physical(0.1).unwrap();
    assert!(closed_form(SpacePoint::new(0.0, 0.0), &spec).is_err());
    assert!(closed_form(SpacePoint::new(1.0, 0.5), &spec).is_err());
    assert!(closed_form(SpacePoint::new(-1.0, 0.0), &spec).is_err());
    assert!(remainder_w(SpacePoint::new(0.0, 0.0), &spec).is_ok());
}
