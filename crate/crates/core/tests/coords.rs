use std::f64::consts::{PI, TAU};

use proptest::prelude::*;
use virtlab::coords::{
    ccs_to_scs, scs_to_ccs, sphere_cone_intersection, standard_triples, unit_triple, SphericalPoint, Vec3,
};

fn off_axis_vector() -> impl Strategy<Value = Vec3> {
    (-6.0..6.0f64, 0.05..PI - 0.05, 0.0..TAU).prop_map(|(lg, t, p)| scs_to_ccs(SphericalPoint::new(10f64.powf(lg), t, p)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn triples_are_orthonormal_and_right_handed(theta in 1e-6..PI - 1e-6, phi in 0.0..TAU) {
        let t = unit_triple(theta, phi);
        prop_assert!(t.defined);
        for v in [t.e_r, t.e_theta, t.e_phi] {
            prop_assert!((v.norm() - 1.0).abs() <= 1e-12);
        }
        prop_assert!(t.e_r.dot(t.e_theta).abs() <= 1e-12);
        prop_assert!(t.e_theta.dot(t.e_phi).abs() <= 1e-12);
        prop_assert!(t.e_phi.dot(t.e_r).abs() <= 1e-12);
        prop_assert!(t.e_r.cross(t.e_theta).distance(t.e_phi) <= 1e-12);
    }

    #[test]
    fn ccs_scs_round_trip(v in off_axis_vector()) {
        let back = scs_to_ccs(ccs_to_scs(v));
        prop_assert!(back.distance(v) <= 1e-12 * v.norm(), "{v:?} -> {back:?}");
    }

    #[test]
    fn scs_ccs_round_trip(r in 1e-3..1e3f64, theta in 0.01..PI - 0.01, phi in 0.0..TAU) {
        let p = ccs_to_scs(scs_to_ccs(SphericalPoint::new(r, theta, phi)));
        prop_assert!((p.r - r).abs() <= 1e-12 * r);
        prop_assert!((p.theta - theta).abs() <= 1e-12);
        let dphi = (p.phi - phi).rem_euclid(TAU);
        prop_assert!(dphi.min(TAU - dphi) <= 1e-12);
    }

    #[test]
    fn intersection_radius(r in 0.1..10.0f64, theta in 0.0..=PI) {
        let c = sphere_cone_intersection(r, theta);
        for p in &c.points {
            prop_assert!((p.x.hypot(p.y) - r * theta.sin()).abs() <= 1e-9);
            prop_assert!((p.z - r * theta.cos()).abs() <= 1e-9);
        }
    }
}

#[test]
fn default_triples() {
    let t = standard_triples(None);
    assert_eq!(t.iter().filter(|t| t.defined).count(), 16);
    assert_eq!(t.iter().filter(|t| !t.defined).count(), 2);
}

#[test]
fn fifty_degree_circle() {
    let c = sphere_cone_intersection(1.0, 50f64.to_radians());
    let rho = c.points[0].x.hypot(c.points[0].y);
    assert!((rho - 0.766044).abs() < 5e-7);
}
