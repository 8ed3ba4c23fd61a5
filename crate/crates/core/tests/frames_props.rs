use eulerflight::frames::{
    cartesian_to_rv, cartesian_to_rvh, cartesian_to_spherical, rv_to_cartesian, rvh_to_cartesian,
    spherical_to_cartesian, CartesianState, SphericalState,
};
use eulerflight::Vec3;
use proptest::prelude::*;

fn state() -> impl Strategy<Value = CartesianState> {
    let v3 = |s: f64| (-s..s, -s..s, -s..s).prop_map(|(x, y, z)| Vec3::new(x, y, z));
    (v3(8e6), v3(9e3))
        .prop_filter("non-degenerate", |(p, v)| {
            p.norm() > 1e5 && v.norm() > 1.0 && p.cross(v).norm() > 1e-3 * p.norm() * v.norm()
        })
        .prop_map(|(p, v)| CartesianState::new(p, v))
}

fn rel(a: &CartesianState, b: &CartesianState) -> f64 {
    ((a.position - b.position).norm() / b.radius()).max((a.velocity - b.velocity).norm() / b.speed())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn rv_round_trip(c in state()) {
        let s = cartesian_to_rv(&c).unwrap();
        prop_assert!((s.r - c.radius()).abs() <= 1e-12 * c.radius());
        prop_assert!((s.v - c.speed()).abs() <= 1e-12 * c.speed());
        prop_assert!(rel(&rv_to_cartesian(&s), &c) < 1e-10);
    }

    #[test]
    fn rvh_round_trip_and_h(c in state()) {
        let s = cartesian_to_rvh(&c).unwrap();
        let h = c.angular_momentum();
        prop_assert!((2.0 * s.r * s.v * s.eps_b3 * s.eta_b - h).abs() <= 1e-10 * h);
        prop_assert!(rel(&rvh_to_cartesian(&s), &c) < 1e-10);
    }

    #[test]
    fn spherical_round_trip(
        r in 6.4e6..7e6f64, lon in -3.1..3.1f64, lat in -1.5..1.5f64,
        v in 10.0..8e3f64, gamma in -1.5..1.5f64, psi in -3.1..3.1f64,
    ) {
        let s = SphericalState { r, lon, lat, v, gamma, psi };
        let c = spherical_to_cartesian(&s);
        let back = cartesian_to_spherical(&c).unwrap();
        prop_assert!(rel(&spherical_to_cartesian(&back), &c) < 1e-10);
        prop_assert!((back.gamma - gamma).abs() < 1e-10);
    }
}
