use eulerflight::quat::{
    dcm_from_axis_angle, dcm_from_quat, omega_from_quat_rates, quat_from_axis_angle, quat_from_dcm, quat_rates,
    AxisAngle, UnitQuaternion, Vec3,
};
use proptest::prelude::*;

fn unit_vec() -> impl Strategy<Value = Vec3> {
    (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64)
        .prop_map(|(x, y, z)| Vec3::new(x, y, z))
        .prop_filter("not too short", |v| v.norm() > 0.1)
        .prop_map(|v| v.normalize())
}

fn quat() -> impl Strategy<Value = UnitQuaternion> {
    (unit_vec(), 0.0..std::f64::consts::TAU)
        .prop_map(|(axis, angle)| quat_from_axis_angle(&AxisAngle::new(axis, angle).unwrap()))
}

fn vec3() -> impl Strategy<Value = Vec3> {
    (-2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64).prop_map(|(x, y, z)| Vec3::new(x, y, z))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn dcm_is_proper_rotation(q in quat()) {
        let c = dcm_from_quat(&q);
        let (ortho, det) = c.orthonormality();
        prop_assert!(ortho < 1e-10);
        prop_assert!((det - 1.0).abs() < 1e-10);
    }

    #[test]
    fn axis_angle_paths_agree(axis in unit_vec(), angle in -7.0..7.0f64) {
        let aa = AxisAngle::new(axis, angle).unwrap();
        let direct = dcm_from_axis_angle(&aa);
        let via_q = dcm_from_quat(&quat_from_axis_angle(&aa));
        prop_assert!((direct.matrix() - via_q.matrix()).amax() < 1e-13);
    }

    #[test]
    fn dcm_round_trip(q in quat()) {
        let back = quat_from_dcm(&dcm_from_quat(&q)).unwrap();
        prop_assert!(back.eta >= 0.0);
        let q = if q.eta < 0.0 { q.negated() } else { q };
        let d = q.to_array().iter().zip(back.to_array()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        prop_assert!(d < 1e-12, "{:?} vs {:?}", q, back);
    }

    #[test]
    fn rates_recover_omega(q in quat(), w in vec3()) {
        let qdot = quat_rates(&q, &w);
        prop_assert!((omega_from_quat_rates(&qdot, &q) - w).amax() < 1e-12);
        let d = q.to_array().iter().zip(qdot.to_array()).map(|(a, b)| a * b).sum::<f64>();
        prop_assert!(d.abs() < 1e-14);
    }
}
