mod common;

use common::*;
use eulerflight::frames::{
    cartesian_to_rv, cartesian_to_rvh, cartesian_to_rvl, cartesian_to_spherical, CartesianState,
};
use eulerflight::models::{CartesianModel, RvModel, RvhModel, RvlModel, SphericalModel};
use eulerflight::propagation::StopKind;
use eulerflight::Environment;

fn compare(name: &str, a: &[(f64, CartesianState)], b: &[(f64, CartesianState)], pos_tol: f64, speed_tol: f64) {
    assert_eq!(a.len(), b.len(), "{name}: sample count");
    for ((ta, ca), (tb, cb)) in a.iter().zip(b) {
        assert_eq!(ta, tb);
        let r = cb.radius();
        let v = cb.speed();
        let dp = (ca.position - cb.position).norm();
        let dv = (ca.speed() - v).abs();
        assert!(dp <= pos_tol * r, "{name} t={ta}: position error {dp} m");
        assert!(dv <= speed_tol * v, "{name} t={ta}: speed error {dv} m/s");
    }
}

#[test]
fn all_forms_agree_with_cartesian_over_100_s() {
    let env = Environment::earth_default();
    let mut rng = rng(11);
    let cfg = adaptive(1e-12, Some(10.0));
    for _ in 0..4 {
        let case = entry_case(&mut rng, &env, 100.0);
        let cart = CartesianModel {
            env,
            controls: case.controls.clone(),
        };
        let truth = run(&cart, case.state.to_array(), &cfg, 100.0, None);
        assert_eq!(truth.stop.kind, StopKind::TerminalTime);
        let truth = cartesian_samples(&cart, &truth);

        let rv = RvModel {
            env,
            controls: case.controls.clone(),
        };
        let p = run(&rv, cartesian_to_rv(&case.state).unwrap().to_array(), &cfg, 100.0, None);
        compare("rv", &cartesian_samples(&rv, &p), &truth, 1e-6, 1e-8);

        let rvl = RvlModel {
            env,
            controls: case.controls.clone(),
        };
        let y0 = cartesian_to_rvl(&case.state, case.beta0).unwrap().0.to_array();
        let p = run(&rvl, y0, &cfg, 100.0, None);
        compare("rvl", &cartesian_samples(&rvl, &p), &truth, 1e-6, 1e-8);

        let rvh = RvhModel {
            env,
            controls: case.controls.clone(),
        };
        let p = run(
            &rvh,
            cartesian_to_rvh(&case.state).unwrap().to_array(),
            &cfg,
            100.0,
            None,
        );
        compare("rvh", &cartesian_samples(&rvh, &p), &truth, 1e-6, 1e-8);

        let sph = SphericalModel {
            env,
            controls: case.controls.clone(),
        };
        let p = run(
            &sph,
            cartesian_to_spherical(&case.state).unwrap().to_array(),
            &cfg,
            100.0,
            None,
        );
        compare("spherical", &cartesian_samples(&sph, &p), &truth, 1e-6, 1e-8);
    }
}

#[test]
fn thrusting_flight_agrees_with_cartesian() {
    let mut env = Environment::earth_default();
    env.vehicle.thrust = 2.0e4;
    env.vehicle.thrust_offset = 0.05;
    let mut rng = rng(5);
    let cfg = adaptive(1e-12, Some(5.0));
    let case = entry_case(&mut rng, &env, 50.0);
    let cart = CartesianModel {
        env,
        controls: case.controls.clone(),
    };
    let truth = cartesian_samples(&cart, &run(&cart, case.state.to_array(), &cfg, 50.0, None));
    let rv = RvModel {
        env,
        controls: case.controls.clone(),
    };
    let p = run(&rv, cartesian_to_rv(&case.state).unwrap().to_array(), &cfg, 50.0, None);
    compare("rv thrust", &cartesian_samples(&rv, &p), &truth, 1e-6, 1e-8);
    let rvh = RvhModel {
        env,
        controls: case.controls.clone(),
    };
    let p = run(
        &rvh,
        cartesian_to_rvh(&case.state).unwrap().to_array(),
        &cfg,
        50.0,
        None,
    );
    compare("rvh thrust", &cartesian_samples(&rvh, &p), &truth, 1e-6, 1e-8);
}

#[test]
fn rvl_bank_rate_reproduces_rv_sigma_ramp() {
    use eulerflight::control::{BankProfile, ControlProfile, Profile};
    use eulerflight::frames::roll_velocity_frame;
    let env = Environment::earth_default();
    let mut rng = rng(3);
    let case = entry_case(&mut rng, &env, 100.0);
    let cfg = adaptive(1e-12, Some(20.0));
    let (sigma0, rate) = (0.4, -0.01);
    let rv_state = cartesian_to_rv(&case.state).unwrap();
    let rv = RvModel {
        env,
        controls: ControlProfile {
            alpha: case.controls.alpha.clone(),
            bank: BankProfile::Sigma(Profile::new(vec![(0.0, sigma0), (100.0, sigma0 + 100.0 * rate)]).unwrap()),
            thrust: None,
        },
    };
    let rvl = RvlModel {
        env,
        controls: ControlProfile {
            alpha: case.controls.alpha.clone(),
            bank: BankProfile::LiftFrameRate(Profile::constant(rate)),
            thrust: None,
        },
    };
    let a = run(&rv, rv_state.to_array(), &cfg, 100.0, None);
    let b = run(
        &rvl,
        roll_velocity_frame(&rv_state, sigma0).to_array(),
        &cfg,
        100.0,
        None,
    );
    compare(
        "rvl vs rv",
        &cartesian_samples(&rvl, &b),
        &cartesian_samples(&rv, &a),
        1e-9,
        1e-10,
    );
}
