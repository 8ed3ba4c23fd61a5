#![allow(dead_code)]

use eulerflight::control::{BankProfile, ControlProfile, Profile};
use eulerflight::frames::{spherical_to_cartesian, CartesianState, SphericalState};
use eulerflight::models::FlightModel;
use eulerflight::propagation::{propagate, IntegratorConfig, Method, Propagation, StopConditions};
use eulerflight::Environment;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A lifting entry-like initial condition with a beta bank profile.
pub struct EntryCase {
    pub state: CartesianState,
    pub beta0: f64,
    pub controls: ControlProfile,
}

pub fn entry_case(rng: &mut impl Rng, env: &Environment, duration: f64) -> EntryCase {
    let s = SphericalState {
        r: env.body.radius + rng.gen_range(60e3..80e3),
        lon: rng.gen_range(-3.1..3.1),
        lat: rng.gen_range(-1.0..1.0),
        v: rng.gen_range(4000.0..7500.0),
        gamma: rng.gen_range(-3.0_f64..3.0).to_radians(),
        psi: rng.gen_range(-3.1..3.1),
    };
    let beta0 = rng.gen_range(-1.2..1.2);
    let beta_rate = rng.gen_range(-0.005..0.005);
    let controls = ControlProfile {
        alpha: Profile::constant(rng.gen_range(0.05..0.25)),
        bank: BankProfile::Beta(Profile::new(vec![(0.0, beta0), (duration, beta0 + beta_rate * duration)]).unwrap()),
        thrust: None,
    };
    EntryCase {
        state: spherical_to_cartesian(&s),
        beta0,
        controls,
    }
}

pub fn adaptive(rel_tol: f64, output: Option<f64>) -> IntegratorConfig {
    IntegratorConfig {
        method: Method::adaptive(rel_tol, 1e-12),
        output_interval: output,
        ..Default::default()
    }
}

pub fn run<const N: usize, M: FlightModel<N>>(
    model: &M,
    y0: [f64; N],
    cfg: &IntegratorConfig,
    t_final: f64,
    radius: Option<f64>,
) -> Propagation<N> {
    propagate(model, 0.0, y0, cfg, &StopConditions { t_final, radius })
        .unwrap_or_else(|e| panic!("{} propagation failed: {e}", model.name()))
}

pub fn cartesian_samples<const N: usize, M: FlightModel<N>>(
    model: &M,
    p: &Propagation<N>,
) -> Vec<(f64, CartesianState)> {
    p.trajectory
        .samples
        .iter()
        .map(|s| (s.t, model.cartesian(&s.y)))
        .collect()
}
