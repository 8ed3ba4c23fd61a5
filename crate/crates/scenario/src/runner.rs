//! Runs a scenario in each selected parameterization.

use std::time::{Duration, Instant};

use eulerflight::control::{BankProfile, ControlProfile};
use eulerflight::dynamics::sigma_axis_from_beta;
use eulerflight::frames::{
    cartesian_to_rv, cartesian_to_rvh, cartesian_to_spherical, roll_velocity_frame, rv_to_cartesian, rvh_to_cartesian,
    spherical_to_cartesian, CartesianState, FrameError, RvState,
};
use eulerflight::models::{CartesianModel, FlightModel, RvModel, RvhModel, RvlModel, SphericalModel};
use eulerflight::propagation::{propagate, PropagationError, StopKind};
use eulerflight::Environment;
use log::{info, warn};
use thiserror::Error;

use crate::config::{InitialState, Param, ScenarioConfig};
use crate::output::Row;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StopLabel {
    TerminalTime,
    RadiusCrossing,
    SingularityGuard,
    StepFailure,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct StopSummary {
    pub kind: StopLabel,
    pub t: f64,
    pub message: Option<String>,
}

/// Largest angular-velocity magnitudes of the `A` and `B` frames seen at
/// the samples (rad/s). Only the quaternion forms report them.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct RateNorms {
    pub max_w_a: f64,
    pub max_w_b: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub param: Param,
    pub rows: Vec<Row>,
    pub rate_norms: Option<RateNorms>,
    pub stop: StopSummary,
    pub evaluations: u64,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    pub wall_time: Duration,
}

#[derive(Debug, Error)]
pub enum RunError {
    /// The scenario cannot be run in this form as configured.
    #[error("{param}: {message}")]
    Config { param: Param, message: String },
    #[error("{param}: {source}")]
    Integration { param: Param, source: PropagationError },
}

/// The initial condition in one parameterization, or the reason it does
/// not exist there.
#[derive(Debug, Clone, PartialEq)]
pub enum Start {
    Rv([f64; 10]),
    Rvl([f64; 10]),
    Rvh([f64; 8]),
    Spherical([f64; 6]),
    Cartesian([f64; 6]),
    Singular(String),
}

pub fn initial_cartesian(initial: &InitialState) -> CartesianState {
    match initial {
        InitialState::Rv(s) => rv_to_cartesian(s),
        InitialState::Rvh(s) => rvh_to_cartesian(s),
        InitialState::Cartesian(c) => *c,
        InitialState::Spherical(s) => spherical_to_cartesian(s),
    }
}

fn initial_rv(cfg: &ScenarioConfig) -> Result<RvState, FrameError> {
    match &cfg.initial {
        InitialState::Rv(s) => Ok(*s),
        other => cartesian_to_rv(&initial_cartesian(other)),
    }
}

/// Roll that puts `b2` of the rv state along the initial lift direction.
fn lift_roll(s: &RvState, controls: &ControlProfile) -> f64 {
    match &controls.bank {
        BankProfile::Sigma(p) => p.value(0.0),
        BankProfile::Beta(p) => {
            let beta = p.value(0.0);
            // undefined in vertical flight; any roll will do there
            sigma_axis_from_beta(beta.cos(), beta.sin(), &s.c_ba())
                .map(|(c, sn)| sn.atan2(c))
                .unwrap_or(0.0)
        }
        BankProfile::LiftFrameRate(_) => 0.0,
    }
}

pub fn initial_state(param: Param, cfg: &ScenarioConfig) -> Start {
    let singular = |e: FrameError| Start::Singular(e.to_string());
    match param {
        Param::Rv => match initial_rv(cfg) {
            Ok(s) => Start::Rv(s.to_array()),
            Err(e) => singular(e),
        },
        Param::Rvl => match initial_rv(cfg) {
            Ok(s) => Start::Rvl(roll_velocity_frame(&s, lift_roll(&s, &cfg.controls)).to_array()),
            Err(e) => singular(e),
        },
        Param::Rvh => match &cfg.initial {
            InitialState::Rvh(s) => Start::Rvh(s.to_array()),
            other => match cartesian_to_rvh(&initial_cartesian(other)) {
                Ok(s) => Start::Rvh(s.to_array()),
                Err(e) => singular(e),
            },
        },
        Param::Spherical => match &cfg.initial {
            InitialState::Spherical(s) => Start::Spherical(s.to_array()),
            other => match cartesian_to_spherical(&initial_cartesian(other)) {
                Ok(s) => Start::Spherical(s.to_array()),
                Err(e) => singular(e),
            },
        },
        Param::Cartesian => Start::Cartesian(initial_cartesian(&cfg.initial).to_array()),
    }
}

fn rows<const N: usize, M: FlightModel<N>>(
    model: &M,
    samples: &[eulerflight::propagation::Sample<N>],
    quats: impl Fn(&[f64; N]) -> (Option<[f64; 4]>, Option<[f64; 4]>),
) -> (Vec<Row>, Option<RateNorms>) {
    let mut norms: Option<RateNorms> = None;
    let rows = samples
        .iter()
        .map(|s| {
            let c = model.cartesian(&s.y);
            let d = model.diagnostics(s.t, &s.y);
            if let Some(w) = d.rates {
                let n = norms.get_or_insert(RateNorms {
                    max_w_a: 0.0,
                    max_w_b: 0.0,
                });
                n.max_w_a = n.max_w_a.max(w.w_a.norm());
                n.max_w_b = n.max_w_b.max(w.w_b.norm());
            }
            let (qa, qb) = quats(&s.y);
            Row {
                t: s.t,
                r: c.radius(),
                v: c.speed(),
                qa,
                qb,
                position: c.position.into(),
                velocity: c.velocity.into(),
                alpha: d.alpha,
                sigma: d.sigma,
                beta: d.beta,
                h_mag: d.h,
                energy: d.energy,
                norm_qa: d.norm_qa,
                norm_qb: d.norm_qb,
            }
        })
        .collect();
    (rows, norms)
}

fn run_model<const N: usize, M: FlightModel<N>>(
    param: Param,
    model: &M,
    y0: [f64; N],
    cfg: &ScenarioConfig,
    quats: impl Fn(&[f64; N]) -> (Option<[f64; 4]>, Option<[f64; 4]>),
) -> Result<RunResult, RunError> {
    let start = Instant::now();
    let p = match propagate(model, 0.0, y0, &cfg.integrator, &cfg.stop) {
        Ok(p) => p,
        Err(PropagationError::Derivative { source, .. }) if !source.is_singularity() => {
            return Err(RunError::Config {
                param,
                message: source.to_string(),
            })
        }
        Err(source) => return Err(RunError::Integration { param, source }),
    };
    let wall_time = start.elapsed();
    let (rows, rate_norms) = rows(model, &p.trajectory.samples, quats);
    let (kind, message) = match &p.stop.kind {
        StopKind::TerminalTime => (StopLabel::TerminalTime, None),
        StopKind::RadiusCrossing => (StopLabel::RadiusCrossing, None),
        StopKind::SingularityGuard(e) => (StopLabel::SingularityGuard, Some(e.to_string())),
        StopKind::StepFailure(m) => (StopLabel::StepFailure, Some(m.clone())),
    };
    Ok(RunResult {
        param,
        rows,
        rate_norms,
        stop: StopSummary {
            kind,
            t: p.stop.t,
            message,
        },
        evaluations: p.trajectory.evaluations,
        accepted_steps: p.trajectory.accepted_steps,
        rejected_steps: p.trajectory.rejected_steps,
        wall_time,
    })
}

fn q_at<const N: usize>(y: &[f64; N], i: usize) -> Option<[f64; 4]> {
    Some([y[i], y[i + 1], y[i + 2], y[i + 3]])
}

/// Propagates the scenario in one parameterization.
pub fn run_param(param: Param, cfg: &ScenarioConfig) -> Result<RunResult, RunError> {
    let env: Environment = cfg.env;
    let controls = cfg.controls.clone();
    if matches!(controls.bank, BankProfile::LiftFrameRate(_)) && param != Param::Rvl {
        return Err(RunError::Config {
            param,
            message: "a lift_frame_rate bank profile only drives the rvl form".into(),
        });
    }
    let result = match initial_state(param, cfg) {
        Start::Rv(y) => run_model(param, &RvModel { env, controls }, y, cfg, |y| (q_at(y, 1), q_at(y, 6))),
        Start::Rvl(y) => run_model(param, &RvlModel { env, controls }, y, cfg, |y| (q_at(y, 1), q_at(y, 6))),
        Start::Rvh(y) => run_model(param, &RvhModel { env, controls }, y, cfg, |y| {
            (q_at(y, 1), Some([0.0, 0.0, y[6], y[7]]))
        }),
        Start::Spherical(y) => run_model(param, &SphericalModel { env, controls }, y, cfg, |_| (None, None)),
        Start::Cartesian(y) => run_model(param, &CartesianModel { env, controls }, y, cfg, |_| (None, None)),
        Start::Singular(message) => Ok(RunResult {
            param,
            rows: Vec::new(),
            rate_norms: None,
            stop: StopSummary {
                kind: StopLabel::SingularityGuard,
                t: 0.0,
                message: Some(format!("initial state: {message}")),
            },
            evaluations: 0,
            accepted_steps: 0,
            rejected_steps: 0,
            wall_time: Duration::ZERO,
        }),
    }?;
    info!(
        "{}: {} at t = {:.6} s after {} evaluations ({} samples)",
        param,
        serde_json::to_string(&result.stop.kind).unwrap_or_default(),
        result.stop.t,
        result.evaluations,
        result.rows.len()
    );
    if let Some(m) = &result.stop.message {
        warn!("{param}: {m}");
    }
    Ok(result)
}

/// Runs every requested parameterization, one thread each.
pub fn run_all(params: &[Param], cfg: &ScenarioConfig) -> Vec<Result<RunResult, RunError>> {
    std::thread::scope(|scope| {
        let handles: Vec<_> = params.iter().map(|&p| scope.spawn(move || run_param(p, cfg))).collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("propagation thread panicked"))
            .collect()
    })
}

/// Whether a result's singularity guard was announced by the scenario.
pub fn guard_expected(cfg: &ScenarioConfig, r: &RunResult) -> bool {
    r.stop.kind != StopLabel::SingularityGuard || cfg.expect_singularity.contains(&r.param)
}
