//! Fixed-step RK4 and adaptive Dormand-Prince 4(5) integration with
//! quaternion renormalization and radius-crossing detection.

use thiserror::Error;

use crate::dynamics::DynamicsError;
use crate::quat::QuatError;

/// A first-order system `y' = f(t, y)` with `N` components.
pub trait OdeSystem<const N: usize> {
    fn rates(&self, t: f64, y: &[f64; N]) -> Result<[f64; N], DynamicsError>;

    /// Rescales any quaternion blocks of `y` to unit norm.
    fn renormalize(&self, _y: &mut [f64; N]) -> Result<(), QuatError> {
        Ok(())
    }

    /// Distance from the body centre, used by radius events.
    fn radius(&self, y: &[f64; N]) -> f64;

    /// Absolute-tolerance multiplier for component `i`.
    fn abs_scale(&self, _i: usize) -> f64 {
        1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method {
    Rk4 {
        step: f64,
    },
    DormandPrince {
        rel_tol: f64,
        abs_tol: f64,
        initial_step: Option<f64>,
        max_step: Option<f64>,
    },
}

impl Method {
    pub fn adaptive(rel_tol: f64, abs_tol: f64) -> Self {
        Method::DormandPrince {
            rel_tol,
            abs_tol,
            initial_step: None,
            max_step: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub method: Method,
    pub renormalize: bool,
    pub max_steps: usize,
    /// Record samples on this uniform grid instead of at every step.
    pub output_interval: Option<f64>,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            method: Method::adaptive(1e-10, 1e-12),
            renormalize: true,
            max_steps: 10_000_000,
            output_interval: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StopConditions {
    pub t_final: f64,
    /// Stop when the radius crosses this value.
    pub radius: Option<f64>,
}

/// Required accuracy of a refined radius crossing.
pub const EVENT_TIME_TOL: f64 = 1e-6;
pub const EVENT_RADIUS_TOL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample<const N: usize> {
    pub t: f64,
    pub y: [f64; N],
}

#[derive(Debug, Clone, PartialEq)]
pub enum StopKind {
    TerminalTime,
    RadiusCrossing,
    SingularityGuard(DynamicsError),
    StepFailure(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct StopEvent<const N: usize> {
    pub kind: StopKind,
    pub t: f64,
    /// Last accepted state before the event.
    pub before: Sample<N>,
    /// First state past the event, when one was computed.
    pub after: Option<Sample<N>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<const N: usize> {
    pub samples: Vec<Sample<N>>,
    pub evaluations: u64,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
}

impl<const N: usize> Trajectory<N> {
    pub fn last(&self) -> &Sample<N> {
        self.samples.last().expect("trajectory holds the initial sample")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Propagation<const N: usize> {
    pub trajectory: Trajectory<N>,
    pub stop: StopEvent<N>,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PropagationError {
    #[error("invalid integrator configuration: {0}")]
    InvalidConfig(String),
    #[error("maximum of {steps} steps exceeded at t = {t}")]
    MaxSteps { t: f64, steps: usize },
    #[error("derivative evaluation failed at t = {t}: {source}")]
    Derivative { t: f64, source: DynamicsError },
    #[error("renormalization failed at t = {t}: {source}")]
    Renormalize { t: f64, source: QuatError },
}

// Dormand-Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 5.0;

struct Stepper<'a, const N: usize, S> {
    sys: &'a S,
    method: Method,
    evaluations: u64,
}

enum StepOutcome<const N: usize> {
    /// New state, error ratio (0 for RK4) and the rate at the new state
    /// when it came for free.
    Done([f64; N], f64, Option<[f64; N]>),
    Failed(DynamicsError),
}

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (c, k) in terms {
            acc += c * k[i];
        }
        *o += h * acc;
    }
    out
}

impl<'a, const N: usize, S: OdeSystem<N>> Stepper<'a, N, S> {
    fn eval(&mut self, t: f64, y: &[f64; N]) -> Result<[f64; N], DynamicsError> {
        self.evaluations += 1;
        let f = self.sys.rates(t, y)?;
        Ok(f)
    }

    fn step(&mut self, t: f64, y: &[f64; N], k1: &[f64; N], h: f64) -> StepOutcome<N> {
        match self.method {
            Method::Rk4 { .. } => {
                let run = |s: &mut Self| -> Result<[f64; N], DynamicsError> {
                    let k2 = s.eval(t + 0.5 * h, &axpy(y, 0.5 * h, &[(1.0, k1)]))?;
                    let k3 = s.eval(t + 0.5 * h, &axpy(y, 0.5 * h, &[(1.0, &k2)]))?;
                    let k4 = s.eval(t + h, &axpy(y, h, &[(1.0, &k3)]))?;
                    Ok(axpy(y, h / 6.0, &[(1.0, k1), (2.0, &k2), (2.0, &k3), (1.0, &k4)]))
                };
                match run(self) {
                    Ok(y1) => StepOutcome::Done(y1, 0.0, None),
                    Err(e) => StepOutcome::Failed(e),
                }
            }
            Method::DormandPrince { rel_tol, abs_tol, .. } => {
                let mut k = [[0.0; N]; 7];
                k[0] = *k1;
                for s in 1..7 {
                    let terms: Vec<(f64, &[f64; N])> = (0..s).map(|j| (A[s][j], &k[j])).collect();
                    let ys = axpy(y, h, &terms);
                    match self.eval(t + C[s] * h, &ys) {
                        Ok(f) => k[s] = f,
                        Err(e) => return StepOutcome::Failed(e),
                    }
                }
                let terms: Vec<(f64, &[f64; N])> = (0..7).map(|j| (B5[j], &k[j])).collect();
                let y5 = axpy(y, h, &terms);
                let mut err = 0.0_f64;
                for i in 0..N {
                    let mut e = 0.0;
                    for j in 0..7 {
                        e += (B5[j] - B4[j]) * k[j][i];
                    }
                    let scale = abs_tol * self.sys.abs_scale(i) + rel_tol * y[i].abs().max(y5[i].abs());
                    err = err.max((h * e).abs() / scale);
                }
                if !err.is_finite() || y5.iter().any(|x| !x.is_finite()) {
                    err = f64::INFINITY;
                }
                StepOutcome::Done(y5, err, Some(k[6]))
            }
        }
    }
}

fn initial_step<const N: usize, S: OdeSystem<N>>(
    sys: &S,
    y: &[f64; N],
    f: &[f64; N],
    rel_tol: f64,
    abs_tol: f64,
) -> f64 {
    let mut d0 = 0.0_f64;
    let mut d1 = 0.0_f64;
    for i in 0..N {
        let sc = abs_tol * sys.abs_scale(i) + rel_tol * y[i].abs();
        d0 = d0.max(y[i].abs() / sc);
        d1 = d1.max(f[i].abs() / sc);
    }
    if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        0.01 * d0 / d1
    }
}

/// Integrates `sys` from `(t0, y0)` until `stop.t_final`, a radius
/// crossing, or a singularity guard. The initial sample is always kept.
pub fn propagate<const N: usize, S: OdeSystem<N>>(
    sys: &S,
    t0: f64,
    y0: [f64; N],
    config: &IntegratorConfig,
    stop: &StopConditions,
) -> Result<Propagation<N>, PropagationError> {
    let t_final = stop.t_final;
    if !(t_final > t0) {
        return Err(PropagationError::InvalidConfig(format!(
            "t_final {t_final} must exceed t0 {t0}"
        )));
    }
    if let Some(dt) = config.output_interval {
        if !(dt > 0.0) {
            return Err(PropagationError::InvalidConfig(
                "output interval must be positive".into(),
            ));
        }
    }
    let (mut h, max_step) = match config.method {
        Method::Rk4 { step } => {
            if !(step > 0.0) {
                return Err(PropagationError::InvalidConfig("RK4 step must be positive".into()));
            }
            (step, step)
        }
        Method::DormandPrince {
            rel_tol,
            abs_tol,
            initial_step,
            max_step,
        } => {
            if !(rel_tol > 0.0 && abs_tol > 0.0) {
                return Err(PropagationError::InvalidConfig("tolerances must be positive".into()));
            }
            (initial_step.unwrap_or(0.0), max_step.unwrap_or(f64::INFINITY))
        }
    };

    let mut stepper = Stepper {
        sys,
        method: config.method,
        evaluations: 0,
    };
    let mut traj = Trajectory {
        samples: vec![Sample { t: t0, y: y0 }],
        evaluations: 0,
        accepted_steps: 0,
        rejected_steps: 0,
    };
    let finish = |mut traj: Trajectory<N>, stepper: &Stepper<N, S>, kind, t, before, after| {
        traj.evaluations = stepper.evaluations;
        Ok(Propagation {
            trajectory: traj,
            stop: StopEvent { kind, t, before, after },
        })
    };

    let mut t = t0;
    let mut y = y0;
    let mut k1 = match stepper.eval(t, &y) {
        Ok(f) => f,
        Err(e) if e.is_singularity() => {
            let s = Sample { t, y };
            return finish(traj, &stepper, StopKind::SingularityGuard(e), t, s, None);
        }
        Err(source) => return Err(PropagationError::Derivative { t, source }),
    };
    if let Method::DormandPrince {
        rel_tol,
        abs_tol,
        initial_step: None,
        ..
    } = config.method
    {
        h = initial_step(sys, &y, &k1, rel_tol, abs_tol).min(t_final - t0);
    }
    let target_r = stop.radius;
    let side = |yy: &[f64; N]| target_r.map(|rt| (sys.radius(yy) - rt).signum());
    let side0 = side(&y);
    let mut next_output = config.output_interval.map(|dt| (1usize, dt));
    let min_step = |t: f64| 1e-12 * t.abs().max(1.0);

    loop {
        if traj.accepted_steps >= config.max_steps {
            return Err(PropagationError::MaxSteps {
                t,
                steps: config.max_steps,
            });
        }
        // land on the next output time and on t_final
        let mut h_try = h.min(max_step);
        let mut boundary = t_final;
        if let Some((n, dt)) = next_output {
            boundary = boundary.min(t0 + n as f64 * dt);
        }
        let mut hits_boundary = false;
        if t + h_try >= boundary - min_step(boundary) {
            h_try = boundary - t;
            hits_boundary = true;
        }

        match stepper.step(t, &y, &k1, h_try) {
            StepOutcome::Failed(e) => {
                if !e.is_singularity() {
                    return Err(PropagationError::Derivative { t, source: e });
                }
                // adaptive steps may have probed past the singular point;
                // retry smaller before declaring the guard
                if matches!(config.method, Method::DormandPrince { .. }) && h_try > 1e3 * min_step(t) {
                    traj.rejected_steps += 1;
                    h = 0.25 * h_try;
                    continue;
                }
                let s = Sample { t, y };
                return finish(traj, &stepper, StopKind::SingularityGuard(e), t, s, None);
            }
            StepOutcome::Done(mut y1, err, fsal) => {
                if err > 1.0 {
                    traj.rejected_steps += 1;
                    let factor = if err.is_finite() {
                        (SAFETY * err.powf(-0.2)).clamp(MIN_FACTOR, 1.0)
                    } else {
                        MIN_FACTOR
                    };
                    h = h_try * factor;
                    if h < min_step(t) {
                        let s = Sample { t, y };
                        let msg = format!("step size {h:e} below minimum at t = {t}");
                        return finish(traj, &stepper, StopKind::StepFailure(msg), t, s, None);
                    }
                    continue;
                }
                let t1 = if hits_boundary { boundary } else { t + h_try };
                if config.renormalize {
                    sys.renormalize(&mut y1)
                        .map_err(|source| PropagationError::Renormalize { t: t1, source })?;
                }
                traj.accepted_steps += 1;

                if let (Some(rt), Some(s0)) = (target_r, side0) {
                    let s1 = side(&y1).unwrap_or(s0);
                    if s1 != s0 || sys.radius(&y1) == rt {
                        let before = Sample { t, y };
                        let after = Sample { t: t1, y: y1 };
                        let event = refine_crossing(&mut stepper, config.renormalize, before, after, &k1, rt)?;
                        traj.samples.push(event);
                        return finish(traj, &stepper, StopKind::RadiusCrossing, event.t, before, Some(after));
                    }
                }

                let record = match next_output {
                    None => true,
                    Some((n, dt)) => {
                        if hits_boundary && boundary == t0 + n as f64 * dt {
                            next_output = Some((n + 1, dt));
                            true
                        } else {
                            false
                        }
                    }
                };
                let at_end = hits_boundary && boundary == t_final;
                if record || at_end {
                    traj.samples.push(Sample { t: t1, y: y1 });
                }
                t = t1;
                y = y1;

                k1 = match fsal {
                    Some(f) if !config.renormalize => f,
                    _ => match stepper.eval(t, &y) {
                        Ok(f) => f,
                        Err(e) if e.is_singularity() => {
                            let s = Sample { t, y };
                            return finish(traj, &stepper, StopKind::SingularityGuard(e), t, s, None);
                        }
                        Err(source) => return Err(PropagationError::Derivative { t, source }),
                    },
                };
                if at_end {
                    let s = Sample { t, y };
                    return finish(traj, &stepper, StopKind::TerminalTime, t, s, None);
                }
                if matches!(config.method, Method::DormandPrince { .. }) {
                    let factor = if err == 0.0 {
                        MAX_FACTOR
                    } else {
                        (SAFETY * err.powf(-0.2)).clamp(MIN_FACTOR, MAX_FACTOR)
                    };
                    // a step shortened to hit an output time says little
                    // about the next one
                    h = if hits_boundary {
                        h.max(h_try * factor)
                    } else {
                        h_try * factor
                    };
                }
            }
        }
    }
}

/// Bisects the step from `before` until the radius crossing is bracketed
/// to `EVENT_TIME_TOL` in time and `EVENT_RADIUS_TOL` in radius.
fn refine_crossing<const N: usize, S: OdeSystem<N>>(
    stepper: &mut Stepper<'_, N, S>,
    renormalize: bool,
    before: Sample<N>,
    after: Sample<N>,
    k_before: &[f64; N],
    target: f64,
) -> Result<Sample<N>, PropagationError> {
    let sys = stepper.sys;
    let f0 = sys.radius(&before.y) - target;
    let mut lo = (0.0, before.y);
    let mut hi = (after.t - before.t, after.y);
    let mut best = if (sys.radius(&after.y) - target).abs() < f0.abs() {
        after
    } else {
        before
    };
    for _ in 0..200 {
        let width = hi.0 - lo.0;
        let r_best = (sys.radius(&best.y) - target).abs();
        if width < EVENT_TIME_TOL && r_best < EVENT_RADIUS_TOL {
            break;
        }
        let mid = 0.5 * (lo.0 + hi.0);
        if mid <= lo.0 || mid >= hi.0 {
            break;
        }
        let mut ym = match stepper.step(before.t, &before.y, k_before, mid) {
            StepOutcome::Done(ym, _, _) => ym,
            StepOutcome::Failed(source) => {
                return Err(PropagationError::Derivative {
                    t: before.t + mid,
                    source,
                })
            }
        };
        if renormalize {
            sys.renormalize(&mut ym)
                .map_err(|source| PropagationError::Renormalize {
                    t: before.t + mid,
                    source,
                })?;
        }
        let fm = sys.radius(&ym) - target;
        let sample = Sample {
            t: before.t + mid,
            y: ym,
        };
        if fm.abs() <= (sys.radius(&best.y) - target).abs() {
            best = sample;
        }
        if fm == 0.0 {
            best = sample;
            break;
        }
        if fm.signum() == f0.signum() {
            lo = (mid, ym);
        } else {
            hi = (mid, ym);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Decay;

    impl OdeSystem<1> for Decay {
        fn rates(&self, _t: f64, y: &[f64; 1]) -> Result<[f64; 1], DynamicsError> {
            Ok([-y[0]])
        }
        fn radius(&self, y: &[f64; 1]) -> f64 {
            y[0]
        }
    }

    fn run(method: Method, radius: Option<f64>) -> Propagation<1> {
        let cfg = IntegratorConfig {
            method,
            renormalize: false,
            ..Default::default()
        };
        propagate(&Decay, 0.0, [1.0], &cfg, &StopConditions { t_final: 1.0, radius }).unwrap()
    }

    #[test]
    fn rk4_exponential_decay() {
        let p = run(Method::Rk4 { step: 0.01 }, None);
        assert_eq!(p.stop.kind, StopKind::TerminalTime);
        let last = p.trajectory.last();
        assert_eq!(last.t, 1.0);
        assert!((last.y[0] - (-1.0_f64).exp()).abs() < 1e-9);
        assert!((last.y[0] - 0.367879).abs() < 1e-6);
        assert_eq!(p.trajectory.samples.len(), 101);
        assert_eq!(p.trajectory.evaluations, 1 + 100 * 4);
    }

    #[test]
    fn dopri_exponential_decay() {
        let p = run(Method::adaptive(1e-12, 1e-14), None);
        assert!((p.trajectory.last().y[0] - (-1.0_f64).exp()).abs() < 1e-11);
        let t: Vec<f64> = p.trajectory.samples.iter().map(|s| s.t).collect();
        assert!(t.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn event_on_decay() {
        // y = e^-t crosses 0.5 at ln 2
        let p = run(Method::adaptive(1e-12, 1e-14), Some(0.5));
        assert_eq!(p.stop.kind, StopKind::RadiusCrossing);
        assert!((p.stop.t - 2.0_f64.ln()).abs() < 1e-6);
        assert!((p.trajectory.last().y[0] - 0.5).abs() < 1e-3);
    }

    #[test]
    fn output_grid() {
        let cfg = IntegratorConfig {
            method: Method::adaptive(1e-10, 1e-12),
            renormalize: false,
            output_interval: Some(0.25),
            ..Default::default()
        };
        let p = propagate(
            &Decay,
            0.0,
            [1.0],
            &cfg,
            &StopConditions {
                t_final: 1.0,
                radius: None,
            },
        )
        .unwrap();
        let t: Vec<f64> = p.trajectory.samples.iter().map(|s| s.t).collect();
        assert_eq!(t, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    }

    #[test]
    fn max_steps_is_an_error() {
        let cfg = IntegratorConfig {
            method: Method::Rk4 { step: 0.01 },
            max_steps: 10,
            ..Default::default()
        };
        let e = propagate(
            &Decay,
            0.0,
            [1.0],
            &cfg,
            &StopConditions {
                t_final: 1.0,
                radius: None,
            },
        );
        assert!(matches!(e, Err(PropagationError::MaxSteps { .. })));
    }

    struct Wall;

    impl OdeSystem<1> for Wall {
        fn rates(&self, _t: f64, y: &[f64; 1]) -> Result<[f64; 1], DynamicsError> {
            if y[0] >= 0.5 {
                Err(DynamicsError::RvhSingular { product: 0.0 })
            } else {
                Ok([1.0])
            }
        }
        fn radius(&self, y: &[f64; 1]) -> f64 {
            y[0]
        }
    }

    #[test]
    fn singularity_keeps_trajectory() {
        let cfg = IntegratorConfig {
            method: Method::Rk4 { step: 0.1 },
            ..Default::default()
        };
        let p = propagate(
            &Wall,
            0.0,
            [0.0],
            &cfg,
            &StopConditions {
                t_final: 2.0,
                radius: None,
            },
        )
        .unwrap();
        assert!(matches!(p.stop.kind, StopKind::SingularityGuard(_)));
        assert!(p.trajectory.samples.len() >= 4);
        assert!(p.stop.t < 0.5);
        let p = propagate(
            &Wall,
            0.0,
            [0.0],
            &IntegratorConfig::default(),
            &StopConditions {
                t_final: 2.0,
                radius: None,
            },
        )
        .unwrap();
        assert!(matches!(p.stop.kind, StopKind::SingularityGuard(_)));
        assert!(p.stop.t > 0.49 && p.stop.t < 0.5, "{}", p.stop.t);
    }
}
