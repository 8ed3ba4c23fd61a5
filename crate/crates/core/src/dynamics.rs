//! State derivatives for every representation and the bank-angle maps.
//!
//! The Euler-parameter forms evaluate no trigonometric functions apart from
//! the bank angle and the thrust direction in the force model.

use thiserror::Error;

use crate::forces::{
    apparent_force_b, net_force_b, propulsive_aero, Environment, ForceComponents, LiftAxis, PropulsiveAero,
};
use crate::frames::{AngularRates, CartesianState, RvState, RvhState, RvlState, SphericalState};
use crate::quat::{quat_rates, Dcm, QuatRate, Vec3};
use crate::trig;

/// Guard on `|eps_b3 eta_b|` for the rvh form.
pub const RVH_SINGULARITY_TOL: f64 = 1e-8;
/// Guard on `pi/2 - |gamma|` for the spherical form.
pub const SPHERICAL_GAMMA_TOL: f64 = 1e-6;
/// Guard on `cos(lat)` for the spherical form.
pub const SPHERICAL_POLAR_TOL: f64 = 1e-12;
/// Below this `sqrt(1 - C_BA(1,1)^2)` the flight is treated as vertical.
pub const VERTICAL_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DynamicsError {
    #[error("kinetic singularity: speed {v} is not positive")]
    KineticSingularity { v: f64 },
    #[error("radius {r} is not positive")]
    NonPositiveRadius { r: f64 },
    #[error("rvh vertical-flight singularity: |eps_b3 eta_b| = {product:e}")]
    RvhSingular { product: f64 },
    #[error("spherical vertical-flight singularity: gamma = {gamma}")]
    SphericalVertical { gamma: f64 },
    #[error("spherical polar singularity: latitude = {lat}")]
    SphericalPolar { lat: f64 },
    #[error("beta undefined in vertical flight (C_BA(1,1) = {c11})")]
    BetaUndefined { c11: f64 },
    #[error("lift direction ambiguous: {0}")]
    LiftAmbiguous(&'static str),
    #[error("bank command {command} is not accepted by the {form} form")]
    UnsupportedBank { command: &'static str, form: &'static str },
}

impl DynamicsError {
    /// True for errors caused by the state reaching a point where the
    /// representation breaks down, as opposed to a misconfigured call.
    pub fn is_singularity(&self) -> bool {
        !matches!(self, DynamicsError::UnsupportedBank { .. })
    }
}

/// Bank command. The angle variants carry the commanded rate so rate-based
/// gauges can follow them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BankCommand {
    /// Rotation about `b1` from `b2` to the lift direction, in the gauge of
    /// the propagated form.
    Sigma { angle: f64, rate: f64 },
    /// Rotation about `g3` from `g1` to the lift direction. Gauge free.
    Beta { angle: f64, rate: f64 },
    /// `omega_B1`, only meaningful for the rvL form.
    LiftFrameRate(f64),
}

impl BankCommand {
    fn name(&self) -> &'static str {
        match self {
            BankCommand::Sigma { .. } => "sigma",
            BankCommand::Beta { .. } => "beta",
            BankCommand::LiftFrameRate(_) => "lift-frame rate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlInput {
    pub alpha: f64,
    pub bank: BankCommand,
    /// Overrides the vehicle thrust when set.
    pub thrust: Option<f64>,
}

impl ControlInput {
    pub fn new(alpha: f64, bank: BankCommand) -> Self {
        Self {
            alpha,
            bank,
            thrust: None,
        }
    }

    /// No lift, zero bank.
    pub fn ballistic() -> Self {
        Self::new(0.0, BankCommand::Sigma { angle: 0.0, rate: 0.0 })
    }

    fn thrust(&self, env: &Environment) -> f64 {
        self.thrust.unwrap_or(env.vehicle.thrust)
    }
}

/// The two free angular-velocity components of the general form.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GaugeInputs {
    pub w_a1: f64,
    pub w_b1: f64,
}

/// Time derivative of an [`RvState`] with the angular rates and forces
/// that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RvDerivative {
    pub r_dot: f64,
    pub qa_dot: QuatRate,
    pub v_dot: f64,
    pub qb_dot: QuatRate,
    pub rates: AngularRates,
    pub forces: ForceComponents,
}

impl RvDerivative {
    pub fn to_array(&self) -> [f64; 10] {
        let a = self.qa_dot.to_array();
        let b = self.qb_dot.to_array();
        [self.r_dot, a[0], a[1], a[2], a[3], self.v_dot, b[0], b[1], b[2], b[3]]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RvhDerivative {
    pub r_dot: f64,
    pub qa_dot: QuatRate,
    pub v_dot: f64,
    pub eps_b3_dot: f64,
    pub eta_b_dot: f64,
    pub rates: AngularRates,
    pub forces: ForceComponents,
}

impl RvhDerivative {
    pub fn to_array(&self) -> [f64; 8] {
        let a = self.qa_dot.to_array();
        [
            self.r_dot,
            a[0],
            a[1],
            a[2],
            a[3],
            self.v_dot,
            self.eps_b3_dot,
            self.eta_b_dot,
        ]
    }
}

fn check_rv(r: f64, v: f64) -> Result<(), DynamicsError> {
    if !(r > 0.0) {
        return Err(DynamicsError::NonPositiveRadius { r });
    }
    if !(v > 0.0) {
        return Err(DynamicsError::KineticSingularity { v });
    }
    Ok(())
}

/// `(cos sigma, sin sigma)` of the lift direction given `beta`, from the
/// first column of `C_BA`. Needs no trigonometry beyond `beta` itself.
pub fn sigma_axis_from_beta(cos_beta: f64, sin_beta: f64, c_ba: &Dcm) -> Result<(f64, f64), DynamicsError> {
    let c21 = c_ba.get(1, 0);
    let c31 = c_ba.get(2, 0);
    let k = c21.hypot(c31);
    if !(k > VERTICAL_TOL) {
        return Err(DynamicsError::BetaUndefined { c11: c_ba.get(0, 0) });
    }
    Ok((
        (cos_beta * c21 - sin_beta * c31) / k,
        (cos_beta * c31 + sin_beta * c21) / k,
    ))
}

/// Lift axis in a `B` frame whose `b2`, `b3` are free to rotate about `b1`.
fn banked_axis(
    bank: &BankCommand,
    c_ba: &Dcm,
    pa: &PropulsiveAero,
    form: &'static str,
) -> Result<LiftAxis, DynamicsError> {
    match *bank {
        BankCommand::Sigma { angle, .. } => {
            let (sin, cos) = trig::sin_cos(angle);
            Ok(LiftAxis::Banked { cos, sin })
        }
        BankCommand::Beta { angle, .. } => {
            let (sb, cb) = trig::sin_cos(angle);
            match sigma_axis_from_beta(cb, sb, c_ba) {
                Ok((cos, sin)) => Ok(LiftAxis::Banked { cos, sin }),
                // the direction does not matter when there is no normal force
                Err(_) if pa.normal == 0.0 => Ok(LiftAxis::Banked { cos: 1.0, sin: 0.0 }),
                Err(e) => Err(e),
            }
        }
        BankCommand::LiftFrameRate(_) => Err(DynamicsError::UnsupportedBank {
            command: bank.name(),
            form,
        }),
    }
}

fn body_forces(
    env: &Environment,
    r: f64,
    v: f64,
    c_ba: &Dcm,
    c_ae: &Dcm,
    pa: &PropulsiveAero,
    lift: LiftAxis,
) -> ForceComponents {
    let m = env.vehicle.mass;
    let net = net_force_b(r, &c_ba.col(0), pa, lift, m, env.body.mu);
    let apparent = apparent_force_b(&net, r, v, c_ba, c_ae, env.body.spin_rate, m);
    ForceComponents { net, apparent }
}

/// Ten-parameter derivatives with externally supplied `omega_A1`,
/// `omega_B1` and forces.
pub fn general_derivatives(
    s: &RvState,
    gauge: GaugeInputs,
    forces: &ForceComponents,
    env: &Environment,
) -> Result<RvDerivative, DynamicsError> {
    let (r, v) = (s.r, s.v);
    check_rv(r, v)?;
    let m = env.vehicle.mass;
    let b = &s.qb;
    let c21 = 2.0 * (b.eps1 * b.eps2 - b.eps3 * b.eta);
    let c31 = 2.0 * (b.eps1 * b.eps3 + b.eps2 * b.eta);
    let vr = v / r;

    let r_dot = v * (1.0 - 2.0 * (b.eps2 * b.eps2 + b.eps3 * b.eps3));
    let w_a = Vec3::new(
        gauge.w_a1,
        2.0 * vr * (b.eta * b.eps2 - b.eps1 * b.eps3),
        2.0 * vr * (b.eta * b.eps3 + b.eps1 * b.eps2),
    );
    let ft = &forces.apparent;
    let mv = m * v;
    let w_b = Vec3::new(
        gauge.w_b1,
        -ft.z / mv - gauge.w_a1 * c21 - vr * c31,
        ft.y / mv - gauge.w_a1 * c31 + vr * c21,
    );
    Ok(RvDerivative {
        r_dot,
        qa_dot: quat_rates(&s.qa, &w_a),
        v_dot: ft.x / m,
        qb_dot: quat_rates(&s.qb, &w_b),
        rates: AngularRates { w_a, w_b },
        forces: *forces,
    })
}

/// Forces for the rv gauge; bank given as `sigma` or `beta`.
pub fn rv_forces(s: &RvState, u: &ControlInput, env: &Environment) -> Result<ForceComponents, DynamicsError> {
    check_rv(s.r, s.v)?;
    let c_ae = s.c_ae();
    let c_ba = s.c_ba();
    let pa = propulsive_aero(env, s.r, s.v, u.alpha, u.thrust(env));
    let lift = banked_axis(&u.bank, &c_ba, &pa, "rv")?;
    Ok(body_forces(env, s.r, s.v, &c_ba, &c_ae, &pa, lift))
}

/// rv form: `omega_A1 = omega_B1 = 0`.
pub fn rv_derivatives(s: &RvState, u: &ControlInput, env: &Environment) -> Result<RvDerivative, DynamicsError> {
    let forces = rv_forces(s, u, env)?;
    general_derivatives(s, GaugeInputs::default(), &forces, env)
}

/// rvL form: `omega_A1 = 0`, lift along `b2`, `omega_B1` commanded. A
/// `sigma` command supplies its rate as `omega_B1`; a `beta` command is
/// converted to the `omega_B1` that produces the commanded `beta` rate.
pub fn rvl_derivatives(s: &RvlState, u: &ControlInput, env: &Environment) -> Result<RvDerivative, DynamicsError> {
    let s = &s.0;
    check_rv(s.r, s.v)?;
    let c_ae = s.c_ae();
    let c_ba = s.c_ba();
    let pa = propulsive_aero(env, s.r, s.v, u.alpha, u.thrust(env));
    let forces = body_forces(env, s.r, s.v, &c_ba, &c_ae, &pa, LiftAxis::B2);
    let mut d = general_derivatives(s, GaugeInputs::default(), &forces, env)?;
    let w_b1 = match u.bank {
        BankCommand::LiftFrameRate(w) => w,
        BankCommand::Sigma { rate, .. } => rate,
        BankCommand::Beta { rate, .. } => {
            // omega_B2, omega_B3 do not depend on omega_B1 when omega_A1 = 0
            let c11 = c_ba.get(0, 0);
            let k2 = 1.0 - c11 * c11;
            if !(k2 > VERTICAL_TOL * VERTICAL_TOL) {
                return Err(DynamicsError::BetaUndefined { c11 });
            }
            let w = d.rates.w_b;
            rate + c11 / k2 * (w.y * c_ba.get(1, 0) + w.z * c_ba.get(2, 0))
        }
    };
    d.rates.w_b.x = w_b1;
    d.qb_dot = quat_rates(&s.qb, &d.rates.w_b);
    Ok(d)
}

/// rvh form: `a3 = b3` along the relative angular momentum. A `beta`
/// command maps to `sigma = beta + pi` without trigonometry.
pub fn rvh_derivatives(s: &RvhState, u: &ControlInput, env: &Environment) -> Result<RvhDerivative, DynamicsError> {
    let (r, v) = (s.r, s.v);
    check_rv(r, v)?;
    let (e3, eta) = (s.eps_b3, s.eta_b);
    let product = e3 * eta;
    if !(product.abs() > RVH_SINGULARITY_TOL) {
        return Err(DynamicsError::RvhSingular { product });
    }
    let c_ae = s.c_ae();
    let c_ba = s.c_ba();
    let pa = propulsive_aero(env, r, v, u.alpha, u.thrust(env));
    let lift = match u.bank {
        BankCommand::Sigma { angle, .. } => {
            let (sin, cos) = trig::sin_cos(angle);
            LiftAxis::Banked { cos, sin }
        }
        BankCommand::Beta { angle, .. } => {
            let (sin, cos) = trig::sin_cos(angle);
            LiftAxis::Banked { cos: -cos, sin: -sin }
        }
        BankCommand::LiftFrameRate(_) => {
            return Err(DynamicsError::UnsupportedBank {
                command: u.bank.name(),
                form: "rvh",
            })
        }
    };
    let forces = body_forces(env, r, v, &c_ba, &c_ae, &pa, lift);
    let m = env.vehicle.mass;
    let ft = &forces.apparent;
    let mv = m * v;
    let turn = 2.0 * v / r * eta * e3;
    let w_a = Vec3::new(ft.z / (2.0 * mv * product), 0.0, turn);
    let w_b3 = ft.y / mv - turn;
    Ok(RvhDerivative {
        r_dot: v * (1.0 - 2.0 * e3 * e3),
        qa_dot: quat_rates(&s.qa, &w_a),
        v_dot: ft.x / m,
        eps_b3_dot: 0.5 * w_b3 * eta,
        eta_b_dot: -0.5 * w_b3 * e3,
        rates: AngularRates {
            w_a,
            w_b: Vec3::new(0.0, 0.0, w_b3),
        },
        forces,
    })
}

/// Unit lift direction in `E` for a `beta` bank: `cos(beta) g1 + sin(beta) g2`.
fn lift_direction_e(position: &Vec3, v_hat: &Vec3, cos_beta: f64, sin_beta: f64) -> Option<Vec3> {
    let h = position.cross(v_hat);
    let hn = h.norm();
    if !(hn > VERTICAL_TOL * position.norm()) {
        return None;
    }
    let g2 = -h / hn;
    let g1 = g2.cross(v_hat);
    Some(cos_beta * g1 + sin_beta * g2)
}

/// Newton's law assembled in `E` coordinates. Returns the rates as a
/// [`CartesianState`]: `position` holds the velocity and `velocity` the
/// acceleration.
pub fn cartesian_derivatives(
    c: &CartesianState,
    u: &ControlInput,
    env: &Environment,
) -> Result<CartesianState, DynamicsError> {
    let r = c.radius();
    if !(r > 0.0) {
        return Err(DynamicsError::NonPositiveRadius { r });
    }
    let v = c.speed();
    let m = env.vehicle.mass;
    let pa = propulsive_aero(env, r, v, u.alpha, u.thrust(env));
    let mut force = -(m * env.body.mu / (r * r * r)) * c.position;
    if pa.axial != 0.0 || pa.normal != 0.0 {
        if !(v > 0.0) {
            return Err(DynamicsError::KineticSingularity { v });
        }
        let v_hat = c.velocity / v;
        force += pa.axial * v_hat;
        if pa.normal != 0.0 {
            let (sb, cb) = match u.bank {
                BankCommand::Beta { angle, .. } => trig::sin_cos(angle),
                other => {
                    return Err(DynamicsError::UnsupportedBank {
                        command: other.name(),
                        form: "cartesian",
                    })
                }
            };
            let lift = lift_direction_e(&c.position, &v_hat, cb, sb).ok_or(DynamicsError::LiftAmbiguous(
                "vertical flight with nonzero normal force",
            ))?;
            force += pa.normal * lift;
        }
    }
    let w = env.body.spin_vector();
    let accel = force / m - 2.0 * w.cross(&c.velocity) - w.cross(&w.cross(&c.position));
    Ok(CartesianState {
        position: c.velocity,
        velocity: accel,
    })
}

/// Rotating-planet spherical equations with the azimuth measured from
/// north toward east and a `beta` bank. Returns the rates as a
/// [`SphericalState`].
pub fn spherical_derivatives(
    s: &SphericalState,
    u: &ControlInput,
    env: &Environment,
) -> Result<SphericalState, DynamicsError> {
    let (r, v, gamma) = (s.r, s.v, s.gamma);
    if !(r > 0.0) {
        return Err(DynamicsError::NonPositiveRadius { r });
    }
    if !(v > 0.0) {
        return Err(DynamicsError::KineticSingularity { v });
    }
    if !(gamma.abs() < std::f64::consts::FRAC_PI_2 - SPHERICAL_GAMMA_TOL) {
        return Err(DynamicsError::SphericalVertical { gamma });
    }
    let m = env.vehicle.mass;
    let w = env.body.spin_rate;
    let g = env.body.mu / (r * r);
    let pa = propulsive_aero(env, r, v, u.alpha, u.thrust(env));
    let (sb, cb) = match u.bank {
        BankCommand::Beta { angle, .. } => trig::sin_cos(angle),
        _ if pa.normal == 0.0 => (0.0, 1.0),
        other => {
            return Err(DynamicsError::UnsupportedBank {
                command: other.name(),
                form: "spherical",
            })
        }
    };
    let (sg, cg) = trig::sin_cos(gamma);
    let (sp, cp) = trig::sin_cos(s.psi);
    let (sl, cl) = trig::sin_cos(s.lat);
    if !(cl.abs() > SPHERICAL_POLAR_TOL) {
        return Err(DynamicsError::SphericalPolar { lat: s.lat });
    }
    let tl = sl / cl;
    let tg = sg / cg;
    let rw2 = r * w * w;

    let r_dot = v * sg;
    let lon_dot = v * cg * sp / (r * cl);
    let lat_dot = v * cg * cp / r;
    let v_dot = pa.axial / m - g * sg + rw2 * cl * (sg * cl - cg * sl * cp);
    let gamma_dot =
        (pa.normal * cb / m - (g - v * v / r) * cg + 2.0 * w * v * cl * sp + rw2 * cl * (cg * cl + sg * cp * sl)) / v;
    let psi_dot = pa.normal * sb / (m * v * cg) + v / r * cg * sp * tl - 2.0 * w * (tg * cp * cl - sl)
        + rw2 / (v * cg) * sp * sl * cl;
    Ok(SphericalState {
        r: r_dot,
        lon: lon_dot,
        lat: lat_dot,
        v: v_dot,
        gamma: gamma_dot,
        psi: psi_dot,
    })
}

/// `beta` from `sigma` and the first column of `C_BA`.
pub fn beta_from_sigma(sigma: f64, c_ba: &Dcm) -> Result<f64, DynamicsError> {
    let c21 = c_ba.get(1, 0);
    let c31 = c_ba.get(2, 0);
    if !(c21.hypot(c31) > VERTICAL_TOL) {
        return Err(DynamicsError::BetaUndefined { c11: c_ba.get(0, 0) });
    }
    let (s, c) = trig::sin_cos(sigma);
    Ok(trig::atan2(s * c21 - c * c31, c * c21 + s * c31))
}

/// `beta` rate from the bank rate, `omega_B` and `C_BA`.
pub fn beta_rate(sigma_dot: f64, w_b: &Vec3, c_ba: &Dcm) -> Result<f64, DynamicsError> {
    let c11 = c_ba.get(0, 0);
    let k2 = c_ba.get(1, 0).powi(2) + c_ba.get(2, 0).powi(2);
    if !(k2.sqrt() > VERTICAL_TOL) {
        return Err(DynamicsError::BetaUndefined { c11 });
    }
    Ok(sigma_dot + w_b.x - c11 / k2 * (w_b.y * c_ba.get(1, 0) + w_b.z * c_ba.get(2, 0)))
}
