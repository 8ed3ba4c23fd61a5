//! Integrable systems for each representation, with per-sample
//! diagnostics.

use crate::control::Controls;
use crate::dynamics::{
    beta_from_sigma, cartesian_derivatives, rv_derivatives, rvh_derivatives, rvl_derivatives, spherical_derivatives,
    BankCommand, DynamicsError,
};
use crate::forces::{Environment, ForceComponents};
use crate::frames::{
    rv_to_cartesian, rvh_to_cartesian, spherical_to_cartesian, AngularRates, CartesianState, RvState, RvhState,
    RvlState, SphericalState,
};
use crate::propagation::OdeSystem;
use crate::quat::{self, QuatError};

const LENGTH_SCALE: f64 = 1e6;
const SPEED_SCALE: f64 = 1e3;

/// Quantities derived from one sample.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Diagnostics {
    pub rates: Option<AngularRates>,
    pub forces: Option<ForceComponents>,
    pub alpha: f64,
    pub sigma: Option<f64>,
    pub beta: Option<f64>,
    /// `|r x v|` with `v` relative to `E` (m^2/s).
    pub h: f64,
    /// `v^2/2 - mu/r` with `v` relative to `E` (J/kg).
    pub energy: f64,
    pub norm_qa: Option<f64>,
    pub norm_qb: Option<f64>,
}

/// An integrable representation that can be mapped to the Cartesian state.
pub trait FlightModel<const N: usize>: OdeSystem<N> {
    fn name(&self) -> &'static str;
    fn cartesian(&self, y: &[f64; N]) -> CartesianState;
    fn diagnostics(&self, t: f64, y: &[f64; N]) -> Diagnostics;
}

fn renorm_block(y: &mut [f64], at: usize) -> Result<(), QuatError> {
    let q = quat::renormalize([y[at], y[at + 1], y[at + 2], y[at + 3]])?;
    y[at..at + 4].copy_from_slice(&q.to_array());
    Ok(())
}

fn norm4(y: &[f64]) -> f64 {
    (y[0] * y[0] + y[1] * y[1] + y[2] * y[2] + y[3] * y[3]).sqrt()
}

fn base_diagnostics(env: &Environment, c: &CartesianState, alpha: f64) -> Diagnostics {
    Diagnostics {
        alpha,
        h: c.angular_momentum(),
        energy: c.specific_energy(env.body.mu),
        ..Default::default()
    }
}

fn wrap(angle: f64) -> f64 {
    let a = (angle + std::f64::consts::PI).rem_euclid(2.0 * std::f64::consts::PI) - std::f64::consts::PI;
    if a == -std::f64::consts::PI {
        std::f64::consts::PI
    } else {
        a
    }
}

pub struct RvModel<C> {
    pub env: Environment,
    pub controls: C,
}

impl<C: Controls> OdeSystem<10> for RvModel<C> {
    fn rates(&self, t: f64, y: &[f64; 10]) -> Result<[f64; 10], DynamicsError> {
        Ok(rv_derivatives(&RvState::from_array(y), &self.controls.at(t), &self.env)?.to_array())
    }
    fn renormalize(&self, y: &mut [f64; 10]) -> Result<(), QuatError> {
        renorm_block(y, 1)?;
        renorm_block(y, 6)
    }
    fn radius(&self, y: &[f64; 10]) -> f64 {
        y[0]
    }
    fn abs_scale(&self, i: usize) -> f64 {
        match i {
            0 => LENGTH_SCALE,
            5 => SPEED_SCALE,
            _ => 1.0,
        }
    }
}

impl<C: Controls> FlightModel<10> for RvModel<C> {
    fn name(&self) -> &'static str {
        "rv"
    }
    fn cartesian(&self, y: &[f64; 10]) -> CartesianState {
        rv_to_cartesian(&RvState::from_array(y))
    }
    fn diagnostics(&self, t: f64, y: &[f64; 10]) -> Diagnostics {
        let s = RvState::from_array(y);
        let u = self.controls.at(t);
        let mut d = base_diagnostics(&self.env, &self.cartesian(y), u.alpha);
        d.norm_qa = Some(norm4(&y[1..5]));
        d.norm_qb = Some(norm4(&y[6..10]));
        if let Ok(der) = rv_derivatives(&s, &u, &self.env) {
            d.rates = Some(der.rates);
            d.forces = Some(der.forces);
        }
        let c_ba = s.c_ba();
        match u.bank {
            BankCommand::Sigma { angle, .. } => {
                d.sigma = Some(angle);
                d.beta = beta_from_sigma(angle, &c_ba).ok();
            }
            BankCommand::Beta { angle, .. } => {
                d.beta = Some(angle);
                d.sigma = crate::dynamics::sigma_axis_from_beta(angle.cos(), angle.sin(), &c_ba)
                    .ok()
                    .map(|(c, s)| s.atan2(c));
            }
            BankCommand::LiftFrameRate(_) => {}
        }
        d
    }
}

pub struct RvlModel<C> {
    pub env: Environment,
    pub controls: C,
}

impl<C: Controls> OdeSystem<10> for RvlModel<C> {
    fn rates(&self, t: f64, y: &[f64; 10]) -> Result<[f64; 10], DynamicsError> {
        Ok(rvl_derivatives(&RvlState(RvState::from_array(y)), &self.controls.at(t), &self.env)?.to_array())
    }
    fn renormalize(&self, y: &mut [f64; 10]) -> Result<(), QuatError> {
        renorm_block(y, 1)?;
        renorm_block(y, 6)
    }
    fn radius(&self, y: &[f64; 10]) -> f64 {
        y[0]
    }
    fn abs_scale(&self, i: usize) -> f64 {
        match i {
            0 => LENGTH_SCALE,
            5 => SPEED_SCALE,
            _ => 1.0,
        }
    }
}

impl<C: Controls> FlightModel<10> for RvlModel<C> {
    fn name(&self) -> &'static str {
        "rvl"
    }
    fn cartesian(&self, y: &[f64; 10]) -> CartesianState {
        rv_to_cartesian(&RvState::from_array(y))
    }
    fn diagnostics(&self, t: f64, y: &[f64; 10]) -> Diagnostics {
        let s = RvState::from_array(y);
        let u = self.controls.at(t);
        let mut d = base_diagnostics(&self.env, &self.cartesian(y), u.alpha);
        d.norm_qa = Some(norm4(&y[1..5]));
        d.norm_qb = Some(norm4(&y[6..10]));
        if let Ok(der) = rvl_derivatives(&RvlState(s), &u, &self.env) {
            d.rates = Some(der.rates);
            d.forces = Some(der.forces);
        }
        // lift is along b2, so sigma = 0 in this gauge
        d.sigma = Some(0.0);
        d.beta = beta_from_sigma(0.0, &s.c_ba()).ok();
        d
    }
}

pub struct RvhModel<C> {
    pub env: Environment,
    pub controls: C,
}

impl<C: Controls> OdeSystem<8> for RvhModel<C> {
    fn rates(&self, t: f64, y: &[f64; 8]) -> Result<[f64; 8], DynamicsError> {
        Ok(rvh_derivatives(&RvhState::from_array(y), &self.controls.at(t), &self.env)?.to_array())
    }
    fn renormalize(&self, y: &mut [f64; 8]) -> Result<(), QuatError> {
        renorm_block(y, 1)?;
        let n = y[6].hypot(y[7]);
        if !(n > 0.0 && n.is_finite()) {
            return Err(QuatError::ZeroNorm);
        }
        y[6] /= n;
        y[7] /= n;
        Ok(())
    }
    fn radius(&self, y: &[f64; 8]) -> f64 {
        y[0]
    }
    fn abs_scale(&self, i: usize) -> f64 {
        match i {
            0 => LENGTH_SCALE,
            5 => SPEED_SCALE,
            _ => 1.0,
        }
    }
}

impl<C: Controls> FlightModel<8> for RvhModel<C> {
    fn name(&self) -> &'static str {
        "rvh"
    }
    fn cartesian(&self, y: &[f64; 8]) -> CartesianState {
        rvh_to_cartesian(&RvhState::from_array(y))
    }
    fn diagnostics(&self, t: f64, y: &[f64; 8]) -> Diagnostics {
        let s = RvhState::from_array(y);
        let u = self.controls.at(t);
        let mut d = base_diagnostics(&self.env, &self.cartesian(y), u.alpha);
        d.norm_qa = Some(norm4(&y[1..5]));
        d.norm_qb = Some(y[6].hypot(y[7]));
        if let Ok(der) = rvh_derivatives(&s, &u, &self.env) {
            d.rates = Some(der.rates);
            d.forces = Some(der.forces);
        }
        // b2 = -g1 and b3 = -g2 in this gauge
        match u.bank {
            BankCommand::Sigma { angle, .. } => {
                d.sigma = Some(angle);
                d.beta = Some(wrap(angle + std::f64::consts::PI));
            }
            BankCommand::Beta { angle, .. } => {
                d.beta = Some(angle);
                d.sigma = Some(wrap(angle - std::f64::consts::PI));
            }
            BankCommand::LiftFrameRate(_) => {}
        }
        d
    }
}

pub struct CartesianModel<C> {
    pub env: Environment,
    pub controls: C,
}

impl<C: Controls> OdeSystem<6> for CartesianModel<C> {
    fn rates(&self, t: f64, y: &[f64; 6]) -> Result<[f64; 6], DynamicsError> {
        Ok(cartesian_derivatives(&CartesianState::from_array(y), &self.controls.at(t), &self.env)?.to_array())
    }
    fn radius(&self, y: &[f64; 6]) -> f64 {
        CartesianState::from_array(y).radius()
    }
    fn abs_scale(&self, i: usize) -> f64 {
        if i < 3 {
            LENGTH_SCALE
        } else {
            SPEED_SCALE
        }
    }
}

impl<C: Controls> FlightModel<6> for CartesianModel<C> {
    fn name(&self) -> &'static str {
        "cartesian"
    }
    fn cartesian(&self, y: &[f64; 6]) -> CartesianState {
        CartesianState::from_array(y)
    }
    fn diagnostics(&self, t: f64, y: &[f64; 6]) -> Diagnostics {
        let u = self.controls.at(t);
        let mut d = base_diagnostics(&self.env, &self.cartesian(y), u.alpha);
        if let BankCommand::Beta { angle, .. } = u.bank {
            d.beta = Some(angle);
        }
        d
    }
}

pub struct SphericalModel<C> {
    pub env: Environment,
    pub controls: C,
}

impl<C: Controls> OdeSystem<6> for SphericalModel<C> {
    fn rates(&self, t: f64, y: &[f64; 6]) -> Result<[f64; 6], DynamicsError> {
        Ok(spherical_derivatives(&SphericalState::from_array(y), &self.controls.at(t), &self.env)?.to_array())
    }
    fn radius(&self, y: &[f64; 6]) -> f64 {
        y[0]
    }
    fn abs_scale(&self, i: usize) -> f64 {
        match i {
            0 => LENGTH_SCALE,
            3 => SPEED_SCALE,
            _ => 1.0,
        }
    }
}

impl<C: Controls> FlightModel<6> for SphericalModel<C> {
    fn name(&self) -> &'static str {
        "spherical"
    }
    fn cartesian(&self, y: &[f64; 6]) -> CartesianState {
        spherical_to_cartesian(&SphericalState::from_array(y))
    }
    fn diagnostics(&self, t: f64, y: &[f64; 6]) -> Diagnostics {
        let u = self.controls.at(t);
        let mut d = base_diagnostics(&self.env, &self.cartesian(y), u.alpha);
        if let BankCommand::Beta { angle, .. } = u.bank {
            d.beta = Some(angle);
        }
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::ControlInput;

    #[test]
    fn wrap_range() {
        assert_eq!(wrap(0.5), 0.5);
        assert!((wrap(4.0) - (4.0 - 2.0 * std::f64::consts::PI)).abs() < 1e-15);
        assert_eq!(wrap(-std::f64::consts::PI), std::f64::consts::PI);
    }

    #[test]
    fn renormalization_restores_unit_norm() {
        let m = RvModel {
            env: Environment::earth_default(),
            controls: ControlInput::ballistic(),
        };
        let mut y = [7e6, 0.0, 0.0, 0.0, 1.0 + 1e-9, 7e3, 0.6, 0.0, 0.0, 0.8 * (1.0 + 1e-9)];
        m.renormalize(&mut y).unwrap();
        assert_eq!(y[0], 7e6);
        assert_eq!(y[5], 7e3);
        assert_eq!(&y[1..5], &[0.0, 0.0, 0.0, 1.0]);
        assert!((norm4(&y[6..10]) - 1.0).abs() < 1e-15);
        assert!((y[6] / y[9] - 0.6 / (0.8 * (1.0 + 1e-9))).abs() < 1e-15);

        let mut unit = [7e6, 0.0, 0.0, 0.0, 1.0, 7e3, 0.0, 0.0, 0.0, 1.0];
        let before = unit;
        m.renormalize(&mut unit).unwrap();
        assert_eq!(unit, before);

        let mut zero = [7e6, 0.0, 0.0, 0.0, 0.0, 7e3, 0.0, 0.0, 0.0, 1.0];
        assert!(m.renormalize(&mut zero).is_err());
    }
}
