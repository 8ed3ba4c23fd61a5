//! Prescribed, piecewise-linear control histories.

use crate::dynamics::{BankCommand, ControlInput};

/// Piecewise-linear function of time through `(t, value)` knots, held
/// constant outside the knot range.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    knots: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("invalid profile: {0}")]
pub struct ProfileError(pub String);

impl Profile {
    /// Knot times must be finite and strictly increasing.
    pub fn new(knots: Vec<(f64, f64)>) -> Result<Self, ProfileError> {
        if knots.is_empty() {
            return Err(ProfileError("no knots".into()));
        }
        if knots.iter().any(|(t, v)| !t.is_finite() || !v.is_finite()) {
            return Err(ProfileError("non-finite knot".into()));
        }
        if knots.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(ProfileError("knot times must be strictly increasing".into()));
        }
        Ok(Self { knots })
    }

    pub fn constant(value: f64) -> Self {
        Self {
            knots: vec![(0.0, value)],
        }
    }

    pub fn knots(&self) -> &[(f64, f64)] {
        &self.knots
    }

    /// Index of the segment `[k[i], k[i+1])` containing `t`.
    fn segment(&self, t: f64) -> Option<usize> {
        let k = &self.knots;
        if k.len() < 2 || t < k[0].0 || t >= k[k.len() - 1].0 {
            return None;
        }
        Some(k.partition_point(|&(tk, _)| tk <= t) - 1)
    }

    pub fn value(&self, t: f64) -> f64 {
        let k = &self.knots;
        match self.segment(t) {
            Some(i) => {
                let (t0, v0) = k[i];
                let (t1, v1) = k[i + 1];
                v0 + (v1 - v0) * (t - t0) / (t1 - t0)
            }
            None if t < k[0].0 => k[0].1,
            None => k[k.len() - 1].1,
        }
    }

    /// Slope of the segment starting at or before `t`; zero outside.
    pub fn rate(&self, t: f64) -> f64 {
        match self.segment(t) {
            Some(i) => {
                let (t0, v0) = self.knots[i];
                let (t1, v1) = self.knots[i + 1];
                (v1 - v0) / (t1 - t0)
            }
            None => 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum BankProfile {
    Sigma(Profile),
    Beta(Profile),
    LiftFrameRate(Profile),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ControlProfile {
    pub alpha: Profile,
    pub bank: BankProfile,
    pub thrust: Option<Profile>,
}

impl ControlProfile {
    pub fn ballistic() -> Self {
        Self {
            alpha: Profile::constant(0.0),
            bank: BankProfile::Sigma(Profile::constant(0.0)),
            thrust: None,
        }
    }

    pub fn at(&self, t: f64) -> ControlInput {
        let bank = match &self.bank {
            BankProfile::Sigma(p) => BankCommand::Sigma {
                angle: p.value(t),
                rate: p.rate(t),
            },
            BankProfile::Beta(p) => BankCommand::Beta {
                angle: p.value(t),
                rate: p.rate(t),
            },
            BankProfile::LiftFrameRate(p) => BankCommand::LiftFrameRate(p.value(t)),
        };
        ControlInput {
            alpha: self.alpha.value(t),
            bank,
            thrust: self.thrust.as_ref().map(|p| p.value(t)),
        }
    }
}

/// Anything that yields a control input at time `t`.
pub trait Controls {
    fn at(&self, t: f64) -> ControlInput;
}

impl Controls for ControlProfile {
    fn at(&self, t: f64) -> ControlInput {
        ControlProfile::at(self, t)
    }
}

impl Controls for ControlInput {
    fn at(&self, _t: f64) -> ControlInput {
        *self
    }
}

impl<F: Fn(f64) -> ControlInput> Controls for F {
    fn at(&self, t: f64) -> ControlInput {
        self(t)
    }
}
