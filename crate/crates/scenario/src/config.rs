//! Scenario files: TOML with one section per model ingredient. All values
//! are SI; angles are radians.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use eulerflight::control::{BankProfile, ControlProfile, Profile};
use eulerflight::forces::{AeroModel, Atmosphere, CentralBody, Environment, Vehicle};
use eulerflight::frames::{CartesianState, RvState, RvhState, SphericalState};
use eulerflight::propagation::{IntegratorConfig, Method, StopConditions};
use eulerflight::quat::UnitQuaternion;
use eulerflight::Vec3;
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("parse error: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("{field}: {message}")]
    Invalid { field: String, message: String },
}

fn invalid(field: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        field: field.to_string(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Deserialize, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Param {
    Rv,
    Rvl,
    Rvh,
    Spherical,
    Cartesian,
}

impl Param {
    pub const ALL: [Param; 5] = [Param::Rv, Param::Rvl, Param::Rvh, Param::Spherical, Param::Cartesian];

    pub fn as_str(&self) -> &'static str {
        match self {
            Param::Rv => "rv",
            Param::Rvl => "rvl",
            Param::Rvh => "rvh",
            Param::Spherical => "spherical",
            Param::Cartesian => "cartesian",
        }
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Param {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Param::ALL
            .into_iter()
            .find(|p| p.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown parameterization '{s}'"))
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBody {
    mu: Option<f64>,
    radius: Option<f64>,
    spin_rate: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAtmosphere {
    rho0: Option<f64>,
    scale_height: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAero {
    ref_area: f64,
    cl_alpha: f64,
    cd0: f64,
    k_induced: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawVehicle {
    mass: f64,
    #[serde(default)]
    thrust: f64,
    #[serde(default)]
    thrust_offset: f64,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum RawInitial {
    Rv {
        r: Option<f64>,
        altitude: Option<f64>,
        v: f64,
        qa: [f64; 4],
        qb: [f64; 4],
    },
    Rvh {
        r: Option<f64>,
        altitude: Option<f64>,
        v: f64,
        qa: [f64; 4],
        eps_b3: f64,
        eta_b: f64,
    },
    Cartesian {
        position: [f64; 3],
        velocity: [f64; 3],
    },
    Spherical {
        r: Option<f64>,
        altitude: Option<f64>,
        lon: f64,
        lat: f64,
        v: f64,
        gamma: f64,
        psi: f64,
    },
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "snake_case")]
enum BankKind {
    Sigma,
    Beta,
    LiftFrameRate,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBank {
    kind: BankKind,
    knots: Vec<[f64; 2]>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawControls {
    alpha: Vec<[f64; 2]>,
    bank: RawBank,
    thrust: Option<Vec<[f64; 2]>>,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "lowercase")]
enum MethodKind {
    Dopri45,
    Rk4,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawIntegrator {
    method: Option<MethodKind>,
    rel_tol: Option<f64>,
    abs_tol: Option<f64>,
    step: Option<f64>,
    max_step: Option<f64>,
    renormalize: Option<bool>,
    max_steps: Option<usize>,
    output_interval: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStop {
    t_final: f64,
    radius: Option<f64>,
    altitude: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    dir: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    name: String,
    #[serde(default)]
    description: String,
    parameterizations: Vec<Param>,
    #[serde(default)]
    expect_singularity: Vec<Param>,
    body: Option<RawBody>,
    atmosphere: Option<RawAtmosphere>,
    aero: RawAero,
    vehicle: RawVehicle,
    initial: RawInitial,
    controls: RawControls,
    integrator: Option<RawIntegrator>,
    stop: RawStop,
    #[serde(default)]
    output: RawOutput,
}

/// Initial condition in the form the file gave it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialState {
    Rv(RvState),
    Rvh(RvhState),
    Cartesian(CartesianState),
    Spherical(SphericalState),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub name: String,
    pub description: String,
    pub parameterizations: Vec<Param>,
    pub expect_singularity: Vec<Param>,
    pub env: Environment,
    pub initial: InitialState,
    pub controls: ControlProfile,
    pub integrator: IntegratorConfig,
    pub stop: StopConditions,
    pub output_dir: Option<String>,
}

/// Default sample spacing when the file gives none.
pub const DEFAULT_OUTPUT_INTERVAL: f64 = 1.0;

fn positive(field: &str, x: f64) -> Result<f64, ConfigError> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(invalid(field, format!("must be positive and finite, got {x}")))
    }
}

fn non_negative(field: &str, x: f64) -> Result<f64, ConfigError> {
    if x >= 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(invalid(field, format!("must be non-negative and finite, got {x}")))
    }
}

fn finite(field: &str, x: f64) -> Result<f64, ConfigError> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(invalid(field, format!("must be finite, got {x}")))
    }
}

fn quaternion(field: &str, q: [f64; 4]) -> Result<UnitQuaternion, ConfigError> {
    UnitQuaternion::new(q[0], q[1], q[2], q[3]).map_err(|e| invalid(field, e.to_string()))
}

fn radius_of(field: &str, r: Option<f64>, altitude: Option<f64>, body: &CentralBody) -> Result<f64, ConfigError> {
    match (r, altitude) {
        (Some(r), None) => positive(&format!("{field}.r"), r),
        (None, Some(h)) => positive(
            &format!("{field}.altitude"),
            body.radius + finite(&format!("{field}.altitude"), h)?,
        ),
        _ => Err(invalid(field, "give exactly one of r or altitude")),
    }
}

fn profile(field: &str, knots: &[[f64; 2]]) -> Result<Profile, ConfigError> {
    Profile::new(knots.iter().map(|k| (k[0], k[1])).collect()).map_err(|e| invalid(field, e.to_string()))
}

impl ScenarioConfig {
    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_toml(&text)
    }

    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let raw: RawScenario = toml::from_str(text)?;
        Self::from_raw(raw)
    }

    fn from_raw(raw: RawScenario) -> Result<Self, ConfigError> {
        if raw.name.trim().is_empty() {
            return Err(invalid("name", "must not be empty"));
        }
        if raw.parameterizations.is_empty() {
            return Err(invalid("parameterizations", "select at least one"));
        }
        let mut body = CentralBody::EARTH;
        if let Some(b) = raw.body {
            if let Some(mu) = b.mu {
                body.mu = positive("body.mu", mu)?;
            }
            if let Some(r) = b.radius {
                body.radius = positive("body.radius", r)?;
            }
            if let Some(w) = b.spin_rate {
                body.spin_rate = non_negative("body.spin_rate", w)?;
            }
        }
        let mut atmosphere = Atmosphere::default();
        if let Some(a) = raw.atmosphere {
            if let Some(rho0) = a.rho0 {
                atmosphere.rho0 = non_negative("atmosphere.rho0", rho0)?;
            }
            if let Some(h) = a.scale_height {
                atmosphere.scale_height = positive("atmosphere.scale_height", h)?;
            }
        }
        let aero = AeroModel {
            ref_area: positive("aero.ref_area", raw.aero.ref_area)?,
            cl_alpha: finite("aero.cl_alpha", raw.aero.cl_alpha)?,
            cd0: non_negative("aero.cd0", raw.aero.cd0)?,
            k_induced: non_negative("aero.k_induced", raw.aero.k_induced)?,
        };
        let vehicle = Vehicle {
            mass: positive("vehicle.mass", raw.vehicle.mass)?,
            thrust: non_negative("vehicle.thrust", raw.vehicle.thrust)?,
            thrust_offset: finite("vehicle.thrust_offset", raw.vehicle.thrust_offset)?,
        };
        let env = Environment {
            body,
            atmosphere,
            aero,
            vehicle,
        };

        let initial = match raw.initial {
            RawInitial::Rv { r, altitude, v, qa, qb } => {
                let r = radius_of("initial", r, altitude, &body)?;
                let s = RvState::new(
                    r,
                    quaternion("initial.qa", qa)?,
                    positive("initial.v", v)?,
                    quaternion("initial.qb", qb)?,
                )
                .map_err(|e| invalid("initial", e.to_string()))?;
                InitialState::Rv(s)
            }
            RawInitial::Rvh {
                r,
                altitude,
                v,
                qa,
                eps_b3,
                eta_b,
            } => {
                let r = radius_of("initial", r, altitude, &body)?;
                let s = RvhState::new(
                    r,
                    quaternion("initial.qa", qa)?,
                    positive("initial.v", v)?,
                    eps_b3,
                    eta_b,
                )
                .map_err(|e| invalid("initial", e.to_string()))?;
                InitialState::Rvh(s)
            }
            RawInitial::Cartesian { position, velocity } => {
                let c = CartesianState::new(Vec3::from(position), Vec3::from(velocity));
                if c.radius() <= 0.0
                    || c.radius().is_nan()
                    || !c.position.iter().chain(c.velocity.iter()).all(|x| x.is_finite())
                {
                    return Err(invalid("initial.position", "need a finite, nonzero position"));
                }
                InitialState::Cartesian(c)
            }
            RawInitial::Spherical {
                r,
                altitude,
                lon,
                lat,
                v,
                gamma,
                psi,
            } => InitialState::Spherical(SphericalState {
                r: radius_of("initial", r, altitude, &body)?,
                lon: finite("initial.lon", lon)?,
                lat: finite("initial.lat", lat)?,
                v: non_negative("initial.v", v)?,
                gamma: finite("initial.gamma", gamma)?,
                psi: finite("initial.psi", psi)?,
            }),
        };

        let bank_knots = profile("controls.bank.knots", &raw.controls.bank.knots)?;
        let controls = ControlProfile {
            alpha: profile("controls.alpha", &raw.controls.alpha)?,
            bank: match raw.controls.bank.kind {
                BankKind::Sigma => BankProfile::Sigma(bank_knots),
                BankKind::Beta => BankProfile::Beta(bank_knots),
                BankKind::LiftFrameRate => BankProfile::LiftFrameRate(bank_knots),
            },
            thrust: match &raw.controls.thrust {
                Some(k) => {
                    let p = profile("controls.thrust", k)?;
                    if p.knots().iter().any(|&(_, v)| v < 0.0) {
                        return Err(invalid("controls.thrust", "thrust must be non-negative"));
                    }
                    Some(p)
                }
                None => None,
            },
        };

        let ri = raw.integrator.unwrap_or(RawIntegrator {
            method: None,
            rel_tol: None,
            abs_tol: None,
            step: None,
            max_step: None,
            renormalize: None,
            max_steps: None,
            output_interval: None,
        });
        let defaults = IntegratorConfig::default();
        let method = match ri.method.unwrap_or(MethodKind::Dopri45) {
            MethodKind::Rk4 => Method::Rk4 {
                step: positive(
                    "integrator.step",
                    ri.step.ok_or_else(|| invalid("integrator.step", "required for rk4"))?,
                )?,
            },
            MethodKind::Dopri45 => Method::DormandPrince {
                rel_tol: positive("integrator.rel_tol", ri.rel_tol.unwrap_or(1e-10))?,
                abs_tol: positive("integrator.abs_tol", ri.abs_tol.unwrap_or(1e-12))?,
                initial_step: ri.step.map(|h| positive("integrator.step", h)).transpose()?,
                max_step: ri.max_step.map(|h| positive("integrator.max_step", h)).transpose()?,
            },
        };
        let integrator = IntegratorConfig {
            method,
            renormalize: ri.renormalize.unwrap_or(defaults.renormalize),
            max_steps: ri.max_steps.unwrap_or(defaults.max_steps),
            output_interval: Some(positive(
                "integrator.output_interval",
                ri.output_interval.unwrap_or(DEFAULT_OUTPUT_INTERVAL),
            )?),
        };
        if integrator.max_steps == 0 {
            return Err(invalid("integrator.max_steps", "must be positive"));
        }

        let stop = StopConditions {
            t_final: positive("stop.t_final", raw.stop.t_final)?,
            radius: match (raw.stop.radius, raw.stop.altitude) {
                (Some(r), None) => Some(positive("stop.radius", r)?),
                (None, Some(h)) => Some(positive("stop.altitude", body.radius + finite("stop.altitude", h)?)?),
                (None, None) => None,
                _ => return Err(invalid("stop", "give at most one of radius or altitude")),
            },
        };

        let mut parameterizations = raw.parameterizations;
        parameterizations.sort();
        parameterizations.dedup();
        Ok(Self {
            name: raw.name,
            description: raw.description,
            parameterizations,
            expect_singularity: raw.expect_singularity,
            env,
            initial,
            controls,
            integrator,
            stop,
            output_dir: raw.output.dir,
        })
    }
}
