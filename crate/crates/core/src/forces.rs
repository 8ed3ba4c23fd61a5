//! Central body, atmosphere, vehicle and aerodynamic models, and the force
//! components expressed in the velocity-frame basis.

use crate::quat::{Dcm, Vec3};
use crate::trig;

/// Point-mass central body rotating at a constant rate about `e3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CentralBody {
    /// Gravitational parameter (m^3/s^2).
    pub mu: f64,
    /// Equatorial radius (m).
    pub radius: f64,
    /// Rotation rate about `e3` (rad/s).
    pub spin_rate: f64,
}

impl CentralBody {
    pub const EARTH: Self = Self {
        mu: 3.986004418e14,
        radius: 6_378_137.0,
        spin_rate: 7.2921159e-5,
    };

    /// Angular velocity of `E` relative to the inertial frame, in `E`.
    pub fn spin_vector(&self) -> Vec3 {
        Vec3::new(0.0, 0.0, self.spin_rate)
    }
}

/// Exponential atmosphere fixed in the body frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atmosphere {
    /// Density at zero altitude (kg/m^3).
    pub rho0: f64,
    /// Scale height (m).
    pub scale_height: f64,
}

impl Default for Atmosphere {
    fn default() -> Self {
        Self {
            rho0: 1.225,
            scale_height: 8500.0,
        }
    }
}

impl Atmosphere {
    /// No atmosphere at all.
    pub const VACUUM: Self = Self {
        rho0: 0.0,
        scale_height: 8500.0,
    };

    /// Density at altitude `h` (m). Negative altitudes extrapolate.
    #[inline]
    pub fn density(&self, h: f64) -> f64 {
        self.rho0 * (-h / self.scale_height).exp()
    }
}

/// Linear lift curve with a parabolic drag polar.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AeroModel {
    /// Reference area (m^2).
    pub ref_area: f64,
    /// Lift slope (1/rad).
    pub cl_alpha: f64,
    /// Zero-lift drag coefficient.
    pub cd0: f64,
    /// Induced-drag factor.
    pub k_induced: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AeroForces {
    /// Signed lift magnitude (N).
    pub lift: f64,
    /// Drag magnitude (N).
    pub drag: f64,
    /// Dynamic pressure (Pa).
    pub dynamic_pressure: f64,
}

pub fn aero_forces(rho: f64, v: f64, alpha: f64, model: &AeroModel) -> AeroForces {
    let q = 0.5 * rho * v * v;
    let cl = model.cl_alpha * alpha;
    let qs = q * model.ref_area;
    AeroForces {
        lift: qs * cl,
        drag: qs * (model.cd0 + model.k_induced * cl * cl),
        dynamic_pressure: q,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vehicle {
    /// Mass (kg).
    pub mass: f64,
    /// Thrust magnitude (N), used when the control profile gives none.
    pub thrust: f64,
    /// Thrust offset from the body x-axis (rad).
    pub thrust_offset: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Environment {
    pub body: CentralBody,
    pub atmosphere: Atmosphere,
    pub aero: AeroModel,
    pub vehicle: Vehicle,
}

impl Environment {
    /// Earth with an exponential atmosphere and a small lifting entry
    /// vehicle.
    pub fn earth_default() -> Self {
        Self {
            body: CentralBody::EARTH,
            atmosphere: Atmosphere::default(),
            aero: AeroModel {
                ref_area: 0.35,
                cl_alpha: 1.2,
                cd0: 0.12,
                k_induced: 0.6,
            },
            vehicle: Vehicle {
                mass: 1000.0,
                thrust: 0.0,
                thrust_offset: 0.0,
            },
        }
    }

    /// Two-body dynamics only: no atmosphere, no rotation.
    pub fn two_body(body: CentralBody) -> Self {
        let mut env = Self::earth_default();
        env.body = CentralBody { spin_rate: 0.0, ..body };
        env.atmosphere = Atmosphere::VACUUM;
        env
    }

    pub fn altitude(&self, r: f64) -> f64 {
        r - self.body.radius
    }
}

/// Thrust and aerodynamic force split along `b1` and along the positive
/// lift direction.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PropulsiveAero {
    /// `T cos(alpha + delta) - D`.
    pub axial: f64,
    /// `T sin(alpha + delta) + L`.
    pub normal: f64,
    pub aero: AeroForces,
}

/// Thrust plus aerodynamics at radius `r`, speed `v`. The thrust angle is
/// only evaluated when thrust is nonzero.
#[inline]
pub fn propulsive_aero(env: &Environment, r: f64, v: f64, alpha: f64, thrust: f64) -> PropulsiveAero {
    let rho = env.atmosphere.density(env.altitude(r));
    let aero = aero_forces(rho, v, alpha, &env.aero);
    let (ts, tc) = if thrust != 0.0 {
        let (s, c) = trig::sin_cos(alpha + env.vehicle.thrust_offset);
        (thrust * s, thrust * c)
    } else {
        (0.0, 0.0)
    };
    PropulsiveAero {
        axial: tc - aero.drag,
        normal: ts + aero.lift,
        aero,
    }
}

/// Where the positive lift direction points in the `B` basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LiftAxis {
    /// `cos(sigma) b2 + sin(sigma) b3`, given as `(cos sigma, sin sigma)`.
    Banked { cos: f64, sin: f64 },
    /// Along `b2`.
    B2,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ForceComponents {
    /// Net force `(f1, f2, f3)` in `B` (N).
    pub net: Vec3,
    /// Apparent force `(f~1, f~2, f~3)` in `B` (N).
    pub apparent: Vec3,
}

/// Net force in `B`: thrust and aerodynamics plus gravity `-m mu/r^2 a1`,
/// where `a1_in_b = C_BA(:,1)`.
#[inline]
pub fn net_force_b(r: f64, a1_in_b: &Vec3, pa: &PropulsiveAero, lift_axis: LiftAxis, mass: f64, mu: f64) -> Vec3 {
    let g = mass * mu / (r * r);
    let (f2, f3) = match lift_axis {
        LiftAxis::Banked { cos, sin } => (pa.normal * cos, pa.normal * sin),
        LiftAxis::B2 => (pa.normal, 0.0),
    };
    Vec3::new(pa.axial - g * a1_in_b.x, f2 - g * a1_in_b.y, f3 - g * a1_in_b.z)
}

/// Net force minus mass times the Coriolis and centripetal accelerations,
/// in `B`. Divided by mass it is the acceleration seen from `E`.
#[inline]
pub fn apparent_force_b(net: &Vec3, r: f64, v: f64, c_ba: &Dcm, c_ae: &Dcm, spin_rate: f64, mass: f64) -> Vec3 {
    if spin_rate == 0.0 {
        return *net;
    }
    let a13 = c_ae.get(0, 2);
    let a23 = c_ae.get(1, 2);
    let a33 = c_ae.get(2, 2);
    // C_BE(2,3) and C_BE(3,3): rows 2, 3 of C_BA against column 3 of C_AE.
    let be23 = c_ba.get(1, 0) * a13 + c_ba.get(1, 1) * a23 + c_ba.get(1, 2) * a33;
    let be33 = c_ba.get(2, 0) * a13 + c_ba.get(2, 1) * a23 + c_ba.get(2, 2) * a33;
    let cor = 2.0 * spin_rate * v;
    let coriolis = Vec3::new(0.0, cor * be33, -cor * be23);
    let w = Vec3::new(a13 * a13 - 1.0, a13 * a23, a13 * a33);
    let centripetal = r * spin_rate * spin_rate * c_ba.apply(&w);
    net - mass * (coriolis + centripetal)
}
