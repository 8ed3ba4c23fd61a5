//! Flight-state representations and conversions through the Cartesian
//! observation-frame state.
//!
//! Frames: `E` is the observation frame fixed to the rotating central body,
//! `A` is the position frame with `a1` along the position vector, and `B` is
//! the velocity frame with `b1` along the `E`-relative velocity. The
//! remaining rotation of `{a2, a3}` about `a1` and of `{b2, b3}` about `b1` is
//! a gauge choice. Conversions from Cartesian states fix it with shortest-arc
//! rotations so the result is deterministic.

use thiserror::Error;

use crate::quat::{self, dcm_from_quat, quat_from_dcm, Dcm, QuatError, UnitQuaternion, Vec3};
use crate::trig;

/// Unit-norm tolerance on quaternions carried in a propagated state.
pub const STATE_NORM_TOL: f64 = 1e-9;
/// Floor on `|r x v|` (m^2/s) below which the rvh form is refused.
pub const ANGULAR_MOMENTUM_FLOOR: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FrameError {
    #[error("degenerate state: zero position or zero velocity")]
    DegenerateState,
    #[error("rvh singular: zero angular momentum (|r x v| = {h:e})")]
    RvhSingular { h: f64 },
    #[error("g-basis undefined in vertical flight (C_BA(1,1) = {c11})")]
    GBasisUndefined { c11: f64 },
    #[error("invalid state: {0}")]
    Invalid(String),
    #[error(transparent)]
    Quat(#[from] QuatError),
}

/// Ten-parameter state: radius, `C_AE` Euler parameters, speed, `C_BA`
/// Euler parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RvState {
    pub r: f64,
    pub qa: UnitQuaternion,
    pub v: f64,
    pub qb: UnitQuaternion,
}

impl RvState {
    /// Checks `r > 0`, `v > 0` and both quaternion norms.
    pub fn new(r: f64, qa: UnitQuaternion, v: f64, qb: UnitQuaternion) -> Result<Self, FrameError> {
        let s = Self { r, qa, v, qb };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<(), FrameError> {
        if !(self.r > 0.0 && self.r.is_finite()) {
            return Err(FrameError::Invalid(format!("radius must be positive, got {}", self.r)));
        }
        if !(self.v > 0.0 && self.v.is_finite()) {
            return Err(FrameError::Invalid(format!("speed must be positive, got {}", self.v)));
        }
        for (name, q) in [("qa", &self.qa), ("qb", &self.qb)] {
            let n = q.norm();
            if !((n - 1.0).abs() <= STATE_NORM_TOL) {
                return Err(FrameError::Invalid(format!("{name} norm {n} is not unit")));
            }
        }
        Ok(())
    }

    pub fn c_ae(&self) -> Dcm {
        dcm_from_quat(&self.qa)
    }

    pub fn c_ba(&self) -> Dcm {
        dcm_from_quat(&self.qb)
    }

    /// Both quaternions rescaled to unit norm; `r` and `v` untouched.
    pub fn renormalized(&self) -> Result<Self, FrameError> {
        Ok(Self {
            qa: quat::renormalize(self.qa.to_array())?,
            qb: quat::renormalize(self.qb.to_array())?,
            ..*self
        })
    }

    pub fn to_array(&self) -> [f64; 10] {
        let a = self.qa.to_array();
        let b = self.qb.to_array();
        [self.r, a[0], a[1], a[2], a[3], self.v, b[0], b[1], b[2], b[3]]
    }

    pub fn from_array(y: &[f64; 10]) -> Self {
        Self {
            r: y[0],
            qa: UnitQuaternion::from_components_unchecked(y[1], y[2], y[3], y[4]),
            v: y[5],
            qb: UnitQuaternion::from_components_unchecked(y[6], y[7], y[8], y[9]),
        }
    }
}

/// Same ten parameters as [`RvState`], with `b2` held along the positive
/// lift direction and the bank rate about `b1` supplied as a control.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RvlState(pub RvState);

impl std::ops::Deref for RvlState {
    type Target = RvState;
    fn deref(&self) -> &RvState {
        &self.0
    }
}

/// Eight-parameter state with `a3 = b3` along the relative angular
/// momentum, so `C_BA` is a single rotation about the third axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RvhState {
    pub r: f64,
    pub qa: UnitQuaternion,
    pub v: f64,
    pub eps_b3: f64,
    pub eta_b: f64,
}

impl RvhState {
    pub fn new(r: f64, qa: UnitQuaternion, v: f64, eps_b3: f64, eta_b: f64) -> Result<Self, FrameError> {
        let s = Self {
            r,
            qa,
            v,
            eps_b3,
            eta_b,
        };
        if !(r > 0.0 && v > 0.0) {
            return Err(FrameError::Invalid(format!("need r > 0 and v > 0, got r={r}, v={v}")));
        }
        let na = qa.norm();
        let nb = (eps_b3 * eps_b3 + eta_b * eta_b).sqrt();
        if !((na - 1.0).abs() <= STATE_NORM_TOL && (nb - 1.0).abs() <= STATE_NORM_TOL) {
            return Err(FrameError::Invalid(format!(
                "quaternion norms not unit: qa {na}, (eps_b3, eta_b) {nb}"
            )));
        }
        Ok(s)
    }

    pub fn c_ae(&self) -> Dcm {
        dcm_from_quat(&self.qa)
    }

    /// `C_BA` of a simple rotation about `a3 = b3`.
    pub fn c_ba(&self) -> Dcm {
        dcm_from_quat(&self.qb())
    }

    pub fn qb(&self) -> UnitQuaternion {
        UnitQuaternion::from_components_unchecked(0.0, 0.0, self.eps_b3, self.eta_b)
    }

    /// Relative specific angular momentum magnitude `2 r v eps_b3 eta_b`.
    pub fn angular_momentum(&self) -> f64 {
        2.0 * self.r * self.v * self.eps_b3 * self.eta_b
    }

    pub fn renormalized(&self) -> Result<Self, FrameError> {
        let b = quat::renormalize([0.0, 0.0, self.eps_b3, self.eta_b])?;
        Ok(Self {
            qa: quat::renormalize(self.qa.to_array())?,
            eps_b3: b.eps3,
            eta_b: b.eta,
            ..*self
        })
    }

    pub fn to_array(&self) -> [f64; 8] {
        let a = self.qa.to_array();
        [self.r, a[0], a[1], a[2], a[3], self.v, self.eps_b3, self.eta_b]
    }

    pub fn from_array(y: &[f64; 8]) -> Self {
        Self {
            r: y[0],
            qa: UnitQuaternion::from_components_unchecked(y[1], y[2], y[3], y[4]),
            v: y[5],
            eps_b3: y[6],
            eta_b: y[7],
        }
    }
}

/// Position and `E`-relative velocity, both in the `E` basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CartesianState {
    pub position: Vec3,
    pub velocity: Vec3,
}

impl CartesianState {
    pub fn new(position: Vec3, velocity: Vec3) -> Self {
        Self { position, velocity }
    }

    pub fn radius(&self) -> f64 {
        self.position.norm()
    }

    pub fn speed(&self) -> f64 {
        self.velocity.norm()
    }

    /// `|r x v|`.
    pub fn angular_momentum(&self) -> f64 {
        self.position.cross(&self.velocity).norm()
    }

    /// `v^2/2 - mu/r`.
    pub fn specific_energy(&self, mu: f64) -> f64 {
        0.5 * self.velocity.norm_squared() - mu / self.radius()
    }

    pub fn to_array(&self) -> [f64; 6] {
        let (p, v) = (self.position, self.velocity);
        [p.x, p.y, p.z, v.x, v.y, v.z]
    }

    pub fn from_array(y: &[f64; 6]) -> Self {
        Self {
            position: Vec3::new(y[0], y[1], y[2]),
            velocity: Vec3::new(y[3], y[4], y[5]),
        }
    }
}

/// Radius, longitude, geocentric latitude, speed, flight path angle, and
/// azimuth (from north, positive toward east).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalState {
    pub r: f64,
    pub lon: f64,
    pub lat: f64,
    pub v: f64,
    pub gamma: f64,
    pub psi: f64,
}

impl SphericalState {
    pub fn to_array(&self) -> [f64; 6] {
        [self.r, self.lon, self.lat, self.v, self.gamma, self.psi]
    }

    pub fn from_array(y: &[f64; 6]) -> Self {
        Self {
            r: y[0],
            lon: y[1],
            lat: y[2],
            v: y[3],
            gamma: y[4],
            psi: y[5],
        }
    }
}

/// `omega(E->A)` in the `A` basis and `omega(A->B)` in the `B` basis.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AngularRates {
    pub w_a: Vec3,
    pub w_b: Vec3,
}

pub fn rv_to_cartesian(s: &RvState) -> CartesianState {
    let c_ae = s.c_ae();
    let c_be = s.c_ba().then(&c_ae);
    CartesianState {
        position: s.r * c_ae.row(0),
        velocity: s.v * c_be.row(0),
    }
}

/// Gauge rule: `qa` is the shortest arc taking `e1` to the position
/// direction (half-turn about `e3` when antiparallel) and `qb` is the
/// shortest arc taking `a1` to the velocity direction expressed in `A`
/// (half-turn about `a3` when antiparallel).
pub fn cartesian_to_rv(c: &CartesianState) -> Result<RvState, FrameError> {
    let r = c.radius();
    let v = c.speed();
    if !(r > 0.0 && v > 0.0) || !r.is_finite() || !v.is_finite() {
        return Err(FrameError::DegenerateState);
    }
    let r_hat = c.position / r;
    let qa = quat::shortest_arc(&Vec3::x(), &r_hat, &Vec3::z());
    let v_hat_a = dcm_from_quat(&qa).apply(&(c.velocity / v));
    let qb = quat::shortest_arc(&Vec3::x(), &v_hat_a.normalize(), &Vec3::z());
    Ok(RvState { r, qa, v, qb })
}

/// rvL gauge: `qa` as in [`cartesian_to_rv`], `b2` along the lift
/// direction `cos(beta) g1 + sin(beta) g2`.
pub fn cartesian_to_rvl(c: &CartesianState, beta: f64) -> Result<RvlState, FrameError> {
    let rv = cartesian_to_rv(c)?;
    let c_ba = rv.c_ba();
    let [g1, g2, g3] = bank_basis_g(&c_ba)?;
    let (sb, cb) = trig::sin_cos(beta);
    let b2 = cb * g1 + sb * g2;
    let b3 = g3.cross(&b2);
    // rows of the new C_BA are b1, b2, b3 in A, i.e. the B-basis vectors
    // mapped back through C_BA^T
    let to_a = c_ba.transpose();
    let rows = [to_a.apply(&g3), to_a.apply(&b2), to_a.apply(&b3)];
    let qb = quat_from_dcm(&Dcm::from_rows_unchecked(rows))?;
    Ok(RvlState(RvState { qb, ..rv }))
}

/// Rotates `b2`, `b3` about `b1` by `angle`: the new `b2` is
/// `cos(angle) b2 + sin(angle) b3`. Position and velocity are unchanged.
pub fn roll_velocity_frame(s: &RvState, angle: f64) -> RvState {
    let (sa, ca) = trig::sin_cos(angle);
    let roll = Dcm::from_rows_unchecked([Vec3::x(), Vec3::new(0.0, ca, sa), Vec3::new(0.0, -sa, ca)]);
    let c = roll.then(&s.c_ba());
    let qb = quat_from_dcm(&c).expect("product of rotations is a rotation");
    RvState { qb, ..*s }
}

pub fn rvh_to_cartesian(s: &RvhState) -> CartesianState {
    let c_ae = s.c_ae();
    let c_be = s.c_ba().then(&c_ae);
    CartesianState {
        position: s.r * c_ae.row(0),
        velocity: s.v * c_be.row(0),
    }
}

/// Gauge rule: `a1` along the position, `a3` along `r x v`. `eps_b3` and
/// `eta_b` are `sin(phi/2)` and `cos(phi/2)` of the angle `phi` between the
/// position and the velocity.
pub fn cartesian_to_rvh(c: &CartesianState) -> Result<RvhState, FrameError> {
    let r = c.radius();
    let v = c.speed();
    if !(r > 0.0 && v > 0.0) {
        return Err(FrameError::DegenerateState);
    }
    let h_vec = c.position.cross(&c.velocity);
    let h = h_vec.norm();
    if !(h > ANGULAR_MOMENTUM_FLOOR) {
        return Err(FrameError::RvhSingular { h });
    }
    let a1 = c.position / r;
    let a3 = h_vec / h;
    let a2 = a3.cross(&a1);
    let qa = quat_from_dcm(&Dcm::from_rows_unchecked([a1, a2, a3]))?;

    let cos_phi = (a1.dot(&c.velocity) / v).clamp(-1.0, 1.0);
    let sin_phi = (h / (r * v)).clamp(0.0, 1.0);
    // Evaluate the larger half-angle term from its square; derive the other
    // from sin(phi) = 2 eps_b3 eta_b.
    let (eps_b3, eta_b) = if cos_phi >= 0.0 {
        let eta = (0.5 * (1.0 + cos_phi)).sqrt();
        (sin_phi / (2.0 * eta), eta)
    } else {
        let eps = (0.5 * (1.0 - cos_phi)).sqrt();
        (eps, sin_phi / (2.0 * eps))
    };
    let n = (eps_b3 * eps_b3 + eta_b * eta_b).sqrt();
    Ok(RvhState {
        r,
        qa,
        v,
        eps_b3: eps_b3 / n,
        eta_b: eta_b / n,
    })
}

/// Local up, east, north unit vectors in the `E` basis.
fn local_basis(lon: f64, lat: f64) -> (Vec3, Vec3, Vec3) {
    let (slon, clon) = trig::sin_cos(lon);
    let (slat, clat) = trig::sin_cos(lat);
    let up = Vec3::new(clat * clon, clat * slon, slat);
    let east = Vec3::new(-slon, clon, 0.0);
    let north = Vec3::new(-slat * clon, -slat * slon, clat);
    (up, east, north)
}

pub fn spherical_to_cartesian(s: &SphericalState) -> CartesianState {
    let (up, east, north) = local_basis(s.lon, s.lat);
    let (sg, cg) = trig::sin_cos(s.gamma);
    let (sp, cp) = trig::sin_cos(s.psi);
    CartesianState {
        position: s.r * up,
        velocity: s.v * (sg * up + cg * (cp * north + sp * east)),
    }
}

/// Azimuth is set to zero when the horizontal speed is below `1e-12 v`.
pub fn cartesian_to_spherical(c: &CartesianState) -> Result<SphericalState, FrameError> {
    let p = c.position;
    let r = p.norm();
    if !(r > 0.0) {
        return Err(FrameError::Invalid("zero radius".into()));
    }
    let lon = trig::atan2(p.y, p.x);
    let lat = trig::atan2(p.z, p.x.hypot(p.y));
    let (up, east, north) = local_basis(lon, lat);
    let v = c.speed();
    let vu = c.velocity.dot(&up);
    let ve = c.velocity.dot(&east);
    let vn = c.velocity.dot(&north);
    let horiz = ve.hypot(vn);
    let gamma = trig::atan2(vu, horiz);
    let psi = if horiz <= 1e-12 * v { 0.0 } else { trig::atan2(ve, vn) };
    Ok(SphericalState {
        r,
        lon,
        lat,
        v,
        gamma,
        psi,
    })
}

/// The `{g1, g2, g3}` basis in `B` components: `g3 = b1`, `g2` along
/// `-(r x v)`, `g1 = g2 x g3`.
pub fn bank_basis_g(c_ba: &Dcm) -> Result<[Vec3; 3], FrameError> {
    let c11 = c_ba.get(0, 0);
    let c21 = c_ba.get(1, 0);
    let c31 = c_ba.get(2, 0);
    let k2 = 1.0 - c11 * c11;
    if !(k2 > 0.0) {
        return Err(FrameError::GBasisUndefined { c11 });
    }
    let k = k2.sqrt();
    Ok([
        Vec3::new(0.0, c21 / k, c31 / k),
        Vec3::new(0.0, -c31 / k, c21 / k),
        Vec3::new(1.0, 0.0, 0.0),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_6};

    const R: f64 = 6_378_137.0;

    fn rel(a: &Vec3, b: &Vec3) -> f64 {
        (a - b).norm() / b.norm().max(1e-300)
    }

    #[test]
    fn aligned_frames_map_to_axes() {
        let s = RvState::new(R, UnitQuaternion::IDENTITY, 7000.0, UnitQuaternion::IDENTITY).unwrap();
        let c = rv_to_cartesian(&s);
        assert_eq!(c.position, Vec3::new(R, 0.0, 0.0));
        assert_eq!(c.velocity, Vec3::new(7000.0, 0.0, 0.0));
    }

    #[test]
    fn entry_table_ic_is_horizontal() {
        let qb = UnitQuaternion::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0, 0.0).unwrap();
        let s = RvState::new(R + 37_000.0, UnitQuaternion::IDENTITY, 7138.0, qb).unwrap();
        assert!(s.c_ba().get(0, 0).abs() < 1e-15);
        let c = rv_to_cartesian(&s);
        assert!(c.position.dot(&c.velocity).abs() / (c.radius() * c.speed()) < 1e-15);
        // velocity along e2
        assert!(rel(&c.velocity, &Vec3::new(0.0, 7138.0, 0.0)) < 1e-15);
    }

    #[test]
    fn axis_aligned_cartesian_to_rv() {
        let s = cartesian_to_rv(&CartesianState::new(
            Vec3::new(R, 0.0, 0.0),
            Vec3::new(0.0, 7000.0, 0.0),
        ))
        .unwrap();
        assert_eq!(s.qa, UnitQuaternion::IDENTITY);
        assert!((s.qb.eps3 - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((s.qb.eta - FRAC_1_SQRT_2).abs() < 1e-15);
        assert_eq!(s.qb.eps1, 0.0);
        assert_eq!(s.qb.eps2, 0.0);

        let up = cartesian_to_rv(&CartesianState::new(Vec3::new(R, 0.0, 0.0), Vec3::new(300.0, 0.0, 0.0))).unwrap();
        assert_eq!(up.qb, UnitQuaternion::IDENTITY);
    }

    #[test]
    fn antiparallel_velocity_uses_a3_half_turn() {
        let c = CartesianState::new(Vec3::new(0.0, R, 0.0), Vec3::new(0.0, -900.0, 0.0));
        let s = cartesian_to_rv(&c).unwrap();
        assert_eq!(s.qb.to_array(), [0.0, 0.0, 1.0, 0.0]);
        let back = rv_to_cartesian(&s);
        assert!(rel(&back.position, &c.position) < 1e-15);
        assert!(rel(&back.velocity, &c.velocity) < 1e-15);
        // position antiparallel to e1 takes the e3 half-turn for qa
        let c = CartesianState::new(Vec3::new(-R, 0.0, 0.0), Vec3::new(0.0, 0.0, 10.0));
        let s = cartesian_to_rv(&c).unwrap();
        assert_eq!(s.qa.to_array(), [0.0, 0.0, 1.0, 0.0]);
        let back = rv_to_cartesian(&s);
        assert!(rel(&back.position, &c.position) < 1e-15);
        assert!(rel(&back.velocity, &c.velocity) < 1e-15);
    }

    #[test]
    fn degenerate_inputs_rejected() {
        assert_eq!(
            cartesian_to_rv(&CartesianState::new(Vec3::zeros(), Vec3::x())),
            Err(FrameError::DegenerateState)
        );
        assert_eq!(
            cartesian_to_rv(&CartesianState::new(Vec3::x(), Vec3::zeros())),
            Err(FrameError::DegenerateState)
        );
    }

    #[test]
    fn rvh_examples() {
        // phi = pi/2
        let c = CartesianState::new(Vec3::new(R, 0.0, 0.0), Vec3::new(0.0, 7000.0, 0.0));
        let s = cartesian_to_rvh(&c).unwrap();
        assert!((s.eps_b3 - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((s.eta_b - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((s.angular_momentum() - R * 7000.0).abs() / (R * 7000.0) < 1e-15);

        // phi = pi/6
        let v = 5000.0;
        let (sp, cp) = FRAC_PI_6.sin_cos();
        let c = CartesianState::new(Vec3::new(0.0, 0.0, R), Vec3::new(v * sp, 0.0, v * cp));
        let s = cartesian_to_rvh(&c).unwrap();
        assert!((s.angular_momentum() - 0.5 * R * v).abs() / (0.5 * R * v) < 1e-12);
        let back = rvh_to_cartesian(&s);
        assert!(rel(&back.position, &c.position) < 1e-12);
        assert!(rel(&back.velocity, &c.velocity) < 1e-12);

        let vertical = CartesianState::new(Vec3::new(0.0, R, 0.0), Vec3::new(0.0, -100.0, 0.0));
        assert!(matches!(
            cartesian_to_rvh(&vertical),
            Err(FrameError::RvhSingular { .. })
        ));
    }

    #[test]
    fn spherical_examples() {
        let c = CartesianState::new(Vec3::new(R, 0.0, 0.0), Vec3::new(0.0, 7000.0, 0.0));
        let s = cartesian_to_spherical(&c).unwrap();
        assert_eq!((s.lat, s.lon, s.gamma), (0.0, 0.0, 0.0));
        assert!((s.psi - FRAC_PI_2).abs() < 1e-15, "eastward is psi = 90 deg");

        let north = CartesianState::new(Vec3::new(R, 0.0, 0.0), Vec3::new(0.0, 0.0, 10.0));
        assert!(cartesian_to_spherical(&north).unwrap().psi.abs() < 1e-15);

        let radial = CartesianState::new(Vec3::new(0.0, 0.0, R), Vec3::new(0.0, 0.0, -250.0));
        let s = cartesian_to_spherical(&radial).unwrap();
        assert!((s.gamma + FRAC_PI_2).abs() < 1e-15);
        assert_eq!(s.psi, 0.0);

        assert!(cartesian_to_spherical(&CartesianState::new(Vec3::zeros(), Vec3::x())).is_err());
    }

    #[test]
    fn g_basis_example() {
        // C_BA(:,1) = (0, 0, -1)
        let c = Dcm::from_rows_unchecked([
            Vec3::new(0.0, 0.0, 1.0),
            Vec3::new(0.0, 1.0, 0.0),
            Vec3::new(-1.0, 0.0, 0.0),
        ]);
        assert!(c.orthonormality().0 < 1e-15 && (c.orthonormality().1 - 1.0).abs() < 1e-15);
        let [g1, g2, g3] = bank_basis_g(&c).unwrap();
        assert_eq!(g2, Vec3::new(0.0, 1.0, 0.0));
        assert_eq!(g1, Vec3::new(0.0, 0.0, -1.0));
        assert_eq!(g3, Vec3::x());
        assert!((g1.cross(&g2).dot(&g3) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn g_basis_vertical_rejected() {
        assert!(matches!(
            bank_basis_g(&Dcm::identity()),
            Err(FrameError::GBasisUndefined { .. })
        ));
        let down = quat::dcm_from_quat(&UnitQuaternion::from_components_unchecked(0.0, 1.0, 0.0, 0.0));
        assert!(bank_basis_g(&down).is_err());
    }

    #[test]
    fn renormalize_keeps_magnitudes() {
        let s = RvState {
            r: R,
            qa: UnitQuaternion::from_components_unchecked(0.0, 0.0, 0.0, 1.0 + 1e-9),
            v: 10.0,
            qb: UnitQuaternion::from_components_unchecked(0.5, 0.5, 0.5, 0.5 * (1.0 + 1e-9)),
        };
        let n = s.renormalized().unwrap();
        assert_eq!((n.r, n.v), (s.r, s.v));
        assert!((n.qa.norm() - 1.0).abs() < 1e-16);
        assert!((n.qb.norm() - 1.0).abs() <= 2.0 * f64::EPSILON);
        let unit = RvState::new(R, UnitQuaternion::IDENTITY, 1.0, UnitQuaternion::IDENTITY).unwrap();
        assert_eq!(unit.renormalized().unwrap(), unit);
        let bad = RvState {
            qa: UnitQuaternion::from_components_unchecked(0.0, 0.0, 0.0, 0.0),
            ..unit
        };
        assert!(bad.renormalized().is_err());
    }
}
