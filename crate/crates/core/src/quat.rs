//! Euler-parameter (unit quaternion) algebra.
//!
//! Storage order is `(eps1, eps2, eps3, eta)`: vector part first, scalar
//! part last. A quaternion built from a rotation of angle `phi` about the
//! unit axis `q` has `eps = q sin(phi/2)` and `eta = cos(phi/2)`.
//!
//! Direction cosine matrices map component columns between bases:
//! `{p}_B = C_BA {p}_A`. Row `i` of `C_BA` is basis vector `b_i` written in
//! the `A` basis.

use nalgebra::Matrix3;
use thiserror::Error;

use crate::trig;

pub type Vec3 = nalgebra::Vector3<f64>;

/// Unit-norm tolerance applied when a quaternion is built from components.
pub const UNIT_NORM_TOL: f64 = 1e-12;
/// Orthonormality tolerance for a validated [`Dcm`].
pub const DCM_TOL: f64 = 1e-10;
/// Orthonormality residual above which [`quat_from_dcm`] refuses its input.
pub const DCM_INVERSE_TOL: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuatError {
    #[error("quaternion norm {norm} is not unit within {tol:e}")]
    NotUnitNorm { norm: f64, tol: f64 },
    #[error("cannot normalize a zero-norm quaternion")]
    ZeroNorm,
    #[error("rotation axis norm {norm} is not unit")]
    AxisNotUnit { norm: f64 },
    #[error("matrix is not a proper rotation (orthonormality residual {residual:e}, det {det})")]
    NotOrthonormal { residual: f64, det: f64 },
    #[error("non-finite component")]
    NonFinite,
}

/// Returns the matrix `[p]x` with `[p]x q = p x q`.
pub fn skew(p: &Vec3) -> Matrix3<f64> {
    Matrix3::new(
        0.0, -p.z, p.y, //
        p.z, 0.0, -p.x, //
        -p.y, p.x, 0.0,
    )
}

/// Single rotation of angle `angle` (rad) about the unit vector `axis`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisAngle {
    axis: Vec3,
    angle: f64,
}

impl AxisAngle {
    pub fn new(axis: Vec3, angle: f64) -> Result<Self, QuatError> {
        if !axis.iter().all(|c| c.is_finite()) || !angle.is_finite() {
            return Err(QuatError::NonFinite);
        }
        let norm = axis.norm();
        if (norm - 1.0).abs() > UNIT_NORM_TOL {
            return Err(QuatError::AxisNotUnit { norm });
        }
        Ok(Self { axis, angle })
    }

    /// Normalizes `axis` first. Fails on a zero axis.
    pub fn from_unnormalized(axis: Vec3, angle: f64) -> Result<Self, QuatError> {
        let norm = axis.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(QuatError::ZeroNorm);
        }
        Self::new(axis / norm, angle)
    }

    pub fn axis(&self) -> Vec3 {
        self.axis
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }
}

/// Four Euler parameters `(eps1, eps2, eps3, eta)`.
///
/// Values produced by integration drift off the unit sphere; those are
/// carried with [`UnitQuaternion::from_components_unchecked`] and pulled back
/// with [`renormalize`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitQuaternion {
    pub eps1: f64,
    pub eps2: f64,
    pub eps3: f64,
    pub eta: f64,
}

impl UnitQuaternion {
    pub const IDENTITY: Self = Self {
        eps1: 0.0,
        eps2: 0.0,
        eps3: 0.0,
        eta: 1.0,
    };

    /// Builds a quaternion, requiring unit norm within [`UNIT_NORM_TOL`].
    pub fn new(eps1: f64, eps2: f64, eps3: f64, eta: f64) -> Result<Self, QuatError> {
        let q = Self::from_components_unchecked(eps1, eps2, eps3, eta);
        if !q.to_array().iter().all(|c| c.is_finite()) {
            return Err(QuatError::NonFinite);
        }
        let norm = q.norm();
        if (norm - 1.0).abs() > UNIT_NORM_TOL {
            return Err(QuatError::NotUnitNorm {
                norm,
                tol: UNIT_NORM_TOL,
            });
        }
        Ok(q)
    }

    pub const fn from_components_unchecked(eps1: f64, eps2: f64, eps3: f64, eta: f64) -> Self {
        Self { eps1, eps2, eps3, eta }
    }

    pub fn from_array_unchecked(a: [f64; 4]) -> Self {
        Self::from_components_unchecked(a[0], a[1], a[2], a[3])
    }

    pub fn to_array(&self) -> [f64; 4] {
        [self.eps1, self.eps2, self.eps3, self.eta]
    }

    pub fn vector(&self) -> Vec3 {
        Vec3::new(self.eps1, self.eps2, self.eps3)
    }

    pub fn norm_squared(&self) -> f64 {
        self.eps1 * self.eps1 + self.eps2 * self.eps2 + self.eps3 * self.eps3 + self.eta * self.eta
    }

    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    /// Same rotation with the opposite sign on every component.
    pub fn negated(&self) -> Self {
        Self::from_components_unchecked(-self.eps1, -self.eps2, -self.eps3, -self.eta)
    }
}

/// Rates of the four Euler parameters.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct QuatRate {
    pub eps1: f64,
    pub eps2: f64,
    pub eps3: f64,
    pub eta: f64,
}

impl QuatRate {
    pub fn to_array(&self) -> [f64; 4] {
        [self.eps1, self.eps2, self.eps3, self.eta]
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Self {
            eps1: a[0],
            eps2: a[1],
            eps3: a[2],
            eta: a[3],
        }
    }
}

/// Direction cosine matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dcm(Matrix3<f64>);

impl Dcm {
    pub fn identity() -> Self {
        Self(Matrix3::identity())
    }

    /// Validates `C Cᵀ = I` and `det C = 1` within [`DCM_TOL`].
    pub fn new(m: Matrix3<f64>) -> Result<Self, QuatError> {
        let (residual, det) = orthonormality(&m);
        if !(residual <= DCM_TOL && (det - 1.0).abs() <= DCM_TOL) {
            return Err(QuatError::NotOrthonormal { residual, det });
        }
        Ok(Self(m))
    }

    pub fn from_matrix_unchecked(m: Matrix3<f64>) -> Self {
        Self(m)
    }

    /// Builds the matrix whose rows are `rows[0..3]`.
    pub fn from_rows_unchecked(rows: [Vec3; 3]) -> Self {
        Self(Matrix3::from_rows(&[
            rows[0].transpose(),
            rows[1].transpose(),
            rows[2].transpose(),
        ]))
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.0
    }

    /// Zero-based element access; `get(0, 0)` is `C(1,1)`.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    /// Zero-based row as a column vector.
    pub fn row(&self, i: usize) -> Vec3 {
        Vec3::new(self.0[(i, 0)], self.0[(i, 1)], self.0[(i, 2)])
    }

    /// Zero-based column.
    pub fn col(&self, j: usize) -> Vec3 {
        Vec3::new(self.0[(0, j)], self.0[(1, j)], self.0[(2, j)])
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    /// `self * rhs`, i.e. `C_BA * C_AE = C_BE`.
    pub fn then(&self, rhs: &Dcm) -> Self {
        Self(self.0 * rhs.0)
    }

    pub fn apply(&self, p: &Vec3) -> Vec3 {
        self.0 * p
    }

    /// Max elementwise `|C Cᵀ - I|` and the determinant.
    pub fn orthonormality(&self) -> (f64, f64) {
        orthonormality(&self.0)
    }
}

fn orthonormality(m: &Matrix3<f64>) -> (f64, f64) {
    let r = m * m.transpose() - Matrix3::identity();
    let residual = r.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()));
    (
        if residual.is_nan() { f64::INFINITY } else { residual },
        m.determinant(),
    )
}

pub fn dcm_from_axis_angle(aa: &AxisAngle) -> Dcm {
    let (s, c) = trig::sin_cos(aa.angle);
    let q = aa.axis;
    let k = 1.0 - c;
    Dcm(Matrix3::new(
        k * q.x * q.x + c,
        k * q.x * q.y + q.z * s,
        k * q.x * q.z - q.y * s,
        k * q.y * q.x - q.z * s,
        k * q.y * q.y + c,
        k * q.y * q.z + q.x * s,
        k * q.z * q.x + q.y * s,
        k * q.z * q.y - q.x * s,
        k * q.z * q.z + c,
    ))
}

pub fn quat_from_axis_angle(aa: &AxisAngle) -> UnitQuaternion {
    let (s, c) = trig::sin_cos(0.5 * aa.angle);
    let q = aa.axis;
    UnitQuaternion::from_components_unchecked(q.x * s, q.y * s, q.z * s, c)
}

/// Direction cosine matrix of a set of Euler parameters. Uses the
/// components as given; no normalization.
pub fn dcm_from_quat(q: &UnitQuaternion) -> Dcm {
    let (e1, e2, e3, n) = (q.eps1, q.eps2, q.eps3, q.eta);
    Dcm(Matrix3::new(
        1.0 - 2.0 * (e2 * e2 + e3 * e3),
        2.0 * (e1 * e2 + e3 * n),
        2.0 * (e1 * e3 - e2 * n),
        2.0 * (e2 * e1 - e3 * n),
        1.0 - 2.0 * (e3 * e3 + e1 * e1),
        2.0 * (e2 * e3 + e1 * n),
        2.0 * (e3 * e1 + e2 * n),
        2.0 * (e3 * e2 - e1 * n),
        1.0 - 2.0 * (e1 * e1 + e2 * e2),
    ))
}

/// Inverse of [`dcm_from_quat`] with `eta >= 0`.
///
/// Picks the largest of `4 eta^2`, `4 eps_i^2` as the pivot so the divisor
/// never approaches zero.
pub fn quat_from_dcm(c: &Dcm) -> Result<UnitQuaternion, QuatError> {
    let (residual, det) = c.orthonormality();
    if !(residual <= DCM_INVERSE_TOL && (det - 1.0).abs() <= DCM_INVERSE_TOL) {
        return Err(QuatError::NotOrthonormal { residual, det });
    }
    let m = |i: usize, j: usize| c.get(i - 1, j - 1);
    let tr = m(1, 1) + m(2, 2) + m(3, 3);
    // 4 eta^2, 4 eps1^2, 4 eps2^2, 4 eps3^2
    let cand = [
        1.0 + tr,
        1.0 + m(1, 1) - m(2, 2) - m(3, 3),
        1.0 - m(1, 1) + m(2, 2) - m(3, 3),
        1.0 - m(1, 1) - m(2, 2) + m(3, 3),
    ];
    let pivot = (0..4).max_by(|&a, &b| cand[a].total_cmp(&cand[b])).unwrap_or(0);
    let s = cand[pivot].sqrt() * 2.0; // 4 * |pivot component|
    let (e1, e2, e3, n) = match pivot {
        0 => (
            (m(2, 3) - m(3, 2)) / s,
            (m(3, 1) - m(1, 3)) / s,
            (m(1, 2) - m(2, 1)) / s,
            0.25 * s,
        ),
        1 => (
            0.25 * s,
            (m(1, 2) + m(2, 1)) / s,
            (m(1, 3) + m(3, 1)) / s,
            (m(2, 3) - m(3, 2)) / s,
        ),
        2 => (
            (m(1, 2) + m(2, 1)) / s,
            0.25 * s,
            (m(2, 3) + m(3, 2)) / s,
            (m(3, 1) - m(1, 3)) / s,
        ),
        _ => (
            (m(1, 3) + m(3, 1)) / s,
            (m(2, 3) + m(3, 2)) / s,
            0.25 * s,
            (m(1, 2) - m(2, 1)) / s,
        ),
    };
    let q = UnitQuaternion::from_components_unchecked(e1, e2, e3, n);
    let q = renormalize(q.to_array())?;
    Ok(if q.eta < 0.0 { q.negated() } else { q })
}

/// Euler-parameter rates for the angular velocity `omega` of the rotated
/// frame, with `omega` expressed in the rotated frame's basis.
#[inline]
pub fn quat_rates(q: &UnitQuaternion, omega: &Vec3) -> QuatRate {
    let (e1, e2, e3, n) = (q.eps1, q.eps2, q.eps3, q.eta);
    let (w1, w2, w3) = (omega.x, omega.y, omega.z);
    QuatRate {
        eps1: 0.5 * (n * w1 - e3 * w2 + e2 * w3),
        eps2: 0.5 * (e3 * w1 + n * w2 - e1 * w3),
        eps3: 0.5 * (-e2 * w1 + e1 * w2 + n * w3),
        eta: -0.5 * (e1 * w1 + e2 * w2 + e3 * w3),
    }
}

/// Angular velocity recovered from Euler parameters and their rates.
#[inline]
pub fn omega_from_quat_rates(qdot: &QuatRate, q: &UnitQuaternion) -> Vec3 {
    let (e1, e2, e3, n) = (q.eps1, q.eps2, q.eps3, q.eta);
    let (d1, d2, d3, dn) = (qdot.eps1, qdot.eps2, qdot.eps3, qdot.eta);
    Vec3::new(
        2.0 * (n * d1 - dn * e1 + e3 * d2 - d3 * e2),
        2.0 * (n * d2 - dn * e2 - e3 * d1 + d3 * e1),
        2.0 * (n * d3 - dn * e3 + e2 * d1 - d2 * e1),
    )
}

/// Rescales four components onto the unit sphere.
pub fn renormalize(q: [f64; 4]) -> Result<UnitQuaternion, QuatError> {
    if !q.iter().all(|c| c.is_finite()) {
        return Err(QuatError::NonFinite);
    }
    let n = q.iter().map(|c| c * c).sum::<f64>().sqrt();
    if n == 0.0 {
        return Err(QuatError::ZeroNorm);
    }
    Ok(UnitQuaternion::from_components_unchecked(
        q[0] / n,
        q[1] / n,
        q[2] / n,
        q[3] / n,
    ))
}

/// Euler parameters of the shortest-arc rotation carrying unit vector
/// `from` onto unit vector `to`. With `from = (1,0,0)` the first row of the
/// resulting DCM is `to`.
///
/// When the vectors are antiparallel the half-turn axis is `fallback_axis`,
/// which must be a unit vector perpendicular to `from`.
pub fn shortest_arc(from: &Vec3, to: &Vec3, fallback_axis: &Vec3) -> UnitQuaternion {
    let d = from.dot(to).clamp(-1.0, 1.0);
    let cross = from.cross(to);
    // |cross| = sin(phi), 1 + d = 2 cos^2(phi/2)
    let half_cos_sq = 0.5 * (1.0 + d);
    if half_cos_sq <= 1e-30 {
        let a = fallback_axis;
        return UnitQuaternion::from_components_unchecked(a.x, a.y, a.z, 0.0);
    }
    let eta = half_cos_sq.sqrt();
    // eps = axis sin(phi/2) = cross / (2 cos(phi/2))
    let eps = cross / (2.0 * eta);
    renormalize([eps.x, eps.y, eps.z, eta]).unwrap_or(UnitQuaternion::IDENTITY)
}
