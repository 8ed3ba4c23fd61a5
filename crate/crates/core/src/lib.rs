//! Point-mass flight dynamics over a rotating central body using Euler
//! parameters for the position and velocity frames.
//!
//! Three parameterizations are provided (rv, rvL, rvh) together with a
//! Cartesian reference model and a spherical-coordinate model.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod control;
pub mod dynamics;
pub mod forces;
pub mod frames;
pub mod models;
pub mod propagation;
pub mod quat;
pub mod trig;

pub use dynamics::{BankCommand, ControlInput, DynamicsError};
pub use forces::Environment;
pub use frames::{CartesianState, RvState, RvhState, RvlState, SphericalState};
pub use quat::{Dcm, UnitQuaternion, Vec3};
