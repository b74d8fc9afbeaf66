//! Desk-scale numerics for Jacob's ladders on the critical line.
//!
//! The crate is organised bottom-up:
//!
//! * [`zeta`] evaluates θ(t), Hardy's Z(t), |ζ(1/2+it)|² and tracks the
//!   argument functions S(t), S₁(t) along the critical line.
//! * [`quadrature`] integrates critical-line integrands: the
//!   Hardy–Littlewood integral J(T) and moments of S₁.
//! * [`ladder`] defines the operational ladder φ₁, its direct and reverse
//!   iterations and the derivative function Z̃².
//! * [`selberg`] estimates Selberg's moment constant and checks the
//!   S₁-moment identities along ladder chains.
//! * [`functionals`] implements the three ζ-functionals and the
//!   Fermat-rational discriminator.
//! * [`ortho`] builds the ladder-generated Legendre systems and their Gram
//!   matrices.
//! * [`harness`] wires everything into batch campaigns with CSV/JSON output.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod error;
pub mod functionals;
pub mod harness;
pub mod ladder;
pub mod ortho;
pub mod quadrature;
pub mod report;
pub mod roots;
pub mod selberg;
pub mod zeta;

pub use error::{Error, Result};

/// Euler's constant c.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_61;

/// 1 − c, the slope of the almost linear increments.
pub const ONE_MINUS_GAMMA: f64 = 0.422_784_335_098_467_139_39;

/// ln 2π.
pub const LN_2PI: f64 = 1.837_877_066_409_345_483_56;

/// Default upper limit for integration endpoints.
pub const DEFAULT_T_CAP: f64 = 1.0e6;
