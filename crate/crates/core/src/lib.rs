//! Gravity-induced wave-function reduction in Bohmian mechanics.
//!
//! A Gaussian packet of width `sigma0` carries a quantum potential and the
//! gravitational self-energy of its own probability distribution. This crate
//! evaluates both, their packet averages, the critical mass and width where
//! they balance, and the radial trajectories they drive.
//!
//! Everything is generic over [`Real`] (`f32` or `f64`); the `*F64` and
//! `*F32` aliases fix the scalar.

pub mod averages;
pub mod criticality;
pub mod dynamics;
pub mod error;
pub mod minimize;
pub mod model;
pub mod ode;
pub mod potentials;
pub mod quadrature;
pub mod scalar;
pub mod verification;

pub use error::{Error, Result};
pub use model::{Body, BodyKind, PhysicalContext, UnitSystem, WavePacket};
pub use scalar::Real;

pub type BodyF64 = model::Body<f64>;
pub type WavePacketF64 = model::WavePacket<f64>;
pub type ContextF64 = model::PhysicalContext<f64>;
pub type ForceLawF64 = dynamics::ForceLaw<f64>;
pub type TrajectoryF64 = dynamics::Trajectory<f64>;
pub type RegimeReportF64 = criticality::RegimeReport<f64>;

pub type BodyF32 = model::Body<f32>;
pub type WavePacketF32 = model::WavePacket<f32>;
pub type ContextF32 = model::PhysicalContext<f32>;
pub type ForceLawF32 = dynamics::ForceLaw<f32>;
pub type TrajectoryF32 = dynamics::Trajectory<f32>;
pub type RegimeReportF32 = criticality::RegimeReport<f32>;
