//! Spectral toolkit for the sine- and sinh-Gordon equations in characteristic
//! coordinates on the circle, recast as nonlocal flows for the slope variable
//! `v = u_x / 2`.
//!
//! The crate provides:
//!
//! - periodic spectral calculus with mean-zero and affine antiderivatives
//!   ([`spectral`]);
//! - the constraint manifolds, fold branches, and normalization maps of the
//!   phase-space picture, together with the obstruction integral that governs
//!   mean drift ([`phase`]);
//! - Hamiltonians, gradients, and the Gardner bracket ([`hamiltonian`]);
//! - time evolution with conservation diagnostics and ramification guards
//!   ([`evolution`]);
//! - Hill discriminants and the Miura chain for isospectrality checks
//!   ([`floquet`]);
//! - surface reconstruction from solution patches via the frame equations,
//!   with curvature diagnostics and OBJ export ([`geometry`]).

pub mod error;
pub mod evolution;
pub mod floquet;
pub mod geometry;
pub mod hamiltonian;
pub mod phase;
pub mod sampling;
pub mod spectral;
pub mod tolerances;

pub use error::{Error, Result};
pub use phase::{PhaseClass, PhaseTag};
pub use spectral::{AffineFunction, GridFunction, PeriodicGrid, WindingFunction};
