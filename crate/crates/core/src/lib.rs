//! Exact bound states of a two-dimensional particle in a Kratzer potential
//! with a dipole term and an Aharonov-Bohm flux, together with the Fisher,
//! Shannon, Tsallis and Rényi information measures of its position density.
//!
//! Every closed-form quantity has an independent numerical counterpart in
//! [`oracle`], and [`validate`] runs the cross-check suite.
//!
//! All internal computation uses Hartree atomic units; only [`molecules`]
//! converts from spectroscopic units.

pub mod cli;
pub mod constants;
pub mod error;
pub mod measures;
pub mod molecules;
pub mod oracle;
pub mod specfun;
pub mod sweep;
pub mod system;
pub mod tables;
pub mod tridiag;
pub mod validate;

pub use error::{Error, Result, Warning};
pub use system::{AngularMethod, AngularMode, SolvedState, StateSpec, SystemParams};
