//! Simulation and verification laboratory for boundary-driven lattice gases.
//!
//! The crate covers four layers of the same physics:
//!
//! * [`lattice`] — finite lattice regions with reservoir boundaries and the
//!   discrete Laplacian every other layer leans on.
//! * [`classical`] — the simple-exclusion and zero-range Markov generators,
//!   realized as exact continuous-time Monte Carlo, as explicit generator
//!   matrices on small configuration spaces, and through closed-form
//!   stationary oracles (moment hierarchy, product measures).
//! * [`quantum`] — truncated Fock spaces and the Lindblad generators whose
//!   restriction to number-diagonal observables reproduces the classical
//!   dynamics, with machine checks for that restriction, gauge covariance,
//!   and stationary-state uniqueness.
//! * [`hydro`] and [`fluct`] — the macroscopic diffusion equation, its
//!   linearization and semigroup, and the statistical machinery for
//!   steady-state fluctuation fields: static/dynamic covariances, long-range
//!   correlation predictions, regression/chaoticity/local-equilibrium test
//!   batteries, and an Ornstein-Uhlenbeck reference process.

pub mod classical;
pub mod error;
pub mod fluct;
pub mod hydro;
pub mod lattice;
pub mod quantum;

pub use error::{Error, Result};
