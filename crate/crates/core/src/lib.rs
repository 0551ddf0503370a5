//! A bivariate AR(1) structural causal model and its exact coarse-grainings.
//!
//! The micro model is the two-equation linear process of [`process`]:
//! `X` drives itself and `Y`, `Y` drives only itself. Everything else in
//! the crate is about what survives aggregation:
//!
//! * [`process`] gives the closed-form stationary law, the observational
//!   regression slope, and the interventional law of `Y` under clamped `X`.
//!   The two slopes differ; regression does not measure intervention.
//! * [`kernel`] builds the operator calculus (shifts, truncated geometric
//!   inverses) used to coarse-grain in time.
//! * [`macro_vars`] forms macro-variables `X_f`, `Y_g` and verifies that a
//!   compatible kernel pair turns the micro model into a one-step macro
//!   model with slope one, including under interventions.
//! * [`frequency`] specializes the kernels to windowed waves, where the
//!   macro model becomes diagonal: one complex gain and one noise floor
//!   per frequency, with explicit finite-window error bounds.
//! * [`stats`] is the Monte Carlo harness used to check all of the above
//!   against simulation, with honest standard errors and explicit verdicts.
//!
//! Determinism: every sampling operation takes a `u64` seed and uses
//! counter-mode RNG streams per replica, so results are reproducible
//! bit-for-bit across runs and thread counts.

pub mod error;
pub mod frequency;
pub mod kernel;
pub mod macro_vars;
pub mod process;
pub mod rng;
pub mod stats;

pub use error::{Error, Result};
