//! Experiment runner for late-time tails of `ψ_tt − ψ_xx + V(x)ψ = 0` with
//! inverse-power potentials.
//!
//! This crate carries everything that touches the outside world on top of
//! the `no_std` numerics in [`taillab_core`]:
//!
//! - [`config`]: the INI-like experiment file grammar and its validation;
//! - [`pipeline`]: the staged run (spectral check, series, inverse Laplace
//!   transform, leapfrog oracle, decay fit) and its reports;
//! - [`output`]: versioned CSV tables, key-value blocks and run records;
//! - [`pool`]: the rayon worker pool capped by `TAILLAB_THREADS`;
//! - [`data`]: seeded random initial data;
//! - [`selfcheck`]: the fast closed-form consistency suite.
#![warn(missing_docs)]

pub mod config;
pub mod data;
pub mod error;
pub mod output;
pub mod pipeline;
pub mod pool;
pub mod selfcheck;

pub use config::{ExperimentConfig, Stage};
pub use error::Failure;
pub use pipeline::{run, RunOutcome};
