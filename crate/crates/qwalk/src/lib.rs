//! Density-matrix simulation of the discrete-time quantum walk on the integer
//! line with a measurement-driven coin.
//!
//! Each walk step dephases the coin with a time-dependent retention factor
//! `kappa(t)` and then applies the Hadamard coin flip followed by the
//! coin-conditioned shift. `kappa = 1` leaves the walk unitary (ballistic
//! spreading, variance ~ t^2); `kappa = 0` measures the coin every step
//! (diffusive spreading, variance = t); periodic `kappa(t)` makes the variance
//! oscillate between those envelopes.
//!
//! Module map:
//! - [`numerics`]: Hermitian eigendecomposition and entropy functionals.
//! - [`state`]: joint walker-coin density matrix on a bounded window.
//! - [`schedule`]: the driving function `t -> kappa(t)`.
//! - [`evolution`]: the per-step channel + unitary, and trajectory recording.
//! - [`observables`]: moments, variance, spread, symmetry defect.
//! - [`momentum`]: exact moments from the momentum-space superoperator; the
//!   independent oracle for the position-space engine.
//! - [`asymptotics`]: closed-form long-time constants and distributions.
//! - [`correlations`]: walker-coin mutual information, discord, and
//!   measurement-induced disturbance.
//! - [`verify`]: the acceptance checks run by `qwalk verify` and the
//!   acceptance test suite.

pub mod asymptotics;
pub mod correlations;
pub mod evolution;
pub mod momentum;
pub mod numerics;
pub mod observables;
pub mod schedule;
pub mod state;
pub mod verify;

mod exec;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (max |M - M^dag| = {defect:.3e})")]
    NotHermitian { defect: f64 },

    #[error("trace is {trace:.12}, expected 1")]
    InvalidTrace { trace: f64 },

    #[error("matrix is not positive semi-definite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("invalid probability vector: {detail}")]
    InvalidProbabilities { detail: String },

    #[error("coin amplitudes have norm {norm:.12}, expected 1")]
    UnnormalizedCoin { norm: f64 },

    #[error("dephasing strength {kappa} outside [-1, 1]")]
    KappaOutOfRange { kappa: f64 },

    #[error("step at t = {t} would leave the window (half-width {t_max})")]
    HorizonExceeded { t: usize, t_max: usize },

    #[error("tabulated schedule has {len} entries, queried at t = {t}")]
    ScheduleOutOfRange { t: usize, len: usize },

    #[error("piecewise schedule does not cover t = {t}")]
    ScheduleNotCovered { t: usize },

    #[error("schedule value {value} outside [-1, 1]")]
    ScheduleValueOutOfRange { value: f64 },

    #[error("cannot parse schedule `{input}`: {detail}")]
    ScheduleParse { input: String, detail: String },

    #[error("invalid configuration: {detail}")]
    InvalidConfig { detail: String },

    #[error("eigensolver failed: {detail}")]
    Eigensolver { detail: String },
}

pub type Result<T> = std::result::Result<T, Error>;
