//! Exact Gaussian dynamics of a central harmonic oscillator coupled to a
//! bath of oscillators in a star configuration, together with the
//! thermodynamic bookkeeping built on top of it.
//!
//! All quantities are carried in SI units (rad/s, s, K, J). The [`units`]
//! module holds the conversion factors used at the CLI boundary.
//!
//! The crate is organised bottom-up:
//!
//! * [`model`]: Ohmic bath discretization and the star Hamiltonian.
//! * [`arrowhead`]: an `O(n²)` eigensolver for symmetric arrowhead matrices.
//! * [`evolve`]: exact evaluation of the covariance data at arbitrary times,
//!   plus a dense symplectic oracle for small systems.
//! * [`thermo`]: per-oscillator Gibbs observables, fluxes and the total
//!   thermodynamic entropy production rate.
//! * [`gksl`]: the closed-form master-equation reference and the
//!   conventional entropy production.

pub mod arrowhead;
pub mod constants;
pub mod error;
pub mod evolve;
pub mod gksl;
pub mod model;
pub mod thermo;
pub mod units;

pub use constants::{PhysicalConstants, HBAR, KB};
pub use error::{Error, Result};
pub use evolve::{
    coefficient_shifts_at, dense_oracle_at, diagonalize, rates_at, snapshot_at, snapshot_series,
    CovarianceSnapshot, DenseOracle, DenseSymplectic, InitialTemperatures, ModeBasis,
};
pub use gksl::{GkslParams, PivnMode};
pub use model::{
    build_reduced, discretize_ohmic_bath, mean_occupation, recurrence_time, relaxation_rate,
    OhmicBathSpec, ReducedHamiltonian, StarModel,
};
pub use thermo::{EnergyFluxes, OscillatorThermo, ThermoRecord};
