//! Shared fixtures for the benchmarks.

use starbath_core::{discretize_ohmic_bath, InitialTemperatures, OhmicBathSpec, StarModel};

/// Reference-parameter bath with `n` modes.
pub fn reference_model(n: usize) -> StarModel {
    let spec = OhmicBathSpec {
        eta: 1e-3,
        omega_c: 3e6,
        omega_min: 0.026e6,
        omega_max: 20e6,
        n_modes: n,
    };
    discretize_ohmic_bath(&spec, 4e6).expect("reference parameters are valid")
}

pub fn reference_temperatures() -> InitialTemperatures {
    InitialTemperatures::new(10e-6, 50e-6).expect("positive temperatures")
}
