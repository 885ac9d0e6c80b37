//! Closed-form bath constants against values frozen from the 50-digit
//! script in `tests/oracle/derived_constants.py`.

// Reference values keep every digit printed by the oracle script.
#![allow(clippy::excessive_precision)]

use approx::assert_relative_eq;
use starbath_core::{
    discretize_ohmic_bath, mean_occupation, recurrence_time, relaxation_rate, GkslParams,
    InitialTemperatures, OhmicBathSpec,
};

const OMEGA1: f64 = 4e6;

fn spec(n_modes: usize) -> OhmicBathSpec {
    OhmicBathSpec {
        eta: 1e-3,
        omega_c: 3e6,
        omega_min: 0.026e6,
        omega_max: 20e6,
        n_modes,
    }
}

// (N, Δω [rad/s], t₁ [s])
const SPACINGS: [(usize, f64, f64); 6] = [
    (1000, 19993.993993993993994, 0.00031425363582018658709),
    (2000, 9991.9959979989994997, 0.00062882183984439738497),
    (3000, 6660.2200733577859286, 0.00094339004386860818285),
    (4000, 4994.7486871717929482, 0.0012579582478928189807),
    (6000, 3329.5549258209701617, 0.0018870946559412405765),
    (8000, 2497.0621327665958245, 0.0025162310639896621723),
];
const GAMMA: f64 = 3312.4593304466451775;
const NBAR: f64 = 1.1871116863308127691;
const C1_INITIAL: f64 = 1.0988757583829585447;
const C1_FINAL: f64 = 3.3742233726616255382;

#[test]
fn spacing_and_recurrence_time() {
    for (n, dw, t1) in SPACINGS {
        let s = spec(n);
        let model = discretize_ohmic_bath(&s, OMEGA1).unwrap();
        assert_relative_eq!(s.spacing(), dw, max_relative = 1e-13);
        assert_relative_eq!(model.uniform_spacing().unwrap(), dw, max_relative = 1e-9);
        assert_relative_eq!(recurrence_time(&model).unwrap(), t1, max_relative = 1e-9);
    }
}

#[test]
fn rates_and_coefficients() {
    let s = spec(4000);
    let model = discretize_ohmic_bath(&s, OMEGA1).unwrap();
    let init = InitialTemperatures::new(10e-6, 50e-6).unwrap();
    let p = GkslParams::for_model(&model, &s, &init).unwrap();
    assert_relative_eq!(
        relaxation_rate(&model, &s).unwrap(),
        GAMMA,
        max_relative = 1e-13
    );
    assert_relative_eq!(
        mean_occupation(OMEGA1, 50e-6).unwrap(),
        NBAR,
        max_relative = 1e-13
    );
    assert_relative_eq!(p.initial_coefficient(), C1_INITIAL, max_relative = 1e-13);
    assert_relative_eq!(p.bath_coefficient(), C1_FINAL, max_relative = 1e-13);
    assert_relative_eq!(p.gamma, GAMMA, max_relative = 1e-13);
}

#[test]
fn published_values_to_four_digits() {
    let four = |a: f64, b: f64| assert_relative_eq!(a, b, max_relative = 5e-4);
    four(GAMMA, 3.3125e3);
    four(SPACINGS[3].2 * 1e6, 1258.0);
    four(NBAR, 1.1871);
    four(C1_INITIAL, 1.0989);
    four(C1_FINAL, 3.3742);
}
