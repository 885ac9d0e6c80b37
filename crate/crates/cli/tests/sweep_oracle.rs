//! N sweep at 400 μs against a dense numpy evaluation
//! (`tests/oracle/ep_difference.py`).

// Reference values keep every digit printed by the oracle script.
#![allow(clippy::excessive_precision)]

use starbath_cli::{ExperimentConfig, Simulation};
use starbath_core::KB;

// (N, ΔS^vN − ΔS_tot [k_B], c₁)
const DENSE: [(usize, f64, f64); 4] = [
    (1000, 1.520224055260989e-01, 2.824474307305428e+00),
    (2000, 9.253973171318430e-02, 3.216143799806785e+00),
    (3000, 5.633024119905117e-02, 3.216143149287792e+00),
    (4000, 4.009340018400254e-02, 3.216142805939897e+00),
];

#[test]
fn ep_difference_matches_dense_evaluation() {
    let cfg = ExperimentConfig::default();
    for (n, diff, c1) in DENSE {
        let sim = Simulation::from_config(&cfg, n).unwrap();
        let t = 400e-6;
        let got = sim.ep_differences(&[t]).unwrap()[0] / KB;
        let c = sim.snapshot(t).unwrap().c[0];
        assert!(((got - diff) / diff).abs() < 1e-7, "N={n}: {got} vs {diff}");
        assert!(((c - c1) / c1).abs() < 1e-11, "N={n}: {c} vs {c1}");
    }
}
