//! Property tests over random models and parameters.

use proptest::prelude::*;
use starbath_core::arrowhead::arrowhead_eigh;
use starbath_core::gksl::{gksl_sigma11, von_neumann_epr};
use starbath_core::thermo::{entropy, inverse_temperature, mean_energy, BOUNDARY_WIDTH};
use starbath_core::{
    diagonalize, snapshot_at, DenseOracle, GkslParams, InitialTemperatures, StarModel,
};

/// Star model with sorted, separated bath frequencies in rad/s.
fn star_model(max_n: usize) -> impl Strategy<Value = StarModel> {
    (1..=max_n)
        .prop_flat_map(|n| {
            (
                0.5e6..6e6f64,
                prop::collection::vec(0.5e6..8e6f64, n),
                prop::collection::vec(0.0..0.3e6f64, n),
            )
        })
        .prop_map(|(w1, mut omegas, g)| {
            omegas.sort_by(f64::total_cmp);
            for i in 1..omegas.len() {
                omegas[i] = omegas[i].max(omegas[i - 1] + 1e3);
            }
            StarModel::new(w1, omegas, g).unwrap()
        })
}

fn temperatures() -> impl Strategy<Value = InitialTemperatures> {
    (1e-6..100e-6f64, 1e-6..100e-6f64).prop_map(|(a, b)| InitialTemperatures::new(a, b).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn arrowhead_reconstructs(
        tip in -5.0..5.0f64,
        raw in prop::collection::vec((-5.0..5.0f64, -1.0..1.0f64), 1..40),
    ) {
        let mut raw = raw;
        raw.sort_by(|a, b| a.0.total_cmp(&b.0));
        raw.dedup_by(|a, b| a.0 - b.0 < 1e-9);
        let (poles, arm): (Vec<f64>, Vec<f64>) = raw.into_iter().unzip();
        let e = arrowhead_eigh(tip, &poles, &arm).unwrap();
        let n = e.dimension();
        prop_assert!(e.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        let entry = |i: usize, j: usize| -> f64 {
            match (i, j) {
                (0, 0) => tip,
                (0, j) => arm[j - 1],
                (i, 0) => arm[i - 1],
                (i, j) if i == j => poles[i - 1],
                _ => 0.0,
            }
        };
        for a in 0..n {
            for b in 0..n {
                let mut orth = 0.0;
                let mut rec = 0.0;
                for k in 0..n {
                    orth += e.vector_entry(a, k) * e.vector_entry(b, k);
                    rec += e.vector_entry(a, k) * e.eigenvalues[k] * e.vector_entry(b, k);
                }
                let unit = if a == b { 1.0 } else { 0.0 };
                prop_assert!((orth - unit).abs() < 1e-12);
                prop_assert!((rec - entry(a, b)).abs() < 1e-11);
            }
        }
    }

    #[test]
    fn entropy_increases_with_coefficient(c in 1.0..1e3f64, step in 1e-6..10.0f64) {
        let s = entropy(c).unwrap();
        prop_assert!(s >= 0.0);
        prop_assert!(entropy(c + step).unwrap() > s);
    }

    #[test]
    fn temperature_round_trips(t in 1e-6..1e-3f64, omega in 1e5..1e8f64) {
        let x = starbath_core::PhysicalConstants::CODATA.reduced_energy(omega, t);
        let c = 1.0 / (0.5 * x).tanh();
        prop_assume!(c - 1.0 > BOUNDARY_WIDTH);
        let inv = inverse_temperature(c, omega).unwrap();
        // Storing c as f64 perturbs c − 1 by ε·c; δT/T = δ(c−1)/((c−1)·x).
        let cond = c / ((c - 1.0) * x);
        prop_assert!((inv.temperature - t).abs() <= (4.0 * f64::EPSILON * cond + 1e-13) * t);
        prop_assert!(mean_energy(c, omega).unwrap() > 0.0);
    }

    #[test]
    fn conventional_rate_is_nonnegative(
        gamma in 1.0..1e5f64,
        ta in 1e-6..100e-6f64,
        tb in 1e-6..100e-6f64,
        t in 0.0..5e-3f64,
    ) {
        let p = GkslParams::new(4e6, gamma, ta, tb).unwrap();
        prop_assert!(von_neumann_epr(&p, t).unwrap() >= 0.0);
        let c = gksl_sigma11(&p, t).unwrap();
        let (lo, hi) = {
            let (a, b) = (p.initial_coefficient(), p.bath_coefficient());
            (a.min(b), a.max(b))
        };
        prop_assert!(c >= lo * (1.0 - 1e-15) && c <= hi * (1.0 + 1e-15));
    }

    #[test]
    fn reduced_path_matches_dense_oracle(
        model in star_model(12),
        init in temperatures(),
        t in 0.0..50e-6f64,
    ) {
        let basis = diagonalize(&model).unwrap();
        let fast = snapshot_at(&basis, &init, t).unwrap();
        let slow = DenseOracle::new(&model, &init, 64).unwrap().at(t).unwrap();
        let reference = slow.to_snapshot();
        let scale = fast.c.iter().fold(1.0f64, |a, c| a.max(*c));
        for (a, b) in fast.c.iter().chain(&fast.x).chain(&fast.y)
            .zip(reference.c.iter().chain(&reference.x).chain(&reference.y))
        {
            prop_assert!((a - b).abs() <= 1e-10 * scale, "{a} vs {b}");
        }
        prop_assert!(slow.symplecticity_residual() < 1e-9);
        prop_assert!(slow.uncertainty_min_eigenvalue() > -1e-9);
    }

    #[test]
    fn energy_is_conserved(model in star_model(40), init in temperatures(), t in 0.0..1e-3f64) {
        let basis = diagonalize(&model).unwrap();
        let e0 = snapshot_at(&basis, &init, 0.0).unwrap().total_energy(&model);
        let e = snapshot_at(&basis, &init, t).unwrap().total_energy(&model);
        prop_assert!(((e - e0) / e0).abs() < 1e-12);
    }

    #[test]
    fn coefficients_stay_physical(model in star_model(40), init in temperatures(), t in 0.0..1e-3f64) {
        let basis = diagonalize(&model).unwrap();
        let s = snapshot_at(&basis, &init, t).unwrap();
        for (j, c) in s.c.iter().enumerate() {
            prop_assert!(*c >= 1.0 - 1e-12, "c_{j} = {c}");
        }
        for (j, (x, y)) in s.x.iter().zip(&s.y).enumerate() {
            let bound = (s.c[0] * s.c[j + 1]).sqrt();
            prop_assert!(x.hypot(*y) <= bound * (1.0 + 1e-12));
        }
    }
}
