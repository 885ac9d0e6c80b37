//! Invariant suites and dense-oracle comparisons, gathered into a report.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use starbath_core::evolve::{coefficient_shifts_at, DenseOracle};
use starbath_core::gksl::{self, epr_difference, gksl_sigma11, GkslParams};
use starbath_core::thermo::{self, excess_free_energy, OscillatorThermo};
use starbath_core::units::{MHZ, MICROSECOND};
use starbath_core::{
    diagonalize, snapshot_at, CovarianceSnapshot, InitialTemperatures, StarModel, HBAR, KB,
};

use crate::config::ExperimentConfig;
use crate::error::Result;
use crate::run::Simulation;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub module: &'static str,
    pub name: &'static str,
    pub measured: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    /// Passes when `measured ≤ tolerance`.
    pub fn at_most(
        module: &'static str,
        name: &'static str,
        measured: f64,
        tolerance: f64,
    ) -> Self {
        Self {
            module,
            name,
            measured,
            tolerance,
            passed: measured <= tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn new(checks: Vec<Check>) -> Self {
        Self {
            passed: checks.iter().all(|c| c.passed),
            checks,
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn find(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Random star model: frequencies in 0.5–8 MHz at least 0.05 MHz apart,
/// couplings up to 0.2 MHz.
pub fn random_model(rng: &mut ChaCha8Rng, n: usize) -> StarModel {
    let mut omegas: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..8.0) * MHZ).collect();
    omegas.sort_by(f64::total_cmp);
    for i in 1..n {
        if omegas[i] - omegas[i - 1] < 0.05 * MHZ {
            omegas[i] = omegas[i - 1] + 0.05 * MHZ;
        }
    }
    let couplings = (0..n).map(|_| rng.gen_range(0.0..0.2) * MHZ).collect();
    StarModel::new(rng.gen_range(1.0..6.0) * MHZ, omegas, couplings).expect("valid random model")
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct OracleStats {
    /// Largest `|Δc_j|`, `|Δx_j|`, `|Δy_j|` between the reduced and dense paths.
    pub max_diff: f64,
    pub symplecticity: f64,
    pub gibbs_block: f64,
    pub cross_block: f64,
}

/// Reduced path against the dense oracle on `models` random models with
/// `1 ≤ N ≤ max_n`, `times` random times each in `[0, 50 μs]`.
pub fn oracle_equivalence(
    seed: u64,
    models: usize,
    max_n: usize,
    times: usize,
    init: &InitialTemperatures,
    cap: usize,
) -> Result<OracleStats> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stats = OracleStats::default();
    for _ in 0..models {
        let n = rng.gen_range(1..=max_n);
        let model = random_model(&mut rng, n);
        let basis = diagonalize(&model)?;
        let oracle = DenseOracle::new(&model, init, cap)?;
        for _ in 0..times {
            let t = rng.gen_range(0.0..50.0) * MICROSECOND;
            let fast = snapshot_at(&basis, init, t)?;
            let dense = oracle.at(t)?;
            let slow = dense.to_snapshot();
            let diff = fast
                .c
                .iter()
                .zip(&slow.c)
                .chain(fast.x.iter().zip(&slow.x))
                .chain(fast.y.iter().zip(&slow.y))
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            stats.max_diff = stats.max_diff.max(diff);
            stats.symplecticity = stats.symplecticity.max(dense.symplecticity_residual());
            stats.gibbs_block = stats.gibbs_block.max(dense.gibbs_block_residual());
            stats.cross_block = stats.cross_block.max(dense.cross_block_residual());
        }
    }
    Ok(stats)
}

/// Largest relative drift of `(ħ/4) Tr(Hσ)` on random models with `N ≤ max_n`.
pub fn oracle_energy_drift(
    seed: u64,
    max_n: usize,
    init: &InitialTemperatures,
    cap: usize,
) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut worst: f64 = 0.0;
    for n in [1, max_n / 4, max_n / 2, max_n]
        .into_iter()
        .filter(|n| *n >= 1)
    {
        let model = random_model(&mut rng, n);
        let oracle = DenseOracle::new(&model, init, cap)?;
        let e0 = oracle.at(0.0)?.total_energy();
        for _ in 0..10 {
            let t = rng.gen_range(0.0..200.0) * MICROSECOND;
            let e = oracle.at(t)?.total_energy();
            worst = worst.max(((e - e0) / e0).abs());
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluxStats {
    /// `|dE_A + dE_B + dE_I| / max(|dE_A|, |dE_B|)` with `dE_I` from `ẏ`.
    pub sum_rule: f64,
    /// Largest `|FD_j − dE_j/dt| / |dE_j/dt|` over bath modes.
    pub finite_difference: f64,
}

/// Flux checks at time `t`. `flip_x` negates every `x_j` before the fluxes
/// are formed.
pub fn flux_checks(sim: &Simulation, t: f64, flip_x: bool) -> Result<FluxStats> {
    let mut snap = sim.snapshot(t)?;
    if flip_x {
        snap.x.iter_mut().for_each(|x| *x = -*x);
    }
    let f = thermo::energy_fluxes(&snap, &sim.model)?;
    let de_i = sim.interaction_rate(t)?;
    let sum_rule = (f.system + f.bath + de_i).abs() / f.system.abs().max(f.bath.abs());

    // five-point central difference of E_j(t) − E_j(0)
    let h = 1e-9;
    let shift = |k: f64| coefficient_shifts_at(&sim.basis, &sim.init, t + k * h);
    let (p2, p1, m1, m2) = (shift(2.0)?, shift(1.0)?, shift(-1.0)?, shift(-2.0)?);
    let finite_difference = (1..=sim.n())
        .map(|j| {
            let e = 0.5 * HBAR * sim.model.mode_omega(j);
            let fd = e * (-p2[j] + 8.0 * p1[j] - 8.0 * m1[j] + m2[j]) / (12.0 * h);
            let flux = f.per_mode[j - 1];
            (fd - flux).abs() / flux.abs()
        })
        .fold(0.0, f64::max);
    Ok(FluxStats {
        sum_rule,
        finite_difference,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct LadderStats {
    /// `c − 1` rungs, descending.
    pub rungs: Vec<f64>,
    pub entropies: Vec<f64>,
    /// Rungs where the entropy fails to decrease towards `c = 1`.
    pub monotonicity_violations: usize,
    /// Largest `|S − (E − F)/T| / S`, energies from the zero-point.
    pub consistency: f64,
}

/// Entropy and Gibbs consistency along `c − 1 = 10^k`, `k` from 0 to −10.
pub fn third_law_ladder(omega: f64, points: usize) -> Result<LadderStats> {
    // the representable c − 1, not the nominal power of ten
    let rungs: Vec<f64> = (0..points)
        .map(|i| (1.0 + 10f64.powf(-10.0 * i as f64 / (points - 1) as f64)) - 1.0)
        .collect();
    let mut entropies = Vec::with_capacity(points);
    let mut consistency: f64 = 0.0;
    for &d in &rungs {
        let c = 1.0 + d;
        let o = OscillatorThermo::from_coefficient(c, omega)?;
        let excess_energy = 0.5 * HBAR * omega * (c - 1.0);
        let s = (excess_energy - excess_free_energy(c, omega)?) / o.temperature;
        consistency = consistency.max((o.entropy - s).abs() / o.entropy);
        entropies.push(o.entropy_kb());
    }
    let monotonicity_violations = entropies.windows(2).filter(|w| !(w[1] < w[0])).count();
    Ok(LadderStats {
        rungs,
        entropies,
        monotonicity_violations,
        consistency,
    })
}

/// `−min Π^vN / k_B` over `grid`, clamped at zero.
pub fn pivn_negativity(p: &GkslParams, grid: &[f64]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &t in grid {
        worst = worst.max(-gksl::von_neumann_epr(p, t)? / KB);
    }
    Ok(worst)
}

/// `|(Π^vN − Π_tot) − Σ_j (1/T_B⁰ − 1/T_j) dE_j/dt|`, with `Π^vN` in its
/// flux form, relative to the largest of the three rates.
pub fn epr_identity(sim: &Simulation, times: &[f64]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &t in times {
        let rec = sim.record(&sim.snapshot(t)?)?;
        let pv = gksl::von_neumann_epr_from_fluxes(&rec, &sim.params)?;
        let d = epr_difference(&rec, &sim.params)?;
        let scale = pv.abs().max(rec.pi_tot.abs()).max(d.abs());
        if scale > 0.0 {
            worst = worst.max(((pv - rec.pi_tot) - d).abs() / scale);
        }
    }
    Ok(worst)
}

/// Violations of monotone approach of the GKSL coefficient to `c_B`.
pub fn gksl_monotonicity(p: &GkslParams, grid: &[f64]) -> Result<usize> {
    let values: Vec<f64> = grid
        .iter()
        .map(|&t| gksl_sigma11(p, t))
        .collect::<Result<_, _>>()?;
    let rising = p.initial_coefficient() <= p.bath_coefficient();
    Ok(values
        .windows(2)
        .filter(|w| if rising { w[1] < w[0] } else { w[1] > w[0] })
        .count())
}

fn zero_snapshot_energy(sim: &Simulation, t: f64) -> Result<f64> {
    let e0 = CovarianceSnapshot::initial(&sim.model, &sim.init).total_energy(&sim.model);
    let e = sim.snapshot(t)?.total_energy(&sim.model);
    Ok(((e - e0) / e0).abs())
}

/// Runs every suite. Tolerances follow the documented invariants.
pub fn run_validate(cfg: &ExperimentConfig) -> Result<ValidationReport> {
    cfg.validate()?;
    let init = cfg.initial_temperatures()?;
    let opts = &cfg.validate;
    let mut checks = Vec::new();

    let oracle = oracle_equivalence(opts.seed, 10, 16, 20, &init, cfg.oracle_cap)?;
    checks.push(Check::at_most(
        "evolve",
        "oracle_max_abs_diff",
        oracle.max_diff,
        1e-9,
    ));
    checks.push(Check::at_most(
        "evolve",
        "oracle_symplecticity",
        oracle.symplecticity,
        1e-9,
    ));
    checks.push(Check::at_most(
        "evolve",
        "oracle_gibbs_block",
        oracle.gibbs_block,
        1e-10,
    ));
    checks.push(Check::at_most(
        "evolve",
        "oracle_cross_block",
        oracle.cross_block,
        1e-10,
    ));
    let drift = oracle_energy_drift(opts.seed, 32.min(cfg.oracle_cap), &init, cfg.oracle_cap)?;
    checks.push(Check::at_most(
        "evolve",
        "oracle_energy_conservation",
        drift,
        1e-9,
    ));

    let sim = Simulation::new(cfg.bath_spec(512), cfg.omega1(), init)?;
    checks.push(Check::at_most(
        "evolve",
        "reduced_energy_conservation",
        zero_snapshot_energy(&sim, 100.0 * MICROSECOND)?,
        1e-9,
    ));
    checks.push(Check::at_most(
        "evolve",
        "basis_orthonormality",
        sim.basis.orthonormality_residual(),
        1e-10,
    ));
    let flux = flux_checks(&sim, 100.0 * MICROSECOND, opts.inject_x_sign_flip)?;
    checks.push(Check::at_most(
        "thermo",
        "flux_sum_rule",
        flux.sum_rule,
        1e-12,
    ));
    checks.push(Check::at_most(
        "thermo",
        "flux_finite_difference",
        flux.finite_difference,
        1e-6,
    ));

    let ladder = third_law_ladder(cfg.omega1(), 41)?;
    checks.push(Check::at_most(
        "thermo",
        "third_law_monotone",
        ladder.monotonicity_violations as f64,
        0.0,
    ));
    checks.push(Check::at_most(
        "thermo",
        "third_law_limit",
        thermo::entropy(1.0)?,
        0.0,
    ));
    checks.push(Check::at_most(
        "thermo",
        "gibbs_consistency",
        ladder.consistency,
        1e-10,
    ));

    let grid = cfg.grid_seconds()?;
    checks.push(Check::at_most(
        "gksl",
        "pivn_nonnegative",
        pivn_negativity(&sim.params, &grid)?,
        1e-15,
    ));
    checks.push(Check::at_most(
        "gksl",
        "sigma11_monotone",
        gksl_monotonicity(&sim.params, &grid)? as f64,
        0.0,
    ));
    let times: Vec<f64> = (1..=10).map(|i| i as f64 * 20.0 * MICROSECOND).collect();
    checks.push(Check::at_most(
        "gksl",
        "epr_difference_identity",
        epr_identity(&sim, &times)?,
        1e-10,
    ));

    Ok(ValidationReport::new(checks))
}
