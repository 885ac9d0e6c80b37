//! Thermodynamic observables of Gibbs-form modes.
//!
//! A mode with covariance block `c·I₂` is a thermal state of its local
//! Hamiltonian, so every observable is a function of `c` alone:
//! `E = ħωc/2`, `βħω = ln((c+1)/(c−1))`, `Z = √(c²−1)/2` and
//! `S/k_B = (n̄+1) ln(n̄+1) − n̄ ln n̄` with `n̄ = (c−1)/2`.

use crate::constants::{HBAR, KB};
use crate::error::{Error, Result};
use crate::evolve::CovarianceSnapshot;
use crate::model::StarModel;

/// Coefficients in `[1, 1 + BOUNDARY_WIDTH]` are treated as the `T → 0⁺` limit.
pub const BOUNDARY_WIDTH: f64 = 1e-12;

fn check_physical(c: f64) -> Result<()> {
    if c.is_nan() || c < 1.0 {
        Err(Error::BelowVacuum(c))
    } else {
        Ok(())
    }
}

fn at_boundary(c: f64) -> bool {
    c - 1.0 <= BOUNDARY_WIDTH
}

/// `ln((c+1)/(c−1)) = βħω`.
fn log_ratio(c: f64) -> f64 {
    (2.0 / (c - 1.0)).ln_1p()
}

/// `E = ħωc/2`.
pub fn mean_energy(c: f64, omega: f64) -> Result<f64> {
    check_physical(c)?;
    Ok(0.5 * HBAR * omega * c)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InverseTemperature {
    /// 1/J; infinite at the boundary.
    pub beta: f64,
    /// K; zero at the boundary.
    pub temperature: f64,
    pub at_boundary: bool,
}

/// Inverts `c = coth(ħω/(2k_BT))`.
pub fn inverse_temperature(c: f64, omega: f64) -> Result<InverseTemperature> {
    check_physical(c)?;
    if at_boundary(c) {
        return Ok(InverseTemperature {
            beta: f64::INFINITY,
            temperature: 0.0,
            at_boundary: true,
        });
    }
    let beta = log_ratio(c) / (HBAR * omega);
    Ok(InverseTemperature {
        beta,
        temperature: 1.0 / (KB * beta),
        at_boundary: false,
    })
}

/// `Z = √(c² − 1)/2`; zero at `c = 1`.
pub fn partition_function(c: f64) -> Result<f64> {
    check_physical(c)?;
    Ok(0.5 * ((c - 1.0) * (c + 1.0)).sqrt())
}

/// `F = −k_B T ln Z`.
pub fn free_energy(z: f64, temperature: f64) -> Result<f64> {
    if !(z > 0.0 && temperature > 0.0) || !z.is_finite() {
        return Err(Error::UndefinedFreeEnergy);
    }
    Ok(-KB * temperature * z.ln())
}

/// `F − ħω/2 = k_B T ln(1 − e^{−βħω})`, the free energy measured from the
/// zero-point energy. Equal to [`free_energy`] minus `ħω/2` but without the
/// cancellation that makes the latter lose relative accuracy as `c → 1⁺`.
pub fn excess_free_energy(c: f64, omega: f64) -> Result<f64> {
    let inv = inverse_temperature(c, omega)?;
    if inv.at_boundary {
        return Err(Error::UndefinedFreeEnergy);
    }
    // e^{−βħω} = (c − 1)/(c + 1)
    Ok(KB * inv.temperature * (-(c - 1.0) / (c + 1.0)).ln_1p())
}

/// Entropy in units of `k_B`.
pub fn entropy(c: f64) -> Result<f64> {
    check_physical(c)?;
    if at_boundary(c) {
        return Ok(0.0);
    }
    let n = 0.5 * (c - 1.0);
    Ok((1.0 + n) * n.ln_1p() - n * n.ln())
}

/// Gibbs observables of a single mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorThermo {
    pub omega: f64,
    pub c: f64,
    /// J
    pub energy: f64,
    /// K
    pub temperature: f64,
    /// 1/J
    pub beta: f64,
    pub partition: f64,
    /// J. At the boundary this is the `T → 0⁺` limit `ħω/2`.
    pub free_energy: f64,
    /// J/K
    pub entropy: f64,
    pub at_boundary: bool,
}

impl OscillatorThermo {
    pub fn from_coefficient(c: f64, omega: f64) -> Result<Self> {
        let energy = mean_energy(c, omega)?;
        let inv = inverse_temperature(c, omega)?;
        let partition = partition_function(c)?;
        let free_energy = if inv.at_boundary {
            0.5 * HBAR * omega
        } else {
            free_energy(partition, inv.temperature)?
        };
        Ok(Self {
            omega,
            c,
            energy,
            temperature: inv.temperature,
            beta: inv.beta,
            partition,
            free_energy,
            entropy: KB * entropy(c)?,
            at_boundary: inv.at_boundary,
        })
    }

    pub fn entropy_kb(&self) -> f64 {
        self.entropy / KB
    }
}

/// Time derivatives of the mean energies, J/s.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyFluxes {
    pub system: f64,
    pub per_mode: Vec<f64>,
    pub bath: f64,
    pub interaction: f64,
}

impl EnergyFluxes {
    /// `|dE_A + dE_B + dE_I|` relative to the largest of the three.
    pub fn sum_rule_residual(&self) -> f64 {
        let scale = self
            .system
            .abs()
            .max(self.bath.abs())
            .max(self.interaction.abs());
        if scale == 0.0 {
            return 0.0;
        }
        (self.system + self.bath + self.interaction).abs() / scale
    }
}

fn check_shapes(snapshot: &CovarianceSnapshot, model: &StarModel) -> Result<()> {
    let n = model.n_modes();
    if snapshot.c.len() != n + 1 || snapshot.x.len() != n {
        return Err(Error::ModelMismatch(format!(
            "snapshot has {} modes, model has {}",
            snapshot.x.len(),
            n
        )));
    }
    Ok(())
}

/// `dE_A/dt = ħω₁ Σ g_j x_j`, `dE_j/dt = −ħω_j g_j x_j`,
/// `dE_I/dt = Σ ħ(ω_j − ω₁) g_j x_j`.
pub fn energy_fluxes(snapshot: &CovarianceSnapshot, model: &StarModel) -> Result<EnergyFluxes> {
    check_shapes(snapshot, model)?;
    let w1 = model.omega1();
    let mut system = 0.0;
    let mut interaction = 0.0;
    let per_mode: Vec<f64> = model
        .bath_omegas()
        .iter()
        .zip(model.bath_couplings())
        .zip(&snapshot.x)
        .map(|((w, g), x)| {
            let gx = g * x;
            system += gx;
            interaction += (w - w1) * gx;
            -HBAR * w * gx
        })
        .collect();
    Ok(EnergyFluxes {
        system: HBAR * w1 * system,
        bath: per_mode.iter().sum(),
        per_mode,
        interaction: HBAR * interaction,
    })
}

/// Total thermodynamic entropy production rate, J/(K·s).
pub fn total_epr(snapshot: &CovarianceSnapshot, model: &StarModel) -> Result<f64> {
    check_shapes(snapshot, model)?;
    for (mode, &c) in snapshot.c.iter().enumerate() {
        check_physical(c)?;
        if at_boundary(c) {
            return Err(Error::ZeroTemperatureBoundary { mode, c });
        }
    }
    let system = log_ratio(snapshot.c[0]);
    let sum: f64 = model
        .bath_couplings()
        .iter()
        .zip(&snapshot.x)
        .zip(&snapshot.c[1..])
        .map(|((g, x), c)| g * x * (system - log_ratio(*c)))
        .sum();
    Ok(KB * sum)
}

/// Everything derived from one snapshot relative to the initial one.
#[derive(Debug, Clone, PartialEq)]
pub struct ThermoRecord {
    pub time: f64,
    pub per_oscillator: Vec<OscillatorThermo>,
    /// J/K
    pub s_tot: f64,
    /// J/K, `S_tot(t) − S_tot(0)`.
    pub ds_tot: f64,
    /// J/(K·s)
    pub pi_tot: f64,
    pub fluxes: EnergyFluxes,
}

impl ThermoRecord {
    pub fn system(&self) -> &OscillatorThermo {
        &self.per_oscillator[0]
    }

    pub fn bath(&self) -> &[OscillatorThermo] {
        &self.per_oscillator[1..]
    }
}

pub fn totals(
    snapshot: &CovarianceSnapshot,
    baseline: &CovarianceSnapshot,
    model: &StarModel,
) -> Result<ThermoRecord> {
    check_shapes(snapshot, model)?;
    check_shapes(baseline, model)?;
    if baseline.time != 0.0 {
        return Err(Error::ModelMismatch(format!(
            "baseline must be the t = 0 snapshot, got t = {}",
            baseline.time
        )));
    }
    let per_oscillator = snapshot
        .c
        .iter()
        .enumerate()
        .map(|(m, &c)| OscillatorThermo::from_coefficient(c, model.mode_omega(m)))
        .collect::<Result<Vec<_>>>()?;
    let s_tot = per_oscillator.iter().map(|o| o.entropy).sum();
    let ds_tot = if snapshot.c == baseline.c {
        0.0
    } else {
        // per-mode differences sum more accurately than a difference of sums
        snapshot
            .c
            .iter()
            .zip(&baseline.c)
            .map(|(c, c0)| Ok(entropy(*c)? - entropy(*c0)?))
            .sum::<Result<f64>>()?
            * KB
    };
    Ok(ThermoRecord {
        time: snapshot.time,
        per_oscillator,
        s_tot,
        ds_tot,
        pi_tot: total_epr(snapshot, model)?,
        fluxes: energy_fluxes(snapshot, model)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::thermal_coefficient;
    use approx::assert_relative_eq;

    const W: f64 = 4.0e6;

    #[test]
    fn vacuum_energy() {
        assert_eq!(mean_energy(1.0, W).unwrap(), 0.5 * HBAR * W);
        assert_relative_eq!(
            mean_energy(3.3742, W).unwrap(),
            7.116e-28,
            max_relative = 1e-3
        );
        let slope = mean_energy(2.0, W).unwrap() - mean_energy(1.0, W).unwrap();
        assert_relative_eq!(slope, 0.5 * HBAR * W, max_relative = 1e-14);
        assert!(mean_energy(0.999, W).is_err());
    }

    #[test]
    fn temperature_round_trip() {
        for t in [10e-6, 50e-6, 1e-3, 2e-6] {
            let c = thermal_coefficient(W, t);
            let inv = inverse_temperature(c, W).unwrap();
            assert_relative_eq!(inv.temperature, t, max_relative = 1e-12);
        }
        assert_relative_eq!(
            inverse_temperature(3.3742, W).unwrap().temperature,
            50e-6,
            max_relative = 1e-4
        );
        assert_relative_eq!(
            inverse_temperature(1.0989, W).unwrap().temperature,
            10e-6,
            max_relative = 1e-3
        );
        assert!(
            inverse_temperature(thermal_coefficient(W, 1e-7), W)
                .unwrap()
                .at_boundary
        );
        let edge = inverse_temperature(1.0, W).unwrap();
        assert!(edge.at_boundary && edge.temperature == 0.0);
        assert!(inverse_temperature(1.0 + 1e-6, W).unwrap().temperature < 3e-6);
        assert!(inverse_temperature(0.5, W).is_err());
    }

    #[test]
    fn partition_function_values() {
        assert_relative_eq!(
            partition_function(5f64.sqrt()).unwrap(),
            1.0,
            max_relative = 1e-15
        );
        assert_eq!(partition_function(1.0).unwrap(), 0.0);
        let c = thermal_coefficient(W, 50e-6);
        let z = partition_function(c).unwrap();
        assert_relative_eq!(z, 1.6113, max_relative = 1e-4);
        let x = HBAR * W / (KB * 50e-6);
        let geometric = (-x / 2.0).exp() / (1.0 - (-x).exp());
        assert_relative_eq!(z, geometric, max_relative = 1e-13);
        assert!(free_energy(0.0, 1e-6).is_err());
    }

    #[test]
    fn entropy_values() {
        assert_eq!(entropy(1.0).unwrap(), 0.0);
        assert_relative_eq!(entropy(3.3742).unwrap(), 1.5079, max_relative = 1e-4);
        for c in [1.01, 2.0, 5.0, 50.0] {
            assert!(entropy(c + 1e-6).unwrap() > entropy(c).unwrap());
            let n: f64 = (c - 1.0) / 2.0;
            let von_neumann = (n + 1.0) * (n + 1.0).ln() - n * n.ln();
            assert_relative_eq!(entropy(c).unwrap(), von_neumann, max_relative = 1e-13);
        }
        assert!(entropy(0.9).is_err());
    }

    #[test]
    fn consistency_square() {
        for c in [1.0 + 1e-3, 1.5, 2.0, 3.3742, 10.0, 1e3] {
            let o = OscillatorThermo::from_coefficient(c, W).unwrap();
            let s = (o.energy - o.free_energy) / o.temperature;
            assert_relative_eq!(o.entropy, s, max_relative = 1e-10);
            let excess =
                (HBAR * W * 0.5 * (c - 1.0) - excess_free_energy(c, W).unwrap()) / o.temperature;
            assert_relative_eq!(o.entropy, excess, max_relative = 1e-13);
        }
    }

    #[test]
    fn entropy_slope_is_inverse_temperature() {
        for c in [1.1, 2.0, 3.3742, 8.0] {
            let h = 1e-6 * c;
            let ds = KB * (entropy(c + h).unwrap() - entropy(c - h).unwrap());
            let de = mean_energy(c + h, W).unwrap() - mean_energy(c - h, W).unwrap();
            let t = inverse_temperature(c, W).unwrap().temperature;
            assert_relative_eq!(ds / de, 1.0 / t, max_relative = 1e-6);
        }
    }

    #[test]
    fn fluxes_and_rate_at_rest() {
        let model = StarModel::new(W, vec![3e6, 5e6], vec![1e3, 2e3]).unwrap();
        let snap = CovarianceSnapshot {
            time: 0.0,
            c: vec![1.1, 3.0, 2.0],
            x: vec![0.0, 0.0],
            y: vec![0.0, 0.0],
        };
        let f = energy_fluxes(&snap, &model).unwrap();
        assert_eq!((f.system, f.bath, f.interaction), (0.0, 0.0, 0.0));
        assert_eq!(total_epr(&snap, &model).unwrap(), 0.0);
        let rec = totals(&snap, &snap, &model).unwrap();
        assert_eq!(rec.ds_tot, 0.0);
        assert_eq!(rec.pi_tot, 0.0);
    }

    #[test]
    fn rate_equals_flux_over_temperature() {
        let model = StarModel::new(W, vec![3e6, 3.9e6, 5e6], vec![1e3, 2e3, 1.5e3]).unwrap();
        let snap = CovarianceSnapshot {
            time: 1e-4,
            c: vec![2.1, 3.0, 2.5, 1.7],
            x: vec![0.01, -0.03, 0.002],
            y: vec![0.0; 3],
        };
        let f = energy_fluxes(&snap, &model).unwrap();
        assert!(f.sum_rule_residual() < 1e-14);
        let temps: Vec<f64> = snap
            .c
            .iter()
            .enumerate()
            .map(|(m, c)| {
                inverse_temperature(*c, model.mode_omega(m))
                    .unwrap()
                    .temperature
            })
            .collect();
        let assembled = f.system / temps[0]
            + f.per_mode
                .iter()
                .zip(&temps[1..])
                .map(|(d, t)| d / t)
                .sum::<f64>();
        assert_relative_eq!(
            total_epr(&snap, &model).unwrap(),
            assembled,
            max_relative = 1e-12
        );
    }

    #[test]
    fn boundary_handling() {
        let model = StarModel::new(W, vec![3e6], vec![1e3]).unwrap();
        let snap = CovarianceSnapshot {
            time: 1.0,
            c: vec![1.0, 2.0],
            x: vec![0.1],
            y: vec![0.0],
        };
        assert!(matches!(
            total_epr(&snap, &model),
            Err(Error::ZeroTemperatureBoundary { mode: 0, .. })
        ));
        let o = OscillatorThermo::from_coefficient(1.0, W).unwrap();
        assert!(o.at_boundary);
        assert_eq!(o.entropy, 0.0);
        assert_eq!(o.free_energy, 0.5 * HBAR * W);
    }

    #[test]
    fn shape_mismatch_rejected() {
        let model = StarModel::new(W, vec![3e6, 4e6], vec![1e3, 1e3]).unwrap();
        let snap = CovarianceSnapshot {
            time: 0.0,
            c: vec![1.1, 2.0],
            x: vec![0.0],
            y: vec![0.0],
        };
        assert!(matches!(
            energy_fluxes(&snap, &model),
            Err(Error::ModelMismatch(_))
        ));
    }
}
