//! Closed-form GKSL reference dynamics of the system mode and the
//! conventional entropy production built on the fixed bath temperature.
//!
//! Under the damped-oscillator master equation the system stays Gibbsian with
//! `c₁(t) = c_A e^{−2Γt} + c_B (1 − e^{−2Γt})`.

use crate::constants::{thermal_coefficient, HBAR, KB};
use crate::error::{invalid, Error, Result};
use crate::evolve::InitialTemperatures;
use crate::model::{relaxation_rate, OhmicBathSpec, StarModel};
use crate::thermo::{inverse_temperature, ThermoRecord, BOUNDARY_WIDTH};

/// Which system coefficient feeds the conventional rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PivnMode {
    /// `c₁(t)` from the closed-form GKSL solution.
    #[default]
    Gksl,
    /// `c₁(t)` from the exact unitary evolution.
    Exact,
}

impl std::str::FromStr for PivnMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gksl" => Ok(Self::Gksl),
            "exact" => Ok(Self::Exact),
            other => Err(invalid(
                "pivn_mode",
                format!("expected gksl or exact, got {other:?}"),
            )),
        }
    }
}

impl std::fmt::Display for PivnMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Gksl => "gksl",
            Self::Exact => "exact",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GkslParams {
    /// rad/s
    pub omega1: f64,
    /// 1/s
    pub gamma: f64,
    /// K
    pub t_a0: f64,
    /// K
    pub t_b0: f64,
}

impl GkslParams {
    pub fn new(omega1: f64, gamma: f64, t_a0: f64, t_b0: f64) -> Result<Self> {
        let p = Self {
            omega1,
            gamma,
            t_a0,
            t_b0,
        };
        p.validate()?;
        Ok(p)
    }

    /// Parameters matching a discretized bath: `Γ` from the spectral density at `ω₁`.
    pub fn for_model(
        model: &StarModel,
        spec: &OhmicBathSpec,
        init: &InitialTemperatures,
    ) -> Result<Self> {
        Self::new(
            model.omega1(),
            relaxation_rate(model, spec)?,
            init.t_a0,
            init.t_b0,
        )
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega1.is_finite() && self.omega1 > 0.0) {
            return Err(invalid("omega1", "must be positive"));
        }
        if !(self.gamma.is_finite() && self.gamma >= 0.0) {
            return Err(invalid("gamma", "must be non-negative"));
        }
        if !(self.t_a0.is_finite() && self.t_a0 > 0.0) {
            return Err(invalid("t_a0", "must be positive"));
        }
        if !(self.t_b0.is_finite() && self.t_b0 > 0.0) {
            return Err(invalid("t_b0", "must be positive"));
        }
        Ok(())
    }

    pub fn initial_coefficient(&self) -> f64 {
        thermal_coefficient(self.omega1, self.t_a0)
    }

    pub fn bath_coefficient(&self) -> f64 {
        thermal_coefficient(self.omega1, self.t_b0)
    }
}

fn check_time(t: f64) -> Result<()> {
    if t.is_finite() && t >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidTime(t))
    }
}

/// `c₁(t)` of the GKSL solution.
pub fn gksl_sigma11(p: &GkslParams, t: f64) -> Result<f64> {
    check_time(t)?;
    let decay = (-2.0 * p.gamma * t).exp();
    Ok(p.initial_coefficient() * decay + p.bath_coefficient() * (1.0 - decay))
}

/// System temperature of the GKSL solution, K.
pub fn gksl_temperature(p: &GkslParams, t: f64) -> Result<f64> {
    Ok(inverse_temperature(gksl_sigma11(p, t)?, p.omega1)?.temperature)
}

/// `ħω₁(1/T − 1/T_B⁰) = ln((c+1)/(c−1))` in the coefficient variable.
fn log_ratio(c: f64) -> f64 {
    (2.0 / (c - 1.0)).ln_1p()
}

/// `Π^vN = ħω₁Γ (1/T_B⁰ − 1/T_A)(c_A − c_B)` for a given system coefficient,
/// J/(K·s). Written as `k_B Γ (L_B − L_A)(c_A − c_B)` with `L = ln((c+1)/(c−1))`;
/// both factors share a sign, so the rate is non-negative.
pub fn von_neumann_epr_from_coefficient(p: &GkslParams, c_a: f64) -> Result<f64> {
    p.validate()?;
    if c_a.is_nan() || c_a < 1.0 {
        return Err(Error::BelowVacuum(c_a));
    }
    if c_a - 1.0 <= BOUNDARY_WIDTH {
        return Err(Error::ZeroTemperatureBoundary { mode: 0, c: c_a });
    }
    let c_b = p.bath_coefficient();
    Ok(KB * p.gamma * (log_ratio(c_b) - log_ratio(c_a)) * (c_a - c_b))
}

/// Conventional rate with the GKSL system coefficient.
pub fn von_neumann_epr(p: &GkslParams, t: f64) -> Result<f64> {
    von_neumann_epr_from_coefficient(p, gksl_sigma11(p, t)?)
}

/// Conventional rate at `t` in the selected mode; `exact_c1` is used only in
/// [`PivnMode::Exact`].
pub fn von_neumann_epr_with(p: &GkslParams, mode: PivnMode, t: f64, exact_c1: f64) -> Result<f64> {
    match mode {
        PivnMode::Gksl => von_neumann_epr(p, t),
        PivnMode::Exact => {
            check_time(t)?;
            von_neumann_epr_from_coefficient(p, exact_c1)
        }
    }
}

/// `(1/T_A) dE_A/dt + (1/T_B⁰) dE_B/dt` evaluated on exact fluxes. Equals the
/// conventional rate once `dE_B/dt = −dE_A/dt` and the Markovian flux are substituted.
pub fn von_neumann_epr_from_fluxes(record: &ThermoRecord, p: &GkslParams) -> Result<f64> {
    let sys = record.system();
    if sys.at_boundary {
        return Err(Error::ZeroTemperatureBoundary { mode: 0, c: sys.c });
    }
    Ok(KB * sys.beta * record.fluxes.system + record.fluxes.bath / p.t_b0)
}

fn check_series(series: &[ThermoRecord]) -> Result<&ThermoRecord> {
    match series.first() {
        Some(first) if first.time == 0.0 => Ok(first),
        Some(first) => Err(Error::ModelMismatch(format!(
            "series must start at t = 0, got t = {}",
            first.time
        ))),
        None => Err(invalid("series", "must not be empty")),
    }
}

/// `ΔS^vN(t) = S_A(t) − S_A(0) − (E_A(t) − E_A(0))/T_B⁰`, J/K.
pub fn von_neumann_ep_between(
    p: &GkslParams,
    baseline: &ThermoRecord,
    record: &ThermoRecord,
) -> f64 {
    let (a0, a) = (baseline.system(), record.system());
    let de = 0.5 * HBAR * a.omega * (a.c - a0.c);
    a.entropy - a0.entropy - de / p.t_b0
}

/// [`von_neumann_ep_between`] for every record of a series starting at `t = 0`.
pub fn von_neumann_ep(p: &GkslParams, series: &[ThermoRecord]) -> Result<Vec<f64>> {
    let first = check_series(series)?;
    Ok(series
        .iter()
        .map(|r| von_neumann_ep_between(p, first, r))
        .collect())
}

/// `Π^vN − Π_tot = Σ_j (1/T_B⁰ − 1/T_j) dE_j/dt` over bath modes, J/(K·s).
pub fn epr_difference(record: &ThermoRecord, p: &GkslParams) -> Result<f64> {
    let inv_tb = 1.0 / p.t_b0;
    record
        .bath()
        .iter()
        .zip(&record.fluxes.per_mode)
        .enumerate()
        .map(|(j, (o, de))| {
            if o.at_boundary {
                Err(Error::ZeroTemperatureBoundary {
                    mode: j + 1,
                    c: o.c,
                })
            } else {
                Ok((inv_tb - KB * o.beta) * de)
            }
        })
        .sum()
}

/// `ΔS^vN − ΔS_tot = (E_A(0) − E_A(t))/T_B⁰ + Σ_j (S_j(0) − S_j(t))`, J/K.
pub fn ep_difference_between(
    p: &GkslParams,
    baseline: &ThermoRecord,
    record: &ThermoRecord,
) -> Result<f64> {
    if baseline.per_oscillator.len() != record.per_oscillator.len() {
        return Err(Error::ModelMismatch(format!(
            "record at t = {} has {} oscillators, expected {}",
            record.time,
            record.per_oscillator.len(),
            baseline.per_oscillator.len()
        )));
    }
    let (a0, a) = (baseline.system(), record.system());
    let de = 0.5 * HBAR * a.omega * (a0.c - a.c);
    let ds: f64 = baseline
        .bath()
        .iter()
        .zip(record.bath())
        .map(|(s0, s)| s0.entropy - s.entropy)
        .sum();
    Ok(de / p.t_b0 + ds)
}

/// [`ep_difference_between`] for every record of a series starting at `t = 0`.
pub fn ep_difference(p: &GkslParams, series: &[ThermoRecord]) -> Result<Vec<f64>> {
    let first = check_series(series)?;
    series
        .iter()
        .map(|r| ep_difference_between(p, first, r))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::{MHZ, MICROKELVIN};
    use approx::assert_relative_eq;

    fn reference() -> GkslParams {
        GkslParams::new(4.0 * MHZ, 3312.5, 10.0 * MICROKELVIN, 50.0 * MICROKELVIN).unwrap()
    }

    #[test]
    fn closed_form_values() {
        let p = reference();
        assert_relative_eq!(gksl_sigma11(&p, 0.0).unwrap(), 1.0989, max_relative = 1e-4);
        assert_relative_eq!(gksl_sigma11(&p, 1.0).unwrap(), 3.3742, max_relative = 1e-4);
        let tau = 0.5 / p.gamma;
        assert_relative_eq!(gksl_sigma11(&p, tau).unwrap(), 2.5371, max_relative = 1e-4);
        assert!(gksl_sigma11(&p, -1.0).is_err());
    }

    #[test]
    fn monotone_towards_bath() {
        let p = reference();
        let mut prev = gksl_sigma11(&p, 0.0).unwrap();
        for i in 1..200 {
            let c = gksl_sigma11(&p, i as f64 * 1e-5).unwrap();
            assert!(c >= prev && c <= p.bath_coefficient());
            prev = c;
        }
    }

    #[test]
    fn initial_rate() {
        let p = reference();
        let rate = von_neumann_epr(&p, 0.0).unwrap() / KB;
        assert_relative_eq!(rate, 1.8422e4, max_relative = 1e-3);
    }

    #[test]
    fn rate_vanishes_at_equilibrium() {
        let p = GkslParams::new(4.0 * MHZ, 3312.5, 50.0 * MICROKELVIN, 50.0 * MICROKELVIN).unwrap();
        assert_eq!(von_neumann_epr(&p, 0.0).unwrap(), 0.0);
        // c₁(t) reproduces c_B only up to rounding
        assert!(von_neumann_epr(&p, 1e-3).unwrap().abs() < 1e-40);
    }

    #[test]
    fn rate_matches_temperature_form() {
        let p = reference();
        for t in [0.0, 1e-4, 4e-4, 1e-3] {
            let ta = gksl_temperature(&p, t).unwrap();
            let c = gksl_sigma11(&p, t).unwrap();
            let direct =
                HBAR * p.omega1 * p.gamma * (1.0 / p.t_b0 - 1.0 / ta) * (c - p.bath_coefficient());
            assert_relative_eq!(von_neumann_epr(&p, t).unwrap(), direct, max_relative = 1e-9);
        }
    }

    #[test]
    fn rate_is_nonnegative_when_system_is_hotter() {
        let p = GkslParams::new(4.0 * MHZ, 100.0, 80.0 * MICROKELVIN, 5.0 * MICROKELVIN).unwrap();
        for i in 0..50 {
            assert!(von_neumann_epr(&p, i as f64 * 1e-3).unwrap() >= 0.0);
        }
    }

    #[test]
    fn modes_select_coefficient() {
        let p = reference();
        let g = von_neumann_epr_with(&p, PivnMode::Gksl, 1e-4, 99.0).unwrap();
        assert_eq!(g, von_neumann_epr(&p, 1e-4).unwrap());
        let e = von_neumann_epr_with(&p, PivnMode::Exact, 1e-4, 2.0).unwrap();
        assert_eq!(e, von_neumann_epr_from_coefficient(&p, 2.0).unwrap());
        assert!(von_neumann_epr_from_coefficient(&p, 1.0).is_err());
        assert_eq!("exact".parse::<PivnMode>().unwrap(), PivnMode::Exact);
        assert!("lindblad".parse::<PivnMode>().is_err());
        assert_eq!(PivnMode::default().to_string(), "gksl");
    }

    #[test]
    fn rejects_bad_params() {
        assert!(GkslParams::new(4e6, -1.0, 1e-5, 1e-5).is_err());
        assert!(GkslParams::new(4e6, 1.0, 0.0, 1e-5).is_err());
        assert!(GkslParams::new(0.0, 1.0, 1e-5, 1e-5).is_err());
    }
}
