//! One bath size, diagonalized once, evaluated at any number of times.

use rayon::prelude::*;
use serde::Serialize;
use starbath_core::evolve::rates_at;
use starbath_core::gksl::{
    self, ep_difference_between, epr_difference, gksl_sigma11, von_neumann_ep_between,
};
use starbath_core::thermo::{self, inverse_temperature};
use starbath_core::units::{MHZ, MICROSECOND};
use starbath_core::{
    diagonalize, discretize_ohmic_bath, mean_occupation, recurrence_time, relaxation_rate,
    snapshot_at, CovarianceSnapshot, GkslParams, InitialTemperatures, ModeBasis, OhmicBathSpec,
    PivnMode, StarModel, ThermoRecord, HBAR,
};

use crate::config::ExperimentConfig;
use crate::error::Result;

/// Closed-form constants of a discretized bath.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivedConstants {
    pub n: usize,
    /// rad/s
    pub delta_omega: f64,
    /// 1/s
    pub gamma: f64,
    /// s
    pub t1: f64,
    pub nbar: f64,
    pub c1_initial: f64,
    pub c1_final: f64,
}

impl DerivedConstants {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "delta_omega_mhz": self.delta_omega / MHZ,
            "gamma_per_s": self.gamma,
            "t1_us": self.t1 / MICROSECOND,
            "nbar": self.nbar,
            "c1_initial": self.c1_initial,
            "c1_final": self.c1_final,
        })
    }
}

/// Temperature and flux of one bath mode at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeSample {
    pub j: usize,
    /// rad/s
    pub omega: f64,
    /// K
    pub temperature: f64,
    /// J/s
    pub flux: f64,
}

/// Every scalar reported per output time, SI units.
#[derive(Debug, Clone, PartialEq)]
pub struct Observables {
    pub time: f64,
    pub c1_exact: f64,
    pub c1_gksl: f64,
    pub t_a: f64,
    pub t_a_gksl: f64,
    pub t_bath_min: f64,
    pub t_bath_max: f64,
    pub s_tot: f64,
    pub ds_tot: f64,
    pub pi_tot: f64,
    pub pi_vn: f64,
    pub ds_vn: f64,
    /// `Π^vN − Π_tot` from the per-mode difference formula.
    pub epr_difference: f64,
    /// `ΔS^vN − ΔS_tot`
    pub ep_difference: f64,
    pub de_a: f64,
    pub de_b: f64,
    pub de_i: f64,
    pub e_i: f64,
    pub modes: Vec<ModeSample>,
}

pub struct Simulation {
    pub spec: OhmicBathSpec,
    pub model: StarModel,
    pub basis: ModeBasis,
    pub init: InitialTemperatures,
    pub params: GkslParams,
    pub initial: CovarianceSnapshot,
    pub baseline: ThermoRecord,
    pub derived: DerivedConstants,
}

impl Simulation {
    pub fn new(spec: OhmicBathSpec, omega1: f64, init: InitialTemperatures) -> Result<Self> {
        let model = discretize_ohmic_bath(&spec, omega1)?;
        let basis = diagonalize(&model)?;
        let params = GkslParams::for_model(&model, &spec, &init)?;
        let initial = CovarianceSnapshot::initial(&model, &init);
        let baseline = thermo::totals(&initial, &initial, &model)?;
        let derived = DerivedConstants {
            n: spec.n_modes,
            delta_omega: spec.spacing(),
            gamma: relaxation_rate(&model, &spec)?,
            t1: recurrence_time(&model)?,
            nbar: mean_occupation(omega1, init.t_b0)?,
            c1_initial: params.initial_coefficient(),
            c1_final: params.bath_coefficient(),
        };
        Ok(Self {
            spec,
            model,
            basis,
            init,
            params,
            initial,
            baseline,
            derived,
        })
    }

    pub fn from_config(cfg: &ExperimentConfig, n: usize) -> Result<Self> {
        Self::new(cfg.bath_spec(n), cfg.omega1(), cfg.initial_temperatures()?)
    }

    pub fn n(&self) -> usize {
        self.model.n_modes()
    }

    pub fn snapshot(&self, t: f64) -> Result<CovarianceSnapshot> {
        Ok(snapshot_at(&self.basis, &self.init, t)?)
    }

    pub fn record(&self, snapshot: &CovarianceSnapshot) -> Result<ThermoRecord> {
        Ok(thermo::totals(snapshot, &self.initial, &self.model)?)
    }

    /// `dE_I/dt = ħ Σ g_j ẏ_j` from the exact rate kernel, independent of `x_j`.
    pub fn interaction_rate(&self, t: f64) -> Result<f64> {
        let rates = rates_at(&self.basis, &self.init, t)?;
        Ok(HBAR
            * self
                .model
                .bath_couplings()
                .iter()
                .zip(&rates.y)
                .map(|(g, y)| g * y)
                .sum::<f64>())
    }

    /// Bath modes with `|ω_j − ω₁| ≤ half_width`, 1-based like the snapshot.
    pub fn window(&self, half_width: f64) -> Vec<usize> {
        let w1 = self.model.omega1();
        (1..=self.n())
            .filter(|&j| (self.model.mode_omega(j) - w1).abs() <= half_width)
            .collect()
    }

    pub fn observables(&self, t: f64, mode: PivnMode, window: &[usize]) -> Result<Observables> {
        let snap = self.snapshot(t)?;
        self.observables_from(&snap, mode, window)
    }

    pub fn observables_from(
        &self,
        snap: &CovarianceSnapshot,
        mode: PivnMode,
        window: &[usize],
    ) -> Result<Observables> {
        let t = snap.time;
        let rec = self.record(snap)?;
        let p = &self.params;
        let c1_gksl = gksl_sigma11(p, t)?;
        let (t_bath_min, t_bath_max) = rec
            .bath()
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), o| {
                (lo.min(o.temperature), hi.max(o.temperature))
            });
        let modes = window
            .iter()
            .map(|&j| ModeSample {
                j,
                omega: self.model.mode_omega(j),
                temperature: rec.per_oscillator[j].temperature,
                flux: rec.fluxes.per_mode[j - 1],
            })
            .collect();
        Ok(Observables {
            time: t,
            c1_exact: snap.c[0],
            c1_gksl,
            t_a: rec.system().temperature,
            t_a_gksl: inverse_temperature(c1_gksl, p.omega1)?.temperature,
            t_bath_min,
            t_bath_max,
            s_tot: rec.s_tot,
            ds_tot: rec.ds_tot,
            pi_tot: rec.pi_tot,
            pi_vn: gksl::von_neumann_epr_with(p, mode, t, snap.c[0])?,
            ds_vn: von_neumann_ep_between(p, &self.baseline, &rec),
            epr_difference: epr_difference(&rec, p)?,
            ep_difference: ep_difference_between(p, &self.baseline, &rec)?,
            de_a: rec.fluxes.system,
            de_b: rec.fluxes.bath,
            de_i: rec.fluxes.interaction,
            e_i: snap.interaction_energy(&self.model),
            modes,
        })
    }

    /// Observables on a grid of times (s), evaluated in parallel, in grid order.
    pub fn series(
        &self,
        grid: &[f64],
        mode: PivnMode,
        window: &[usize],
    ) -> Result<Vec<Observables>> {
        grid.par_iter()
            .map(|&t| self.observables(t, mode, window))
            .collect()
    }

    /// `ΔS^vN − ΔS_tot` at the given times (s).
    pub fn ep_differences(&self, times: &[f64]) -> Result<Vec<f64>> {
        times
            .par_iter()
            .map(|&t| {
                let rec = self.record(&self.snapshot(t)?)?;
                Ok(ep_difference_between(&self.params, &self.baseline, &rec)?)
            })
            .collect()
    }
}

/// Warnings for grid points past the first recurrence time of each bath.
pub fn recurrence_warnings(grid: &[f64], derived: &[DerivedConstants]) -> Vec<String> {
    derived
        .iter()
        .filter_map(|d| {
            let beyond = grid.iter().filter(|&&t| t > d.t1).count();
            (beyond > 0).then(|| {
                format!(
                    "N={}: {beyond} grid point(s) lie beyond t1 = 2pi/delta_omega = {:.1} us, \
                     where the bath phases realign and recurrence-like behavior sets in",
                    d.n,
                    d.t1 / MICROSECOND
                )
            })
        })
        .collect()
}

/// Least-squares line `y = slope·x + intercept` and its `R²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

pub fn linear_fit(x: &[f64], y: &[f64]) -> Option<LinearFit> {
    let n = x.len();
    if n < 2 || y.len() != n {
        return None;
    }
    let mx = x.iter().sum::<f64>() / n as f64;
    let my = y.iter().sum::<f64>() / n as f64;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|v| (v - my).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 {
        1.0
    } else {
        sxy * sxy / (sxx * syy)
    };
    Some(LinearFit {
        slope,
        intercept,
        r2,
    })
}
