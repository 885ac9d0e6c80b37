//! Experiment configuration. Values are given in MHz, μs and μK and converted
//! to SI on use.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use starbath_core::units::{MHZ, MICROKELVIN, MICROSECOND};
use starbath_core::{InitialTemperatures, OhmicBathSpec, PivnMode};

use crate::error::HarnessError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum JobKind {
    Simulate,
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    SweepN,
    Validate,
}

impl JobKind {
    /// Bath sizes used when the config names none.
    pub fn default_sizes(self) -> Vec<usize> {
        match self {
            Self::Fig1 | Self::Fig5 => vec![4000, 6000, 8000],
            Self::Fig3 => vec![1000, 2000, 4000],
            Self::Fig6 | Self::SweepN => vec![1000, 2000, 3000, 4000],
            Self::Simulate | Self::Fig2 | Self::Fig4 | Self::Validate => vec![4000],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Simulate => "simulate",
            Self::Fig1 => "fig1",
            Self::Fig2 => "fig2",
            Self::Fig3 => "fig3",
            Self::Fig4 => "fig4",
            Self::Fig5 => "fig5",
            Self::Fig6 => "fig6",
            Self::SweepN => "sweep-n",
            Self::Validate => "validate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum PivnChoice {
    #[default]
    Gksl,
    Exact,
}

impl From<PivnChoice> for PivnMode {
    fn from(c: PivnChoice) -> Self {
        match c {
            PivnChoice::Gksl => PivnMode::Gksl,
            PivnChoice::Exact => PivnMode::Exact,
        }
    }
}

/// Output times in μs: either a uniform grid or an explicit list.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub start_us: Option<f64>,
    pub end_us: Option<f64>,
    pub points: Option<usize>,
    pub times_us: Option<Vec<f64>>,
}

impl GridSpec {
    pub const DEFAULT_START_US: f64 = 0.0;
    pub const DEFAULT_END_US: f64 = 1200.0;
    pub const DEFAULT_POINTS: usize = 121;

    pub fn uniform(start_us: f64, end_us: f64, points: usize) -> Self {
        Self {
            start_us: Some(start_us),
            end_us: Some(end_us),
            points: Some(points),
            times_us: None,
        }
    }

    /// `start:end:points` in μs.
    pub fn parse(s: &str) -> Result<Self, HarnessError> {
        let bad = || HarnessError::config("grid", format!("expected start:end:points, got {s:?}"));
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let start = parts[0].trim().parse().map_err(|_| bad())?;
        let end = parts[1].trim().parse().map_err(|_| bad())?;
        let points = parts[2].trim().parse().map_err(|_| bad())?;
        Ok(Self::uniform(start, end, points))
    }

    /// Grid times in μs, validated.
    pub fn times_us(&self) -> Result<Vec<f64>, HarnessError> {
        let times = match &self.times_us {
            Some(list) => {
                if self.start_us.is_some() || self.end_us.is_some() || self.points.is_some() {
                    return Err(HarnessError::config(
                        "grid",
                        "times_us cannot be combined with start_us/end_us/points",
                    ));
                }
                list.clone()
            }
            None => {
                let start = self.start_us.unwrap_or(Self::DEFAULT_START_US);
                let end = self.end_us.unwrap_or(Self::DEFAULT_END_US);
                let points = self.points.unwrap_or(Self::DEFAULT_POINTS);
                if points == 0 {
                    return Err(HarnessError::config("grid.points", "must be at least 1"));
                }
                if !(end >= start) {
                    return Err(HarnessError::config(
                        "grid.end_us",
                        "must not precede start_us",
                    ));
                }
                if points == 1 {
                    vec![start]
                } else {
                    let step = (end - start) / (points - 1) as f64;
                    (0..points).map(|i| start + i as f64 * step).collect()
                }
            }
        };
        if times.is_empty() {
            return Err(HarnessError::config("grid.times_us", "must not be empty"));
        }
        if times.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
            return Err(HarnessError::config(
                "grid",
                "times must be finite and non-negative",
            ));
        }
        if times.windows(2).any(|w| w[1] < w[0]) {
            return Err(HarnessError::config(
                "grid.times_us",
                "times must be sorted ascending",
            ));
        }
        Ok(times)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ValidateOptions {
    /// Seed for the random models of the oracle suite.
    pub seed: u64,
    /// Negates every `x_j` before the flux checks. Mutation hook.
    pub inject_x_sign_flip: bool,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        Self {
            seed: 20_240_601,
            inject_x_sign_flip: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub job: JobKind,
    pub omega1_mhz: f64,
    pub omega_c_mhz: f64,
    pub omega_min_mhz: f64,
    pub omega_max_mhz: f64,
    pub eta: f64,
    /// Single bath size; ignored when `n_list` is set.
    pub n: Option<usize>,
    pub n_list: Option<Vec<usize>>,
    pub t_a0_uk: f64,
    pub t_b0_uk: f64,
    pub grid: GridSpec,
    pub out_dir: PathBuf,
    pub oracle_cap: usize,
    pub pivn_mode: PivnChoice,
    /// Half-width of the frequency window around ω₁ for per-mode output.
    pub window_mhz: f64,
    /// Emit the per-mode long table in `simulate`.
    pub per_mode: bool,
    /// Evaluation times of the N sweep.
    pub sweep_times_us: Vec<f64>,
    pub validate: ValidateOptions,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            job: JobKind::Simulate,
            omega1_mhz: 4.0,
            omega_c_mhz: 3.0,
            omega_min_mhz: 0.026,
            omega_max_mhz: 20.0,
            eta: 1e-3,
            n: None,
            n_list: None,
            t_a0_uk: 10.0,
            t_b0_uk: 50.0,
            grid: GridSpec::default(),
            out_dir: PathBuf::from("out"),
            oracle_cap: starbath_core::evolve::DEFAULT_ORACLE_CAP,
            pivn_mode: PivnChoice::Gksl,
            window_mhz: 0.4,
            per_mode: false,
            sweep_times_us: vec![200.0, 400.0, 600.0, 800.0],
            validate: ValidateOptions::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        serde_json::from_str(text).map_err(|e| HarnessError::ConfigParse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            HarnessError::config("config", format!("cannot read {}: {e}", path.display()))
        })?;
        Self::from_json(&text)
    }

    /// Bath sizes for the configured job.
    pub fn sizes(&self) -> Vec<usize> {
        match (&self.n_list, self.n) {
            (Some(list), _) => list.clone(),
            (None, Some(n)) => vec![n],
            (None, None) => self.job.default_sizes(),
        }
    }

    pub fn bath_spec(&self, n: usize) -> OhmicBathSpec {
        OhmicBathSpec {
            eta: self.eta,
            omega_c: self.omega_c_mhz * MHZ,
            omega_min: self.omega_min_mhz * MHZ,
            omega_max: self.omega_max_mhz * MHZ,
            n_modes: n,
        }
    }

    pub fn pivn_mode_name(&self) -> String {
        PivnMode::from(self.pivn_mode).to_string()
    }

    pub fn omega1(&self) -> f64 {
        self.omega1_mhz * MHZ
    }

    pub fn initial_temperatures(&self) -> Result<InitialTemperatures, HarnessError> {
        InitialTemperatures::new(self.t_a0_uk * MICROKELVIN, self.t_b0_uk * MICROKELVIN)
            .map_err(|e| HarnessError::config("t_a0_uk/t_b0_uk", e.to_string()))
    }

    /// Grid times in seconds.
    pub fn grid_seconds(&self) -> Result<Vec<f64>, HarnessError> {
        Ok(self
            .grid
            .times_us()?
            .into_iter()
            .map(|t| t * MICROSECOND)
            .collect())
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let positive = |name: &'static str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(HarnessError::config(
                    name,
                    format!("must be positive, got {v}"),
                ))
            }
        };
        positive("omega1_mhz", self.omega1_mhz)?;
        positive("omega_c_mhz", self.omega_c_mhz)?;
        positive("omega_min_mhz", self.omega_min_mhz)?;
        positive("omega_max_mhz", self.omega_max_mhz)?;
        positive("eta", self.eta)?;
        positive("window_mhz", self.window_mhz)?;
        if self.omega_max_mhz <= self.omega_min_mhz {
            return Err(HarnessError::config(
                "omega_max_mhz",
                "must exceed omega_min_mhz",
            ));
        }
        self.initial_temperatures()?;
        let sizes = self.sizes();
        if sizes.is_empty() {
            return Err(HarnessError::config("n_list", "must not be empty"));
        }
        if sizes.iter().any(|&n| n < 2) {
            return Err(HarnessError::config(
                "n_list",
                "every bath needs at least 2 modes",
            ));
        }
        if sizes.windows(2).any(|w| w[1] <= w[0]) {
            return Err(HarnessError::config(
                "n_list",
                "must be sorted strictly ascending",
            ));
        }
        if matches!(self.job, JobKind::SweepN | JobKind::Fig6) && sizes.len() < 3 {
            return Err(HarnessError::config(
                "n_list",
                "an N sweep needs at least 3 bath sizes",
            ));
        }
        self.grid.times_us()?;
        if self.sweep_times_us.is_empty()
            || self
                .sweep_times_us
                .iter()
                .any(|t| !(t.is_finite() && *t >= 0.0))
        {
            return Err(HarnessError::config(
                "sweep_times_us",
                "must be a non-empty list of non-negative times",
            ));
        }
        if self.oracle_cap == 0 {
            return Err(HarnessError::config("oracle_cap", "must be positive"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_reference_block() {
        let cfg = ExperimentConfig::from_json("{}").unwrap();
        assert_eq!(cfg, ExperimentConfig::default());
        assert_eq!(cfg.omega1(), 4e6);
        let grid = cfg.grid.times_us().unwrap();
        assert_eq!(grid.len(), 121);
        assert_eq!(grid[120], 1200.0);
        assert_eq!(grid[40], 400.0);
        cfg.validate().unwrap();
    }

    #[test]
    fn unknown_keys_rejected_with_position() {
        let err = ExperimentConfig::from_json("{\n  \"omega1_mhz\": 4,\n  \"omega_one\": 3\n}")
            .unwrap_err();
        match err {
            HarnessError::ConfigParse { line, message, .. } => {
                assert_eq!(line, 3);
                assert!(message.contains("omega_one"));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(ExperimentConfig::from_json(r#"{"grid": {"stop_us": 3}}"#).is_err());
    }

    #[test]
    fn sizes_resolution() {
        let mut cfg = ExperimentConfig {
            job: JobKind::Fig3,
            ..Default::default()
        };
        assert_eq!(cfg.sizes(), vec![1000, 2000, 4000]);
        cfg.n = Some(16);
        assert_eq!(cfg.sizes(), vec![16]);
        cfg.n_list = Some(vec![8, 4]);
        assert!(cfg.validate().is_err());
        cfg.n_list = Some(vec![4, 8]);
        cfg.validate().unwrap();
        cfg.job = JobKind::SweepN;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn grid_forms() {
        assert_eq!(
            GridSpec::parse("0:10:3").unwrap().times_us().unwrap(),
            vec![0.0, 5.0, 10.0]
        );
        assert!(GridSpec::parse("0:10").is_err());
        assert!(GridSpec::parse("a:1:2").is_err());
        assert!(GridSpec::parse("5:1:2").unwrap().times_us().is_err());
        let list = GridSpec {
            times_us: Some(vec![1.0, 2.0]),
            ..Default::default()
        };
        assert_eq!(list.times_us().unwrap(), vec![1.0, 2.0]);
        let mixed = GridSpec {
            times_us: Some(vec![1.0]),
            points: Some(3),
            ..Default::default()
        };
        assert!(mixed.times_us().is_err());
        let unsorted = GridSpec {
            times_us: Some(vec![2.0, 1.0]),
            ..Default::default()
        };
        assert!(unsorted.times_us().is_err());
    }

    #[test]
    fn job_names_round_trip() {
        let cfg =
            ExperimentConfig::from_json(r#"{"job": "sweep-n", "pivn_mode": "exact"}"#).unwrap();
        assert_eq!(cfg.job, JobKind::SweepN);
        assert_eq!(PivnMode::from(cfg.pivn_mode), PivnMode::Exact);
        assert_eq!(cfg.job.name(), "sweep-n");
    }
}
