//! Figure, simulation and sweep jobs. Each returns named tables; writing them
//! out is left to [`crate::output`].

use rayon::prelude::*;
use starbath_core::units::{MHZ, MICROKELVIN, MICROSECOND};
use starbath_core::{PivnMode, KB};

use crate::config::{ExperimentConfig, JobKind};
use crate::error::Result;
use crate::run::{linear_fit, recurrence_warnings, DerivedConstants, Observables, Simulation};
use crate::table::{Column, ResultTable};

#[derive(Debug, Clone, PartialEq)]
pub struct JobOutput {
    pub job: JobKind,
    /// `(file name, table)` in emission order.
    pub tables: Vec<(String, ResultTable)>,
    pub derived: Vec<DerivedConstants>,
    pub warnings: Vec<String>,
}

/// `Π` in `k_B/ms`.
fn per_ms(rate: f64) -> f64 {
    rate / KB * 1e-3
}

fn in_kb(s: f64) -> f64 {
    s / KB
}

fn run_sizes(cfg: &ExperimentConfig) -> Result<Vec<Simulation>> {
    cfg.sizes()
        .par_iter()
        .map(|&n| Simulation::from_config(cfg, n))
        .collect()
}

struct Sampled {
    sim: Simulation,
    series: Vec<Observables>,
}

fn sample(cfg: &ExperimentConfig, window: bool) -> Result<(Vec<Sampled>, Vec<String>)> {
    let grid = cfg.grid_seconds()?;
    let mode = PivnMode::from(cfg.pivn_mode);
    let sampled: Vec<Sampled> = run_sizes(cfg)?
        .into_par_iter()
        .map(|sim| {
            let modes = if window {
                sim.window(cfg.window_mhz * MHZ)
            } else {
                Vec::new()
            };
            let series = sim.series(&grid, mode, &modes)?;
            Ok(Sampled { sim, series })
        })
        .collect::<Result<_>>()?;
    let derived: Vec<DerivedConstants> = sampled.iter().map(|s| s.sim.derived).collect();
    Ok((sampled, recurrence_warnings(&grid, &derived)))
}

fn table_from(
    columns: &[(&str, &str)],
    series: &[Observables],
    row: impl Fn(&Observables) -> Vec<f64>,
) -> Result<ResultTable> {
    let mut t = ResultTable::new(columns.iter().map(|(n, u)| Column::new(n, u)).collect());
    for o in series {
        t.push(row(o))?;
    }
    Ok(t)
}

fn mode_table(series: &[Observables]) -> Result<ResultTable> {
    let mut t = ResultTable::new(vec![
        Column::new("j", "1"),
        Column::new("omega_j", "MHz"),
        Column::new("t", "us"),
        Column::new("T_j", "uK"),
        Column::new("dEj_dt", "J/s"),
    ]);
    for o in series {
        for m in &o.modes {
            t.push(vec![
                m.j as f64,
                m.omega / MHZ,
                o.time / MICROSECOND,
                m.temperature / MICROKELVIN,
                m.flux,
            ])?;
        }
    }
    Ok(t)
}

fn output(
    job: JobKind,
    tables: Vec<(String, ResultTable)>,
    sampled: &[Sampled],
    warnings: Vec<String>,
) -> JobOutput {
    JobOutput {
        job,
        tables,
        derived: sampled.iter().map(|s| s.sim.derived).collect(),
        warnings,
    }
}

const SIMULATE_COLUMNS: &[(&str, &str)] = &[
    ("t", "us"),
    ("c1_exact", "1"),
    ("c1_gksl", "1"),
    ("T_A", "uK"),
    ("T_A_gksl", "uK"),
    ("S_tot", "kB"),
    ("dS_tot", "kB"),
    ("Pi_tot", "kB/ms"),
    ("Pi_vN", "kB/ms"),
    ("dS_vN", "kB"),
    ("Pi_vN_minus_Pi_tot", "kB/ms"),
    ("dS_vN_minus_dS_tot", "kB"),
    ("dEA_dt", "J/s"),
    ("dEB_dt", "J/s"),
    ("dEI_dt", "J/s"),
];

fn simulate_row(o: &Observables) -> Vec<f64> {
    vec![
        o.time / MICROSECOND,
        o.c1_exact,
        o.c1_gksl,
        o.t_a / MICROKELVIN,
        o.t_a_gksl / MICROKELVIN,
        in_kb(o.s_tot),
        in_kb(o.ds_tot),
        per_ms(o.pi_tot),
        per_ms(o.pi_vn),
        in_kb(o.ds_vn),
        per_ms(o.epr_difference),
        in_kb(o.ep_difference),
        o.de_a,
        o.de_b,
        o.de_i,
    ]
}

pub fn run_simulate(cfg: &ExperimentConfig) -> Result<JobOutput> {
    let (sampled, warnings) = sample(cfg, cfg.per_mode)?;
    let mut tables = Vec::new();
    for s in &sampled {
        let n = s.sim.n();
        tables.push((
            format!("simulate_N{n}.csv"),
            table_from(SIMULATE_COLUMNS, &s.series, simulate_row)?.with_meta("n", n),
        ));
        if cfg.per_mode {
            tables.push((
                format!("simulate_modes_N{n}.csv"),
                mode_table(&s.series)?.with_meta("n", n),
            ));
        }
    }
    Ok(output(JobKind::Simulate, tables, &sampled, warnings))
}

/// `σ₁₁` exact and GKSL.
pub fn run_fig1(cfg: &ExperimentConfig) -> Result<JobOutput> {
    let (sampled, warnings) = sample(cfg, false)?;
    let mut tables = Vec::new();
    for s in &sampled {
        let t = table_from(
            &[("t", "us"), ("sigma11_exact", "1"), ("sigma11_gksl", "1")],
            &s.series,
            |o| vec![o.time / MICROSECOND, o.c1_exact, o.c1_gksl],
        )?;
        tables.push((
            format!("fig1_sigma11_N{}.csv", s.sim.n()),
            t.with_meta("n", s.sim.n()),
        ));
    }
    Ok(output(JobKind::Fig1, tables, &sampled, warnings))
}

/// Energy fluxes and the interaction energy.
pub fn run_fig2(cfg: &ExperimentConfig) -> Result<JobOutput> {
    let (sampled, warnings) = sample(cfg, false)?;
    let mut tables = Vec::new();
    for s in &sampled {
        let t = table_from(
            &[
                ("t", "us"),
                ("dEA_dt", "J/s"),
                ("dEB_dt", "J/s"),
                ("dEI_dt", "J/s"),
                ("E_I", "J"),
            ],
            &s.series,
            |o| vec![o.time / MICROSECOND, o.de_a, o.de_b, o.de_i, o.e_i],
        )?;
        tables.push((
            format!("fig2_fluxes_N{}.csv", s.sim.n()),
            t.with_meta("n", s.sim.n()),
        ));
    }
    Ok(output(JobKind::Fig2, tables, &sampled, warnings))
}

/// Total thermodynamic and conventional entropy production rates.
pub fn run_fig3(cfg: &ExperimentConfig) -> Result<JobOutput> {
    let (sampled, warnings) = sample(cfg, false)?;
    let mut tables = Vec::new();
    for s in &sampled {
        let t = table_from(
            &[
                ("t", "us"),
                ("Pi_tot", "kB/ms"),
                ("Pi_vN", "kB/ms"),
                ("Pi_vN_minus_Pi_tot", "kB/ms"),
            ],
            &s.series,
            |o| {
                vec![
                    o.time / MICROSECOND,
                    per_ms(o.pi_tot),
                    per_ms(o.pi_vn),
                    per_ms(o.epr_difference),
                ]
            },
        )?;
        let t = t
            .with_meta("n", s.sim.n())
            .with_meta("pivn_mode", cfg.pivn_mode_name());
        tables.push((format!("fig3_rates_N{}.csv", s.sim.n()), t));
    }
    Ok(output(JobKind::Fig3, tables, &sampled, warnings))
}

/// System temperature, exact and GKSL, with the spread of bath temperatures.
pub fn run_fig4(cfg: &ExperimentConfig) -> Result<JobOutput> {
    let (sampled, warnings) = sample(cfg, true)?;
    let mut tables = Vec::new();
    for s in &sampled {
        let n = s.sim.n();
        let t = table_from(
            &[
                ("t", "us"),
                ("T_A", "uK"),
                ("T_A_gksl", "uK"),
                ("T_bath_min", "uK"),
                ("T_bath_max", "uK"),
            ],
            &s.series,
            |o| {
                vec![
                    o.time / MICROSECOND,
                    o.t_a / MICROKELVIN,
                    o.t_a_gksl / MICROKELVIN,
                    o.t_bath_min / MICROKELVIN,
                    o.t_bath_max / MICROKELVIN,
                ]
            },
        )?;
        tables.push((format!("fig4_temperatures_N{n}.csv"), t.with_meta("n", n)));
        tables.push((
            format!("fig4_bath_N{n}.csv"),
            mode_table(&s.series)?.with_meta("n", n),
        ));
    }
    Ok(output(JobKind::Fig4, tables, &sampled, warnings))
}

/// Per-mode temperatures and fluxes near resonance, long format.
pub fn run_fig5(cfg: &ExperimentConfig) -> Result<JobOutput> {
    let (sampled, warnings) = sample(cfg, true)?;
    let tables = sampled
        .iter()
        .map(|s| {
            let n = s.sim.n();
            let t = mode_table(&s.series)?
                .with_meta("n", n)
                .with_meta("window_mhz", cfg.window_mhz);
            Ok((format!("fig5_modes_N{n}.csv"), t))
        })
        .collect::<Result<_>>()?;
    Ok(output(JobKind::Fig5, tables, &sampled, warnings))
}

/// Entropy production curves for every size plus the `1/N` sweep.
pub fn run_fig6(cfg: &ExperimentConfig) -> Result<JobOutput> {
    let (sampled, mut warnings) = sample(cfg, false)?;
    let mut tables = Vec::new();
    for s in &sampled {
        let t = table_from(
            &[
                ("t", "us"),
                ("dS_tot", "kB"),
                ("dS_vN", "kB"),
                ("dS_vN_minus_dS_tot", "kB"),
            ],
            &s.series,
            |o| {
                vec![
                    o.time / MICROSECOND,
                    in_kb(o.ds_tot),
                    in_kb(o.ds_vn),
                    in_kb(o.ep_difference),
                ]
            },
        )?;
        tables.push((
            format!("fig6_entropy_N{}.csv", s.sim.n()),
            t.with_meta("n", s.sim.n()),
        ));
    }
    let sims: Vec<&Simulation> = sampled.iter().map(|s| &s.sim).collect();
    let (diff, fit) = sweep_tables(cfg, &sims)?;
    warnings.extend(sweep_warnings(cfg, &sims));
    tables.push(("fig6_ep_difference.csv".into(), diff));
    tables.push(("fig6_fit.csv".into(), fit));
    Ok(output(JobKind::Fig6, tables, &sampled, warnings))
}

fn sweep_warnings(cfg: &ExperimentConfig, sims: &[&Simulation]) -> Vec<String> {
    let times: Vec<f64> = cfg.sweep_times_us.iter().map(|t| t * MICROSECOND).collect();
    let derived: Vec<DerivedConstants> = sims.iter().map(|s| s.derived).collect();
    recurrence_warnings(&times, &derived)
}

/// `ΔS^vN − ΔS_tot` against `1/N` at every sweep time, and the per-time fit.
pub fn sweep_tables(
    cfg: &ExperimentConfig,
    sims: &[&Simulation],
) -> Result<(ResultTable, ResultTable)> {
    let times: Vec<f64> = cfg.sweep_times_us.iter().map(|t| t * MICROSECOND).collect();
    let values: Vec<Vec<f64>> = sims
        .par_iter()
        .map(|s| s.ep_differences(&times))
        .collect::<Result<_>>()?;
    let mut diff = ResultTable::new(vec![
        Column::new("N", "1"),
        Column::new("inv_N", "1"),
        Column::new("t", "us"),
        Column::new("dS_vN_minus_dS_tot", "kB"),
    ]);
    for (s, v) in sims.iter().zip(&values) {
        let n = s.n() as f64;
        for (t, d) in times.iter().zip(v) {
            diff.push(vec![n, 1.0 / n, t / MICROSECOND, in_kb(*d)])?;
        }
    }
    let mut fit = ResultTable::new(vec![
        Column::new("t", "us"),
        Column::new("slope", "kB"),
        Column::new("intercept", "kB"),
        Column::new("r2", "1"),
    ]);
    let inv_n: Vec<f64> = sims.iter().map(|s| 1.0 / s.n() as f64).collect();
    for (k, t) in times.iter().enumerate() {
        let y: Vec<f64> = values.iter().map(|v| in_kb(v[k])).collect();
        let f = linear_fit(&inv_n, &y);
        let (slope, intercept, r2) = f.map_or((f64::NAN, f64::NAN, f64::NAN), |f| {
            (f.slope, f.intercept, f.r2)
        });
        fit.push(vec![t / MICROSECOND, slope, intercept, r2])?;
    }
    Ok((diff, fit))
}

pub fn run_sweep_n(cfg: &ExperimentConfig) -> Result<JobOutput> {
    let sims = run_sizes(cfg)?;
    let refs: Vec<&Simulation> = sims.iter().collect();
    let (diff, fit) = sweep_tables(cfg, &refs)?;
    Ok(JobOutput {
        job: JobKind::SweepN,
        tables: vec![
            ("sweep_n.csv".into(), diff),
            ("sweep_n_fit.csv".into(), fit),
        ],
        derived: sims.iter().map(|s| s.derived).collect(),
        warnings: sweep_warnings(cfg, &refs),
    })
}

/// Dispatches every job except `validate`, which produces a report instead of tables.
pub fn run_job(cfg: &ExperimentConfig) -> Result<JobOutput> {
    cfg.validate()?;
    match cfg.job {
        JobKind::Simulate => run_simulate(cfg),
        JobKind::Fig1 => run_fig1(cfg),
        JobKind::Fig2 => run_fig2(cfg),
        JobKind::Fig3 => run_fig3(cfg),
        JobKind::Fig4 => run_fig4(cfg),
        JobKind::Fig5 => run_fig5(cfg),
        JobKind::Fig6 => run_fig6(cfg),
        JobKind::SweepN => run_sweep_n(cfg),
        JobKind::Validate => Err(crate::error::HarnessError::config(
            "job",
            "validate produces a report; use validate::run_validate",
        )),
    }
}
