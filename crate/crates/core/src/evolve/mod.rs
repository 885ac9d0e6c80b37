//! Exact unitary evolution of the Gaussian covariance data.
//!
//! Because the quadrature Hamiltonian is `H = h ⊗ I₂` with `h` the reduced
//! arrowhead matrix, every covariance element needed downstream follows from
//! the one-particle propagator `w(t) = e^{−iht}`:
//!
//! * `c_j(t) = σ_{2j−1,2j−1}(t) = Σ_m |w_jm|² c_m(0)`
//! * `x_j(t) = σ_{1,2j}(t)   = −Σ_m c_m(0) Im(w_1m w̄_jm)`
//! * `y_j(t) = σ_{1,2j−1}(t) =  Σ_m c_m(0) Re(w_1m w̄_jm)`
//!
//! The first row of `w` is an `O(n)` spectral sum per element. All
//! bath–bath elements follow from `[h, w] = 0`, which for the star topology reads
//!
//! ```text
//! (ω_j − ω_m) w_jm = g_m w_1j − g_j w_1m        (j, m bath modes),
//! ```
//!
//! so a snapshot costs `O(n²)` with `O(n)` working memory per output time.

mod dense;

pub use dense::{dense_oracle_at, DenseOracle, DenseSymplectic, DEFAULT_ORACLE_CAP};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::arrowhead::arrowhead_eigh;
use crate::constants::{thermal_coefficient, HBAR};
use crate::error::{invalid, Error, Result};
use crate::model::{build_reduced, StarModel};

/// Pairs closer than this fraction of their summed couplings are evaluated
/// by direct spectral summation instead of the commutator identity.
const CLOSE_PAIR_RATIO: f64 = 1e-2;

/// Initial temperatures of the system and of every bath mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialTemperatures {
    pub t_a0: f64,
    pub t_b0: f64,
}

impl InitialTemperatures {
    pub fn new(t_a0: f64, t_b0: f64) -> Result<Self> {
        let init = Self { t_a0, t_b0 };
        init.validate()?;
        Ok(init)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_a0.is_finite() && self.t_a0 > 0.0) {
            return Err(invalid("t_a0", "must be positive"));
        }
        if !(self.t_b0.is_finite() && self.t_b0 > 0.0) {
            return Err(invalid("t_b0", "must be positive"));
        }
        Ok(())
    }

    /// `c_m(0)` for every mode, system first.
    pub fn coefficients(&self, model: &StarModel) -> Vec<f64> {
        std::iter::once(thermal_coefficient(model.omega1(), self.t_a0))
            .chain(
                model
                    .bath_omegas()
                    .iter()
                    .map(|&w| thermal_coefficient(w, self.t_b0)),
            )
            .collect()
    }
}

/// Spectral decomposition `h = Q diag(λ) Qᵀ` of the reduced Hamiltonian.
#[derive(Debug, Clone)]
pub struct ModeBasis {
    model: StarModel,
    eigenvalues: Vec<f64>,
    /// Row-major: row = mode, column = eigenvector index.
    vectors: Vec<f64>,
}

impl ModeBasis {
    pub fn model(&self) -> &StarModel {
        &self.model
    }

    pub fn dimension(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Component of eigenvector `k` on mode `mode`.
    #[inline]
    pub fn vector_entry(&self, mode: usize, k: usize) -> f64 {
        self.vectors[mode * self.dimension() + k]
    }

    /// Row `mode` of `Q`.
    #[inline]
    pub fn mode_row(&self, mode: usize) -> &[f64] {
        let n = self.dimension();
        &self.vectors[mode * n..(mode + 1) * n]
    }

    pub fn eigenvectors(&self) -> nalgebra::DMatrix<f64> {
        let n = self.dimension();
        nalgebra::DMatrix::from_row_slice(n, n, &self.vectors)
    }

    /// `max |QᵀQ − I|`. `O(n³)`; meant for tests and validation.
    pub fn orthonormality_residual(&self) -> f64 {
        let q = self.eigenvectors();
        let n = self.dimension();
        (q.tr_mul(&q) - nalgebra::DMatrix::<f64>::identity(n, n))
            .abs()
            .max()
    }

    /// `‖Q diag(λ) Qᵀ − h‖_F / ‖h‖_F`. `O(n³)`.
    pub fn reconstruction_residual(&self) -> f64 {
        let q = self.eigenvectors();
        let mut scaled = q.clone();
        for (k, mut col) in scaled.column_iter_mut().enumerate() {
            col *= self.eigenvalues[k];
        }
        let h = build_reduced(&self.model).to_dense();
        (scaled * q.transpose() - &h).norm() / h.norm()
    }

    /// Spectral sum `Σ_k Q_ik Q_jk e^{−iλ_k t}` for a single element of `w(t)`.
    pub fn propagator_element(&self, i: usize, j: usize, t: f64) -> Complex64 {
        self.mode_row(i)
            .iter()
            .zip(self.mode_row(j))
            .zip(&self.eigenvalues)
            .map(|((a, b), l)| a * b * Complex64::from_polar(1.0, -l * t))
            .sum()
    }
}

/// Diagonalizes the reduced Hamiltonian of `model`.
pub fn diagonalize(model: &StarModel) -> Result<ModeBasis> {
    let reduced = build_reduced(model);
    let eig = arrowhead_eigh(reduced.diagonal[0], &reduced.diagonal[1..], &reduced.arm)?;
    Ok(ModeBasis {
        model: model.clone(),
        eigenvalues: eig.eigenvalues,
        vectors: eig.vectors,
    })
}

/// Covariance data at one instant: diagonal coefficients of every mode and
/// the system–bath cross terms.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceSnapshot {
    pub time: f64,
    /// `c_j = σ_{2j−1,2j−1}` for all `N + 1` modes, system first.
    pub c: Vec<f64>,
    /// `x_j = σ_{1,2j}` for the `N` bath modes.
    pub x: Vec<f64>,
    /// `y_j = σ_{1,2j−1}` for the `N` bath modes.
    pub y: Vec<f64>,
}

impl CovarianceSnapshot {
    pub fn initial(model: &StarModel, init: &InitialTemperatures) -> Self {
        let n = model.n_modes();
        Self {
            time: 0.0,
            c: init.coefficients(model),
            x: vec![0.0; n],
            y: vec![0.0; n],
        }
    }

    pub fn n_modes(&self) -> usize {
        self.x.len()
    }

    /// Interaction energy `E_I = ħ Σ_j g_j σ_{1,2j−1}`.
    pub fn interaction_energy(&self, model: &StarModel) -> f64 {
        HBAR * model
            .bath_couplings()
            .iter()
            .zip(&self.y)
            .map(|(g, y)| g * y)
            .sum::<f64>()
    }

    /// `E_tot = Σ_j (ħω_j/2) c_j + E_I`.
    pub fn total_energy(&self, model: &StarModel) -> f64 {
        let local: f64 = self
            .c
            .iter()
            .enumerate()
            .map(|(m, c)| 0.5 * HBAR * model.mode_omega(m) * c)
            .sum();
        local + self.interaction_energy(model)
    }
}

/// Evaluates the covariance data at time `t` directly from the spectrum.
pub fn snapshot_at(
    basis: &ModeBasis,
    init: &InitialTemperatures,
    t: f64,
) -> Result<CovarianceSnapshot> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidTime(t));
    }
    init.validate()?;
    let f = init.coefficients(basis.model());
    Ok(evaluate(basis, &f, t))
}

/// One snapshot per grid time. Times are independent and evaluated in parallel.
pub fn snapshot_series(
    basis: &ModeBasis,
    init: &InitialTemperatures,
    grid: &[f64],
) -> Result<Vec<CovarianceSnapshot>> {
    if let Some(&t) = grid.iter().find(|t| !(t.is_finite() && **t >= 0.0)) {
        return Err(Error::InvalidTime(t));
    }
    if grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(invalid("grid", "times must be sorted ascending"));
    }
    init.validate()?;
    let f = init.coefficients(basis.model());
    Ok(grid.par_iter().map(|&t| evaluate(basis, &f, t)).collect())
}

/// Time derivatives of the covariance data at `t`, packed as a snapshot whose
/// `c`, `x`, `y` hold `ċ_j`, `ẋ_j`, `ẏ_j` (1/s).
///
/// Uses `ẇ = −i h w`, which commutes with `h` as well, so the same identity
/// gives the bath–bath elements of `ẇ`. Independent of the flux formulas,
/// which makes it a check on them.
pub fn rates_at(
    basis: &ModeBasis,
    init: &InitialTemperatures,
    t: f64,
) -> Result<CovarianceSnapshot> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidTime(t));
    }
    init.validate()?;
    let f = init.coefficients(basis.model());
    Ok(evaluate_rates(basis, &f, t))
}

/// First row of `w(t)` and, when `rate` is set, of `ẇ(t)`.
struct Propagator<'a> {
    basis: &'a ModeBasis,
    phases: Vec<Complex64>,
    row0: Vec<Complex64>,
    rate0: Vec<Complex64>,
    t: f64,
}

impl<'a> Propagator<'a> {
    fn new(basis: &'a ModeBasis, t: f64, rate: bool) -> Self {
        let phases: Vec<Complex64> = basis
            .eigenvalues()
            .iter()
            .map(|l| Complex64::from_polar(1.0, -l * t))
            .collect();
        let row = |weights: &[Complex64]| -> Vec<Complex64> {
            (0..basis.dimension())
                .map(|j| {
                    basis
                        .mode_row(j)
                        .iter()
                        .zip(weights)
                        .fold(Complex64::new(0.0, 0.0), |acc, (q, a)| acc + a * q)
                })
                .collect()
        };
        let weighted: Vec<Complex64> = basis
            .mode_row(0)
            .iter()
            .zip(&phases)
            .map(|(q, e)| q * e)
            .collect();
        let row0 = row(&weighted);
        let rate0 = if rate {
            let weighted: Vec<Complex64> = weighted
                .iter()
                .zip(basis.eigenvalues())
                .map(|(a, l)| a * Complex64::new(0.0, -l))
                .collect();
            row(&weighted)
        } else {
            Vec::new()
        };
        Self {
            basis,
            phases,
            row0,
            rate0,
            t,
        }
    }

    fn is_close(&self, j: usize, m: usize) -> bool {
        let model = self.basis.model();
        let g = model.bath_couplings();
        (model.mode_omega(j) - model.mode_omega(m)).abs() < CLOSE_PAIR_RATIO * (g[j - 1] + g[m - 1])
    }

    /// `w_jm` for bath modes `j ≠ m`.
    fn element(&self, j: usize, m: usize) -> Complex64 {
        if self.is_close(j, m) {
            return self.basis.propagator_element(j, m, self.t);
        }
        let model = self.basis.model();
        let g = model.bath_couplings();
        let delta = model.mode_omega(j) - model.mode_omega(m);
        (self.row0[j] * g[m - 1] - self.row0[m] * g[j - 1]) / delta
    }

    /// `ẇ_jm` for bath modes `j ≠ m`.
    fn rate_element(&self, j: usize, m: usize) -> Complex64 {
        if self.is_close(j, m) {
            let b = self.basis;
            return b
                .mode_row(j)
                .iter()
                .zip(b.mode_row(m))
                .zip(b.eigenvalues().iter().zip(&self.phases))
                .map(|((a, c), (l, e))| a * c * e * Complex64::new(0.0, -l))
                .sum();
        }
        let model = self.basis.model();
        let g = model.bath_couplings();
        let delta = model.mode_omega(j) - model.mode_omega(m);
        (self.rate0[j] * g[m - 1] - self.rate0[m] * g[j - 1]) / delta
    }
}

// Unitarity of w makes Σ_m |w_jm|² = 1 and Σ_m w_1m w̄_jm = δ_1j, so
// weighting by (f_m − f_j) leaves the same sums with less cancellation.
// The m = j term then carries zero weight and w_jj is never needed.

fn evaluate(basis: &ModeBasis, f: &[f64], t: f64) -> CovarianceSnapshot {
    let (shift, x, y) = kernel(basis, f, t);
    let c = f.iter().zip(&shift).map(|(f, d)| f + d).collect();
    CovarianceSnapshot { time: t, c, x, y }
}

/// `c_j(t) − c_j(0)` for every mode, evaluated without forming `c_j(t)`, so
/// small shifts keep their relative accuracy.
pub fn coefficient_shifts_at(
    basis: &ModeBasis,
    init: &InitialTemperatures,
    t: f64,
) -> Result<Vec<f64>> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidTime(t));
    }
    init.validate()?;
    let f = init.coefficients(basis.model());
    Ok(kernel(basis, &f, t).0)
}

fn kernel(basis: &ModeBasis, f: &[f64], t: f64) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let n = basis.dimension();
    let mut dc = vec![0.0; n];
    let mut x = vec![0.0; n - 1];
    let mut y = vec![0.0; n - 1];
    if t == 0.0 {
        return (dc, x, y);
    }
    let prop = Propagator::new(basis, t, false);
    let row0 = &prop.row0;
    dc[0] = (1..n)
        .map(|m| row0[m].norm_sqr() * (f[m] - f[0]))
        .sum::<f64>();

    for j in 1..n {
        let (rj, fj) = (row0[j], f[j]);
        let mut d = rj.norm_sqr() * (f[0] - fj);
        let p0 = row0[0] * rj.conj() * (f[0] - fj);
        let (mut xs, mut ys) = (-p0.im, p0.re);
        for m in (1..n).filter(|&m| m != j) {
            let w = prop.element(j, m);
            let weight = f[m] - fj;
            d += w.norm_sqr() * weight;
            let p = row0[m] * w.conj() * weight;
            xs -= p.im;
            ys += p.re;
        }
        dc[j] = d;
        x[j - 1] = xs;
        y[j - 1] = ys;
    }
    (dc, x, y)
}

fn evaluate_rates(basis: &ModeBasis, f: &[f64], t: f64) -> CovarianceSnapshot {
    let n = basis.dimension();
    let prop = Propagator::new(basis, t, true);
    let (row0, rate0) = (&prop.row0, &prop.rate0);

    let mut c = vec![0.0; n];
    let mut x = vec![0.0; n - 1];
    let mut y = vec![0.0; n - 1];
    c[0] = (1..n)
        .map(|m| 2.0 * (rate0[m] * row0[m].conj()).re * (f[m] - f[0]))
        .sum();

    for j in 1..n {
        let (rj, dj, fj) = (row0[j], rate0[j], f[j]);
        let weight = f[0] - fj;
        let mut dc = 2.0 * (dj * rj.conj()).re * weight;
        let mut dp = (rate0[0] * rj.conj() + row0[0] * dj.conj()) * weight;
        for m in (1..n).filter(|&m| m != j) {
            let w = prop.element(j, m);
            let dw = prop.rate_element(j, m);
            let weight = f[m] - fj;
            dc += 2.0 * (dw * w.conj()).re * weight;
            dp += (rate0[m] * w.conj() + row0[m] * dw.conj()) * weight;
        }
        c[j] = dc;
        x[j - 1] = -dp.im;
        y[j - 1] = dp.re;
    }

    CovarianceSnapshot { time: t, c, x, y }
}
