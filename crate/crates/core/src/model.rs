//! The star Hamiltonian: one central oscillator of frequency `ω₁` coupled to
//! `N` bath oscillators through rotating-wave couplings `g_j`.
//!
//! Mode index `0` is the central system oscillator; bath oscillator `j`
//! (zero-based) is mode `j + 1`.

use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::constants::{PhysicalConstants, HBAR, KB};
use crate::error::{invalid, Error, Result};

/// Relative tolerance on bath-frequency spacing for a grid to count as uniform.
pub const UNIFORM_SPACING_TOL: f64 = 1e-12;

/// Discretization parameters of an Ohmic spectral density
/// `J(ω) = η ω e^{−ω/ω_c}` on `[omega_min, omega_max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OhmicBathSpec {
    pub eta: f64,
    pub omega_c: f64,
    pub omega_min: f64,
    pub omega_max: f64,
    pub n_modes: usize,
}

impl OhmicBathSpec {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("eta", self.eta),
            ("omega_c", self.omega_c),
            ("omega_min", self.omega_min),
            ("omega_max", self.omega_max),
        ] {
            if !v.is_finite() {
                return Err(invalid(name, format!("must be finite, got {v}")));
            }
        }
        if self.n_modes < 2 {
            return Err(invalid(
                "n_modes",
                format!("need at least 2 bath modes, got {}", self.n_modes),
            ));
        }
        if self.eta < 0.0 {
            return Err(invalid("eta", "must be non-negative"));
        }
        if self.omega_c <= 0.0 {
            return Err(invalid("omega_c", "must be positive"));
        }
        if !(0.0 < self.omega_min && self.omega_min < self.omega_max) {
            return Err(invalid("omega_min", "need 0 < omega_min < omega_max"));
        }
        Ok(())
    }

    /// Grid spacing `Δω = (ω_max − ω_min)/(N − 1)`.
    pub fn spacing(&self) -> f64 {
        (self.omega_max - self.omega_min) / (self.n_modes - 1) as f64
    }

    pub fn spectral_density(&self, omega: f64) -> f64 {
        self.eta * omega * (-omega / self.omega_c).exp()
    }
}

/// Frequencies and couplings of the star Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct StarModel {
    omega1: f64,
    bath_omegas: Vec<f64>,
    bath_couplings: Vec<f64>,
}

impl StarModel {
    /// Builds a model from an explicit bath table. Bath frequencies must be
    /// strictly increasing and positive, couplings finite and non-negative.
    pub fn new(omega1: f64, bath_omegas: Vec<f64>, bath_couplings: Vec<f64>) -> Result<Self> {
        if !(omega1.is_finite() && omega1 > 0.0) {
            return Err(invalid("omega1", format!("must be positive, got {omega1}")));
        }
        if bath_omegas.len() != bath_couplings.len() {
            return Err(invalid(
                "bath_couplings",
                format!(
                    "length {} does not match {} bath frequencies",
                    bath_couplings.len(),
                    bath_omegas.len()
                ),
            ));
        }
        if bath_omegas.is_empty() {
            return Err(invalid("bath_omegas", "need at least one bath mode"));
        }
        if bath_omegas.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(invalid("bath_omegas", "frequencies must be positive"));
        }
        if bath_omegas.windows(2).any(|p| p[1] <= p[0]) {
            return Err(invalid("bath_omegas", "must be strictly increasing"));
        }
        if bath_couplings.iter().any(|g| !(g.is_finite() && *g >= 0.0)) {
            return Err(invalid("bath_couplings", "couplings must be non-negative"));
        }
        Ok(Self {
            omega1,
            bath_omegas,
            bath_couplings,
        })
    }

    pub fn omega1(&self) -> f64 {
        self.omega1
    }

    pub fn bath_omegas(&self) -> &[f64] {
        &self.bath_omegas
    }

    pub fn bath_couplings(&self) -> &[f64] {
        &self.bath_couplings
    }

    /// Number of bath modes `N`.
    pub fn n_modes(&self) -> usize {
        self.bath_omegas.len()
    }

    /// Number of oscillators `N + 1`.
    pub fn dimension(&self) -> usize {
        self.n_modes() + 1
    }

    /// Frequency of mode `m` (0 = system).
    pub fn mode_omega(&self, m: usize) -> f64 {
        if m == 0 {
            self.omega1
        } else {
            self.bath_omegas[m - 1]
        }
    }

    /// All `N + 1` mode frequencies, system first.
    pub fn mode_omegas(&self) -> Vec<f64> {
        std::iter::once(self.omega1)
            .chain(self.bath_omegas.iter().copied())
            .collect()
    }

    /// The common spacing of the bath grid, if it is uniform.
    pub fn uniform_spacing(&self) -> Option<f64> {
        let n = self.n_modes();
        if n < 2 {
            return None;
        }
        let first = self.bath_omegas[0];
        let last = self.bath_omegas[n - 1];
        let dw = (last - first) / (n - 1) as f64;
        let uniform = self.bath_omegas.iter().enumerate().all(|(i, w)| {
            let expected = first + i as f64 * dw;
            (w - expected).abs() <= UNIFORM_SPACING_TOL * expected.abs().max(dw)
        });
        uniform.then_some(dw)
    }

    pub fn coupling_sum_of_squares(&self) -> f64 {
        self.bath_couplings.iter().map(|g| g * g).sum()
    }
}

/// Symmetric arrowhead matrix `h` whose `I₂` tensor expansion is the
/// quadrature Hamiltonian matrix `H`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedHamiltonian {
    /// `ω₁, ω₂ … ω_{N+1}`.
    pub diagonal: Vec<f64>,
    /// `g₂ … g_{N+1}`, the first row/column off-diagonals.
    pub arm: Vec<f64>,
}

impl ReducedHamiltonian {
    pub fn dimension(&self) -> usize {
        self.diagonal.len()
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.dimension();
        let mut h = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&self.diagonal));
        for (j, g) in self.arm.iter().enumerate() {
            h[(0, j + 1)] = *g;
            h[(j + 1, 0)] = *g;
        }
        debug_assert_eq!(h.nrows(), n);
        h
    }

    /// The `2(N+1)`-dimensional quadrature matrix `H = h ⊗ I₂`, ordered
    /// `(r₁, r₂, …)` = `(x₁, p₁, x₂, p₂, …)`.
    pub fn quadrature_matrix(&self) -> DMatrix<f64> {
        let n = self.dimension();
        let mut big = DMatrix::zeros(2 * n, 2 * n);
        for (j, w) in self.diagonal.iter().enumerate() {
            big[(2 * j, 2 * j)] = *w;
            big[(2 * j + 1, 2 * j + 1)] = *w;
        }
        for (j, g) in self.arm.iter().enumerate() {
            let b = 2 * (j + 1);
            big[(0, b)] = *g;
            big[(b, 0)] = *g;
            big[(1, b + 1)] = *g;
            big[(b + 1, 1)] = *g;
        }
        big
    }
}

/// Midpoint-rule discretization of the Ohmic bath:
/// `ω_j = ω_min + (j−2)Δω`, `g_j = sqrt(η Δω ω_j e^{−ω_j/ω_c})`.
pub fn discretize_ohmic_bath(spec: &OhmicBathSpec, omega1: f64) -> Result<StarModel> {
    spec.validate()?;
    if !(omega1.is_finite() && omega1 > 0.0) {
        return Err(invalid("omega1", format!("must be positive, got {omega1}")));
    }
    let dw = spec.spacing();
    let omegas: Vec<f64> = (0..spec.n_modes)
        .map(|i| spec.omega_min + i as f64 * dw)
        .collect();
    let couplings = omegas
        .iter()
        .map(|&w| (spec.eta * dw * w * (-w / spec.omega_c).exp()).sqrt())
        .collect();
    StarModel::new(omega1, omegas, couplings)
}

/// Continuum relaxation rate `Γ = π J(ω₁)`.
pub fn relaxation_rate(model: &StarModel, spec: &OhmicBathSpec) -> Result<f64> {
    spec.validate()?;
    Ok(PI * spec.spectral_density(model.omega1()))
}

/// Bose–Einstein occupation `n̄ = 1/(e^{ħω/k_BT} − 1)`.
pub fn mean_occupation(omega: f64, temperature: f64) -> Result<f64> {
    if !(omega.is_finite() && omega > 0.0) {
        return Err(invalid("omega", "must be positive"));
    }
    if !(temperature.is_finite() && temperature > 0.0) {
        return Err(invalid("temperature", "must be positive"));
    }
    let x = PhysicalConstants::CODATA.reduced_energy(omega, temperature);
    Ok(1.0 / x.exp_m1())
}

/// Bath rephasing time `t₁ = 2π/Δω`.
pub fn recurrence_time(model: &StarModel) -> Result<f64> {
    model
        .uniform_spacing()
        .map(|dw| 2.0 * PI / dw)
        .ok_or(Error::NonUniformBath)
}

pub fn build_reduced(model: &StarModel) -> ReducedHamiltonian {
    ReducedHamiltonian {
        diagonal: model.mode_omegas(),
        arm: model.bath_couplings().to_vec(),
    }
}

/// `ħω/k_B` in kelvin.
pub fn quantum_temperature(omega: f64) -> f64 {
    HBAR * omega / KB
}
