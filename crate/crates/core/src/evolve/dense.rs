//! Dense `2(N+1)`-dimensional symplectic evolution, used only to validate
//! the reduced path on small systems.

use nalgebra::DMatrix;

use super::{CovarianceSnapshot, InitialTemperatures};
use crate::constants::HBAR;
use crate::error::{Error, Result};
use crate::model::{build_reduced, StarModel};

pub const DEFAULT_ORACLE_CAP: usize = 64;

/// Full matrices of the symplectic evolution at one time.
#[derive(Debug, Clone)]
pub struct DenseSymplectic {
    pub time: f64,
    pub h: DMatrix<f64>,
    pub omega: DMatrix<f64>,
    pub v: DMatrix<f64>,
    pub sigma: DMatrix<f64>,
}

impl DenseSymplectic {
    /// `max |V Ω Vᵀ − Ω|`.
    pub fn symplecticity_residual(&self) -> f64 {
        (&self.v * &self.omega * self.v.transpose() - &self.omega)
            .abs()
            .max()
    }

    /// Largest deviation of any single-mode block from `c·I₂`.
    pub fn gibbs_block_residual(&self) -> f64 {
        let n = self.sigma.nrows() / 2;
        (0..n)
            .map(|j| {
                let (a, b) = (2 * j, 2 * j + 1);
                let s = &self.sigma;
                (s[(a, b)].abs())
                    .max(s[(b, a)].abs())
                    .max((s[(a, a)] - s[(b, b)]).abs())
            })
            .fold(0.0, f64::max)
    }

    /// Largest deviation from the cross-block pattern
    /// `σ_{2,2j−1} = −σ_{1,2j}` and `σ_{2,2j} = σ_{1,2j−1}`.
    pub fn cross_block_residual(&self) -> f64 {
        let n = self.sigma.nrows() / 2;
        let s = &self.sigma;
        (1..n)
            .map(|j| {
                let (a, b) = (2 * j, 2 * j + 1);
                (s[(1, a)] + s[(0, b)])
                    .abs()
                    .max((s[(1, b)] - s[(0, a)]).abs())
            })
            .fold(0.0, f64::max)
    }

    /// `‖σ − σᵀ‖_max`.
    pub fn symmetry_residual(&self) -> f64 {
        (&self.sigma - self.sigma.transpose()).abs().max()
    }

    /// Smallest eigenvalue of the Hermitian matrix `σ + iΩ`, via its real
    /// representation `[[σ, −Ω], [Ω, σ]]`.
    pub fn uncertainty_min_eigenvalue(&self) -> f64 {
        let d = self.sigma.nrows();
        let mut real = DMatrix::zeros(2 * d, 2 * d);
        real.view_mut((0, 0), (d, d)).copy_from(&self.sigma);
        real.view_mut((d, d), (d, d)).copy_from(&self.sigma);
        real.view_mut((0, d), (d, d)).copy_from(&(-&self.omega));
        real.view_mut((d, 0), (d, d)).copy_from(&self.omega);
        real.symmetric_eigenvalues().min()
    }

    /// `(ħ/4) Tr(H σ)`.
    pub fn total_energy(&self) -> f64 {
        0.25 * HBAR * (&self.h * &self.sigma).trace()
    }

    /// Extracts the reduced description read by the rest of the crate.
    pub fn to_snapshot(&self) -> CovarianceSnapshot {
        let n = self.sigma.nrows() / 2;
        let s = &self.sigma;
        CovarianceSnapshot {
            time: self.time,
            c: (0..n).map(|j| s[(2 * j, 2 * j)]).collect(),
            x: (1..n).map(|j| s[(0, 2 * j + 1)]).collect(),
            y: (1..n).map(|j| s[(0, 2 * j)]).collect(),
        }
    }
}

/// Dense oracle holding the generator `ΩH`.
#[derive(Debug, Clone)]
pub struct DenseOracle {
    h: DMatrix<f64>,
    omega: DMatrix<f64>,
    generator: DMatrix<f64>,
    sigma0: DMatrix<f64>,
}

impl DenseOracle {
    pub fn new(model: &StarModel, init: &InitialTemperatures, cap: usize) -> Result<Self> {
        if model.n_modes() > cap {
            return Err(Error::OracleCapExceeded {
                n: model.n_modes(),
                cap,
            });
        }
        init.validate()?;
        let h = build_reduced(model).quadrature_matrix();
        let d = h.nrows();
        let mut omega = DMatrix::zeros(d, d);
        for j in 0..d / 2 {
            omega[(2 * j, 2 * j + 1)] = 1.0;
            omega[(2 * j + 1, 2 * j)] = -1.0;
        }
        let mut sigma0 = DMatrix::zeros(d, d);
        for (j, c) in init.coefficients(model).into_iter().enumerate() {
            sigma0[(2 * j, 2 * j)] = c;
            sigma0[(2 * j + 1, 2 * j + 1)] = c;
        }
        let generator = &omega * &h;
        Ok(Self {
            h,
            omega,
            generator,
            sigma0,
        })
    }

    /// `V(t) = exp(ΩHt)` by scaling and squaring, `σ(t) = V σ(0) Vᵀ`.
    pub fn at(&self, t: f64) -> Result<DenseSymplectic> {
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::InvalidTime(t));
        }
        let v = (&self.generator * t).exp();
        let sigma = &v * &self.sigma0 * v.transpose();
        Ok(DenseSymplectic {
            time: t,
            h: self.h.clone(),
            omega: self.omega.clone(),
            v,
            sigma,
        })
    }
}

pub fn dense_oracle_at(
    model: &StarModel,
    init: &InitialTemperatures,
    t: f64,
    cap: usize,
) -> Result<DenseSymplectic> {
    DenseOracle::new(model, init, cap)?.at(t)
}
