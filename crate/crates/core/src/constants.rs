/// Reduced Planck constant (J·s), CODATA 2018 exact value.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant (J/K), CODATA 2018 exact value.
pub const KB: f64 = 1.380_649e-23;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub kb: f64,
}

impl PhysicalConstants {
    pub const CODATA: Self = Self { hbar: HBAR, kb: KB };

    /// `ħω / (k_B T)`.
    pub fn reduced_energy(&self, omega: f64, temperature: f64) -> f64 {
        self.hbar * omega / (self.kb * temperature)
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::CODATA
    }
}

/// `coth(ħω / (2 k_B T))`, the diagonal covariance coefficient of a thermal mode.
pub fn thermal_coefficient(omega: f64, temperature: f64) -> f64 {
    let x = PhysicalConstants::CODATA.reduced_energy(omega, temperature);
    // coth(x/2) = 1 + 2 / (e^x - 1)
    1.0 + 2.0 / x.exp_m1()
}
