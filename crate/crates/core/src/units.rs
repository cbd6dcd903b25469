//! Physical constants and the internal reduced unit system.
//!
//! Spectral integrals are evaluated in reduced units: frequencies in units of
//! the polaritonic resonance of sphere A, polarizabilities in units of
//! `4πε₀a_A³`, and energies in units of `ħω₀(a_A/R)⁶`. SI values only appear
//! at the public API boundary.

use std::f64::consts::PI;

/// Reduced Planck constant (J·s), CODATA 2018.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant (J/K), exact.
pub const K_B: f64 = 1.380_649e-23;
/// Vacuum permittivity (F/m), CODATA 2018.
pub const EPSILON_0: f64 = 8.854_187_812_8e-12;

/// One femtonewton in newtons.
pub const FEMTONEWTON: f64 = 1e-15;

/// `k_B T / ħ` in rad/s: the frequency at which `ħω = k_B T`.
pub fn thermal_frequency(temperature: f64) -> f64 {
    K_B * temperature / HBAR
}

/// Scale factors between SI quantities and reduced quantities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitSystem {
    /// Reference angular frequency (rad/s), the resonance of sphere A.
    pub omega_scale: f64,
    /// Polarizability scale `4πε₀a_A³` (C·m²/V).
    pub alpha_scale: f64,
    /// Energy scale `ħ ω_scale (a_A/R)⁶` (J).
    pub energy_scale: f64,
}

impl UnitSystem {
    pub fn new(omega_scale: f64, radius_a: f64, separation: f64) -> Self {
        let alpha_scale = 4.0 * PI * EPSILON_0 * radius_a.powi(3);
        let energy_scale = HBAR * omega_scale * (radius_a / separation).powi(6);
        Self {
            omega_scale,
            alpha_scale,
            energy_scale,
        }
    }

    pub fn reduce_frequency(&self, omega: f64) -> f64 {
        omega / self.omega_scale
    }

    pub fn frequency_si(&self, reduced: f64) -> f64 {
        reduced * self.omega_scale
    }

    pub fn reduce_polarizability(&self, alpha: f64) -> f64 {
        alpha / self.alpha_scale
    }

    pub fn polarizability_si(&self, reduced: f64) -> f64 {
        reduced * self.alpha_scale
    }

    pub fn reduce_energy(&self, energy: f64) -> f64 {
        energy / self.energy_scale
    }

    pub fn energy_si(&self, reduced: f64) -> f64 {
        reduced * self.energy_scale
    }

    /// Temperature expressed as the reduced thermal frequency `k_B T / (ħ ω_scale)`.
    pub fn reduce_temperature(&self, temperature: f64) -> f64 {
        thermal_frequency(temperature) / self.omega_scale
    }

    pub fn temperature_si(&self, reduced: f64) -> f64 {
        reduced * self.omega_scale * HBAR / K_B
    }
}
