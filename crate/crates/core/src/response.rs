//! Electromagnetic response of a single non-rotating nanosphere.
//!
//! A sphere made of a single-oscillator Lorentz material has the dipole
//! polarizability
//!
//! ```text
//! α(ω) = 4πε₀a³ f₀ω̃₀² / [3(ω₀² − ω² − iγ₀ω)],   ω₀ = ω̃₀ √(1 + f₀/3)
//! ```
//!
//! and, in thermal equilibrium at temperature `T`, the Hadamard (symmetrized
//! dipole correlation) spectrum `η(ω) = 2 coth(ħω/2k_BT) Im α(ω)`.
//!
//! Frequencies are angular (rad/s) throughout.

use std::f64::consts::PI;

use nalgebra::Vector3;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::units::{thermal_frequency, EPSILON_0};

/// Denominators smaller than this are treated as an exact pole hit.
const POLE_EPS: f64 = 1e-300;

/// Tolerance on `|axis| = 1`.
pub const AXIS_NORM_TOL: f64 = 1e-12;

/// Single Lorentz oscillator describing a dielectric's permittivity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaterialModel {
    /// Dimensionless oscillator strength `f₀`.
    pub f0: f64,
    /// Bare oscillator frequency `ω̃₀` (rad/s).
    pub omega_tilde0: f64,
    /// Damping rate `γ₀` (rad/s).
    pub gamma0: f64,
}

impl MaterialModel {
    pub fn new(f0: f64, omega_tilde0: f64, gamma0: f64) -> Result<Self> {
        let m = Self {
            f0,
            omega_tilde0,
            gamma0,
        };
        m.validate()?;
        Ok(m)
    }

    /// Barium strontium titanate, polaritonic resonance only.
    pub fn bst() -> Self {
        Self {
            f0: 12.2,
            omega_tilde0: 5.7e9,
            gamma0: 2.8e8,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.f0.is_finite() && self.f0 > 0.0) {
            return Err(Error::invalid("f0", format!("must be finite and > 0, got {}", self.f0)));
        }
        if !(self.omega_tilde0.is_finite() && self.omega_tilde0 > 0.0) {
            return Err(Error::invalid(
                "omega_tilde0",
                format!("must be finite and > 0, got {}", self.omega_tilde0),
            ));
        }
        if !(self.gamma0.is_finite() && self.gamma0 >= 0.0) {
            return Err(Error::invalid(
                "gamma0",
                format!("must be finite and >= 0, got {}", self.gamma0),
            ));
        }
        Ok(())
    }

    /// Copy with the damping rate multiplied by `factor`.
    pub fn with_damping_scaled(&self, factor: f64) -> Self {
        Self {
            gamma0: self.gamma0 * factor,
            ..*self
        }
    }

    /// Polaritonic resonance of a sphere made of this material.
    pub fn resonance_frequency(&self) -> f64 {
        resonance_frequency(self)
    }

    /// Static polarizability in units of `4πε₀a³`: `f₀/(3 + f₀)`.
    pub fn static_polarizability_factor(&self) -> f64 {
        self.f0 / (3.0 + self.f0)
    }

    /// Relative permittivity `ε(ω)/ε₀`.
    pub fn permittivity(&self, omega: Complex64) -> Result<Complex64> {
        permittivity(self, omega)
    }

    /// Relative permittivity on the imaginary axis, `ε(iξ)/ε₀` (real).
    pub fn permittivity_imaginary_axis(&self, xi: f64) -> f64 {
        let w2 = self.omega_tilde0 * self.omega_tilde0;
        1.0 + self.f0 * w2 / (w2 + xi * xi + self.gamma0 * xi)
    }
}

/// `ε(ω)/ε₀ = 1 + f₀ω̃₀² / (ω̃₀² − ω² − iγ₀ω)` for complex `ω`.
pub fn permittivity(material: &MaterialModel, omega: Complex64) -> Result<Complex64> {
    let w2 = material.omega_tilde0 * material.omega_tilde0;
    let den = Complex64::new(w2, 0.0) - omega * omega - Complex64::i() * material.gamma0 * omega;
    if den.norm() < POLE_EPS {
        return Err(Error::PoleProximity {
            omega: omega.re,
            magnitude: den.norm(),
        });
    }
    Ok(1.0 + material.f0 * w2 / den)
}

/// `ω₀ = ω̃₀ √(1 + f₀/3)`.
pub fn resonance_frequency(material: &MaterialModel) -> f64 {
    material.omega_tilde0 * (1.0 + material.f0 / 3.0).sqrt()
}

/// A nanosphere with its material, internal temperature and spin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinningSphere {
    /// Radius (m).
    pub radius: f64,
    pub material: MaterialModel,
    /// Internal temperature (K).
    pub temperature: f64,
    /// Signed angular speed about `axis` (rad/s).
    pub omega: f64,
    /// Unit rotation axis.
    pub axis: Vector3<f64>,
}

impl SpinningSphere {
    pub fn new(
        radius: f64,
        material: MaterialModel,
        temperature: f64,
        omega: f64,
        axis: Vector3<f64>,
    ) -> Result<Self> {
        let s = Self {
            radius,
            material,
            temperature,
            omega,
            axis,
        };
        s.validate()?;
        Ok(s)
    }

    /// A sphere at rest with its (irrelevant) axis along ẑ.
    pub fn at_rest(radius: f64, material: MaterialModel, temperature: f64) -> Result<Self> {
        Self::new(radius, material, temperature, 0.0, Vector3::z())
    }

    pub fn validate(&self) -> Result<()> {
        self.material.validate()?;
        if !(self.radius.is_finite() && self.radius > 0.0) {
            return Err(Error::invalid("radius", format!("must be > 0, got {}", self.radius)));
        }
        if !(self.temperature.is_finite() && self.temperature >= 0.0) {
            return Err(Error::invalid(
                "temperature",
                format!("must be >= 0 K, got {}", self.temperature),
            ));
        }
        if !self.omega.is_finite() {
            return Err(Error::invalid("omega", "must be finite"));
        }
        check_unit_axis("axis", &self.axis)
    }

    /// The rest-frame polarizability as a Lorentz oscillator in SI units.
    pub fn oscillator(&self) -> Oscillator {
        let m = &self.material;
        Oscillator {
            strength: 4.0 * PI * EPSILON_0 * self.radius.powi(3) * m.f0 * m.omega_tilde0.powi(2)
                / 3.0,
            resonance: m.resonance_frequency(),
            damping: m.gamma0,
        }
    }
}

pub(crate) fn check_unit_axis(name: &'static str, axis: &Vector3<f64>) -> Result<()> {
    let norm = axis.norm();
    if !norm.is_finite() || (norm - 1.0).abs() > AXIS_NORM_TOL {
        return Err(Error::invalid(name, format!("must be a unit vector, |v| = {norm}")));
    }
    Ok(())
}

/// Isotropic Lorentz response `α(ω) = S / (ω₀² − ω² − iγω)`.
///
/// The struct is unit-agnostic: the SI oscillator of a sphere and its
/// reduced-unit counterpart used inside the integrators share this type.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Oscillator {
    /// Numerator `S` (polarizability × frequency²).
    pub strength: f64,
    /// Resonance frequency `ω₀`.
    pub resonance: f64,
    /// Damping rate `γ`.
    pub damping: f64,
}

impl Oscillator {
    #[inline]
    fn denominator(&self, omega: f64) -> Complex64 {
        Complex64::new(
            self.resonance * self.resonance - omega * omega,
            -self.damping * omega,
        )
    }

    /// `α(ω)` without the pole check. Returns non-finite values on a pole.
    #[inline]
    pub fn alpha(&self, omega: f64) -> Complex64 {
        self.strength / self.denominator(omega)
    }

    pub fn try_alpha(&self, omega: f64) -> Result<Complex64> {
        let den = self.denominator(omega);
        if den.norm() < POLE_EPS {
            return Err(Error::PoleProximity {
                omega,
                magnitude: den.norm(),
            });
        }
        Ok(self.strength / den)
    }

    /// Static value `α(0) = S/ω₀²`.
    pub fn static_alpha(&self) -> f64 {
        self.strength / (self.resonance * self.resonance)
    }

    /// `Im α(ω) / ω`, finite and even in `ω`.
    #[inline]
    pub fn im_alpha_over_omega(&self, omega: f64) -> f64 {
        let re = self.resonance * self.resonance - omega * omega;
        let im = self.damping * omega;
        self.strength * self.damping / (re * re + im * im)
    }

    /// Rest-frame Hadamard function `η(ω) = 2 coth(ω/2θ) Im α(ω)`.
    ///
    /// `theta` is the thermal frequency `k_B T/ħ` in the same units as
    /// `omega`; `theta = 0` selects the exact zero-temperature branch.
    #[inline]
    pub fn hadamard(&self, omega: f64, theta: f64) -> f64 {
        2.0 * self.im_alpha_over_omega(omega) * thermal_kernel(omega, theta)
    }

    pub fn try_hadamard(&self, omega: f64, theta: f64) -> Result<f64> {
        self.try_alpha(omega)?;
        Ok(self.hadamard(omega, theta))
    }
}

/// `x coth x`, with its Taylor series near zero.
pub fn xcoth(x: f64) -> f64 {
    let ax = x.abs();
    if ax < 1e-4 {
        let x2 = x * x;
        1.0 + x2 / 3.0 - x2 * x2 / 45.0
    } else if ax > 40.0 {
        ax
    } else {
        x / x.tanh()
    }
}

/// `ω coth(ω/2θ)`; reduces to `|ω|` at `θ = 0` and to `2θ` at `ω = 0`.
#[inline]
pub fn thermal_kernel(omega: f64, theta: f64) -> f64 {
    if theta == 0.0 {
        omega.abs()
    } else {
        2.0 * theta * xcoth(omega / (2.0 * theta))
    }
}

/// The FDT weight `coth(ω/2θ)`, or `sgn ω` at `θ = 0` (with `sgn 0 = 0`).
///
/// Diverges at `ω = 0` for `θ > 0`.
pub fn coth_weight(omega: f64, theta: f64) -> f64 {
    if theta == 0.0 {
        if omega > 0.0 {
            1.0
        } else if omega < 0.0 {
            -1.0
        } else {
            0.0
        }
    } else {
        1.0 / (omega / (2.0 * theta)).tanh()
    }
}

/// SI polarizability `α(ω)` (C·m²/V) of a sphere at rest.
pub fn polarizability(sphere: &SpinningSphere, omega: f64) -> Result<Complex64> {
    sphere.oscillator().try_alpha(omega)
}

/// SI rest-frame Hadamard function of a sphere at temperature `temperature` (K).
pub fn hadamard(sphere: &SpinningSphere, omega: f64, temperature: f64) -> Result<f64> {
    if !(temperature.is_finite() && temperature >= 0.0) {
        return Err(Error::invalid("temperature", format!("must be >= 0 K, got {temperature}")));
    }
    let osc = sphere.oscillator();
    if temperature > 0.0 && osc.damping == 0.0 {
        return Err(Error::invalid(
            "gamma0",
            "a finite-temperature Hadamard function needs gamma0 > 0",
        ));
    }
    osc.try_hadamard(omega, thermal_frequency(temperature))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::{HBAR, K_B};

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    fn bst_sphere() -> SpinningSphere {
        SpinningSphere::at_rest(60e-9, MaterialModel::bst(), 300.0).unwrap()
    }

    fn scale() -> f64 {
        4.0 * PI * EPSILON_0 * (60e-9_f64).powi(3)
    }

    #[test]
    fn static_permittivity_is_one_plus_f0() {
        let eps = permittivity(&MaterialModel::bst(), Complex64::new(0.0, 0.0)).unwrap();
        assert!((eps.re - 13.2).abs() < 1e-12);
        assert_eq!(eps.im, 0.0);
    }

    #[test]
    fn permittivity_transparency_limit() {
        let eps = permittivity(&MaterialModel::bst(), Complex64::new(1e16, 0.0)).unwrap();
        assert!((eps - 1.0).norm() < 1e-8);
    }

    #[test]
    fn permittivity_at_imaginary_bare_frequency() {
        let m = MaterialModel::bst();
        let eps = permittivity(&m, Complex64::new(0.0, m.omega_tilde0)).unwrap();
        // 1 + 12.2 / (2 + γ₀/ω̃₀)
        let expected = 1.0 + 12.2 / (2.0 + 2.8e8 / 5.7e9);
        assert!(rel(eps.re, expected) < 1e-14);
        assert!(eps.im.abs() < 1e-14);
        assert!((eps.re - 6.954).abs() < 1e-3);
        assert!(rel(m.permittivity_imaginary_axis(m.omega_tilde0), expected) < 1e-14);
    }

    #[test]
    fn permittivity_exact_pole_is_an_error() {
        let m = MaterialModel::new(12.2, 5.7e9, 0.0).unwrap();
        let err = permittivity(&m, Complex64::new(5.7e9, 0.0)).unwrap_err();
        assert!(matches!(err, Error::PoleProximity { .. }));
    }

    #[test]
    fn material_validation() {
        assert!(MaterialModel::new(0.0, 1.0, 0.0).is_err());
        assert!(MaterialModel::new(1.0, -1.0, 0.0).is_err());
        assert!(MaterialModel::new(1.0, 1.0, -1e-3).is_err());
        assert!(MaterialModel::new(1.0, 1.0, 0.0).is_ok());
    }

    #[test]
    fn resonance_frequency_values() {
        let w0 = resonance_frequency(&MaterialModel::bst());
        assert!(rel(w0, 5.7e9 * (1.0 + 12.2 / 3.0_f64).sqrt()) < 1e-15);
        assert!((w0 / 1.283e10 - 1.0).abs() < 1e-3);
        let m = MaterialModel { f0: 0.0, omega_tilde0: 3.0, gamma0: 0.0 };
        assert_eq!(resonance_frequency(&m), 3.0);
        let m = MaterialModel { f0: 3.0, omega_tilde0: 3.0, gamma0: 0.0 };
        assert!(rel(resonance_frequency(&m), 3.0 * 2f64.sqrt()) < 1e-15);
    }

    #[test]
    fn static_polarizability() {
        let a = polarizability(&bst_sphere(), 0.0).unwrap();
        assert!(rel(a.re / scale(), 12.2 / 15.2) < 1e-13);
        assert!((a.re / scale() - 0.8026).abs() < 1e-4);
        assert_eq!(a.im, 0.0);
    }

    #[test]
    fn polarizability_on_resonance_is_imaginary() {
        let s = bst_sphere();
        let w0 = s.material.resonance_frequency();
        let a = polarizability(&s, w0).unwrap();
        let m = s.material;
        let expected = scale() * m.f0 * m.omega_tilde0.powi(2) / (3.0 * m.gamma0 * w0);
        assert!(a.re.abs() < 1e-8 * a.im.abs());
        assert!(rel(a.im, expected) < 1e-10);
    }

    #[test]
    fn dissipationless_pole_is_an_error() {
        let m = MaterialModel::new(12.2, 5.7e9, 0.0).unwrap();
        let s = SpinningSphere::at_rest(60e-9, m, 0.0).unwrap();
        let err = polarizability(&s, m.resonance_frequency()).unwrap_err();
        assert!(matches!(err, Error::PoleProximity { .. }));
    }

    #[test]
    fn polarizability_symmetries() {
        let s = bst_sphere();
        let w0 = s.material.resonance_frequency();
        for &x in &[0.1, 0.9, 1.0, 1.3, 4.0] {
            let p = polarizability(&s, x * w0).unwrap();
            let m = polarizability(&s, -x * w0).unwrap();
            assert!((m - p.conj()).norm() <= 1e-14 * p.norm());
            assert!(p.im > 0.0);
        }
    }

    #[test]
    fn hadamard_zero_temperature_is_sign_weighted() {
        let s = bst_sphere();
        let w0 = s.material.resonance_frequency();
        for &x in &[-2.0, -0.5, 0.3, 1.0, 2.5] {
            let w = x * w0;
            let eta = hadamard(&s, w, 0.0).unwrap();
            let expected = 2.0 * w.signum() * polarizability(&s, w).unwrap().im;
            assert!(rel(eta, expected) < 1e-13);
        }
        assert_eq!(hadamard(&s, 0.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn hadamard_is_even() {
        let s = bst_sphere();
        let w0 = s.material.resonance_frequency();
        for &t in &[0.0, 300.0, 1500.0] {
            for &x in &[0.01, 0.7, 1.0, 3.0] {
                let a = hadamard(&s, x * w0, t).unwrap();
                let b = hadamard(&s, -x * w0, t).unwrap();
                assert_eq!(a, b);
                assert!(a >= 0.0);
            }
        }
    }

    #[test]
    fn hadamard_zero_frequency_limit() {
        let s = bst_sphere();
        let m = s.material;
        let w0 = m.resonance_frequency();
        let t = 1500.0;
        let expected = 4.0 * K_B * t / HBAR * scale() * m.f0 * m.omega_tilde0.powi(2) * m.gamma0
            / (3.0 * w0.powi(4));
        let eta0 = hadamard(&s, 0.0, t).unwrap();
        assert!(rel(eta0, expected) < 1e-13);
        // continuity with the coth form slightly off zero
        let w = 1e-6 * w0;
        let coth_form =
            2.0 / (HBAR * w / (2.0 * K_B * t)).tanh() * polarizability(&s, w).unwrap().im;
        assert!(rel(eta0, coth_form) < 1e-9);
    }

    #[test]
    fn hadamard_matches_coth_form() {
        let s = bst_sphere();
        let w0 = s.material.resonance_frequency();
        for &t in &[300.0, 1500.0] {
            for &x in &[0.05, 0.9, 1.0, 2.0] {
                let w = x * w0;
                let coth = 1.0 / (HBAR * w / (2.0 * K_B * t)).tanh();
                let expected = 2.0 * coth * polarizability(&s, w).unwrap().im;
                assert!(rel(hadamard(&s, w, t).unwrap(), expected) < 1e-13);
            }
        }
    }

    #[test]
    fn xcoth_series_joins_smoothly() {
        for &x in &[9.9e-5_f64, 1.0001e-4] {
            let direct = x / x.tanh();
            assert!(rel(xcoth(x), direct) < 1e-15);
        }
        assert_eq!(xcoth(0.0), 1.0);
        assert!(rel(xcoth(-50.0), 50.0) < 1e-15);
    }
}
