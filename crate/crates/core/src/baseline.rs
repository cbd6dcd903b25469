//! Static reference quantities: the Matsubara-sum energy of two spheres at
//! rest, the Hamaker constant, the Hamaker-based force estimate, and the
//! →→ energy obtained by wrongly applying the equilibrium FDT in the lab
//! frame.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quadrature::integrate_half_line;
use crate::response::MaterialModel;
use crate::spectral::{Evaluation, PairContext, SpectralSolver, Tolerances};
use crate::units::{HBAR, K_B};

/// Truncation settings for a Matsubara sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatsubaraSpec {
    /// K; must be positive.
    pub temperature: f64,
    pub max_terms: usize,
    /// Stop once a term falls below `term_tol` times the partial sum.
    pub term_tol: f64,
}

impl MatsubaraSpec {
    pub const DEFAULT_MAX_TERMS: usize = 10_000_000;
    pub const DEFAULT_TERM_TOL: f64 = 1e-10;

    pub fn new(temperature: f64) -> Self {
        Self {
            temperature,
            max_terms: Self::DEFAULT_MAX_TERMS,
            term_tol: Self::DEFAULT_TERM_TOL,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.temperature.is_finite() && self.temperature > 0.0) {
            return Err(Error::invalid(
                "temperature",
                format!("the Matsubara sum needs T > 0, got {}", self.temperature),
            ));
        }
        if self.max_terms < 1 {
            return Err(Error::invalid("max_terms", "must be >= 1"));
        }
        if !(self.term_tol > 0.0) {
            return Err(Error::invalid("term_tol", format!("must be > 0, got {}", self.term_tol)));
        }
        Ok(())
    }

    /// `ξₙ = 2πn k_BT/ħ`.
    pub fn frequency(&self, n: usize) -> f64 {
        2.0 * PI * n as f64 * K_B * self.temperature / HBAR
    }

    /// `Σ′ₙ term(ξₙ)` with the `n = 0` term halved.
    fn sum(&self, term: impl Fn(f64) -> f64) -> Result<f64> {
        self.validate()?;
        let mut partial = 0.5 * term(0.0);
        let mut last = partial;
        for n in 1..self.max_terms {
            last = term(self.frequency(n));
            partial += last;
            if last.abs() < self.term_tol * partial.abs() {
                return Ok(partial);
            }
        }
        Err(Error::MatsubaraNonConvergence {
            terms: self.max_terms,
            partial,
            last_term: last,
        })
    }
}

/// Clausius–Mossotti factor `(ε − 1)/(ε + 2)` on the imaginary axis.
fn clausius_mossotti(material: &MaterialModel, xi: f64) -> f64 {
    let eps = material.permittivity_imaginary_axis(xi);
    (eps - 1.0) / (eps + 2.0)
}

/// Static interaction energy (J) of two spheres at rest as a Matsubara sum,
/// `−(6k_BT a_A³a_B³/R⁶) Σ′ₙ Δ_A(iξₙ)Δ_B(iξₙ)`.
pub fn matsubara_static_energy(ctx: &PairContext, spec: &MatsubaraSpec) -> Result<f64> {
    ctx.validate()?;
    let (ma, mb) = (&ctx.sphere_a.material, &ctx.sphere_b.material);
    let sum = spec.sum(|xi| clausius_mossotti(ma, xi) * clausius_mossotti(mb, xi))?;
    let geometry = (ctx.sphere_a.radius * ctx.sphere_b.radius).powi(3) / ctx.separation.powi(6);
    Ok(-6.0 * K_B * spec.temperature * geometry * sum)
}

/// Non-retarded Hamaker constant (J) of a material across vacuum,
/// `(3/2)k_BT Σ′ₙ [(ε(iξₙ) − 1)/(ε(iξₙ) + 1)]²`.
pub fn hamaker_constant(material: &MaterialModel, spec: &MatsubaraSpec) -> Result<f64> {
    material.validate()?;
    let sum = spec.sum(|xi| {
        let eps = material.permittivity_imaginary_axis(xi);
        let r = (eps - 1.0) / (eps + 1.0);
        r * r
    })?;
    Ok(1.5 * K_B * spec.temperature * sum)
}

fn check_estimate_inputs(hamaker: f64, radius: f64, separation: f64) -> Result<()> {
    for (name, v) in [("hamaker", hamaker), ("radius", radius), ("separation", separation)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::invalid(name, format!("must be > 0, got {v}")));
        }
    }
    Ok(())
}

/// `E ≈ −(16/9) H (a/R)⁶` (J) for two identical spheres.
pub fn static_energy_estimate(hamaker: f64, radius: f64, separation: f64) -> Result<f64> {
    check_estimate_inputs(hamaker, radius, separation)?;
    Ok(-16.0 / 9.0 * hamaker * (radius / separation).powi(6))
}

/// `F = 6E/R` (N) from [`static_energy_estimate`]; negative is attractive.
pub fn static_force_estimate(hamaker: f64, radius: f64, separation: f64) -> Result<f64> {
    Ok(6.0 * static_energy_estimate(hamaker, radius, separation)? / separation)
}

/// The →→ energy obtained by imposing the equilibrium FDT on the lab-frame
/// tensors, at zero temperature (the sphere temperatures in `ctx` are not
/// used), in reduced units.
pub fn naive_fdt_energy_rr_reduced(solver: &SpectralSolver, spin_a: f64, spin_b: f64) -> Result<Evaluation> {
    let p = solver.reduced_pair();
    let (a, b) = (p.a, p.b);
    let f = |w: f64| {
        let shifted = (a.alpha(w + spin_a) + a.alpha(w - spin_a)) * (b.alpha(w + spin_b) + b.alpha(w - spin_b));
        (shifted + 8.0 * a.alpha(w) * b.alpha(w)) * 0.25
    };
    let integral = integrate_half_line(f, &solver.quadrature_spec(&[spin_a, spin_b]))?;
    Ok(Evaluation {
        value: -integral.value.im / PI,
        error: integral.error / PI,
        evaluations: integral.evaluations,
    })
}

/// [`naive_fdt_energy_rr_reduced`] in joules for spin rates in rad/s.
pub fn naive_fdt_energy_rr(ctx: &PairContext, omega_a: f64, omega_b: f64) -> Result<f64> {
    let solver = SpectralSolver::new(*ctx, Tolerances::default())?;
    let u = solver.units();
    let e = naive_fdt_energy_rr_reduced(&solver, u.reduce_frequency(omega_a), u.reduce_frequency(omega_b))?;
    Ok(u.energy_si(e.value))
}
