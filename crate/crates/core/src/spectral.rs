//! Spectral interaction integrals.
//!
//! All integrals run in the reduced units of [`UnitSystem`]: frequencies in
//! units of `ω₀(A)`, polarizabilities in units of `4πε₀a_A³`, energies in
//! units of `ħω₀(A)(a_A/R)⁶`. In those units
//!
//! ```text
//! 𝓔_{B→A}(Ω) = −(1/32π) ∫ [α^A(ω+Ω) + α^A(ω−Ω)] η^B(ω) dω
//! 𝓔_{A→B}(Ω) = −(1/32π) ∫ [η^A(ω+Ω) + η^A(ω−Ω)] α^B(ω) dω
//! E          = −(1/8π)  ∫ tr(α^Aᵀ D η^B* D) + tr(η^A*ᵀ D α^B D) dω,  D = I − 3R̂R̂ᵀ
//! ```

use std::f64::consts::PI;

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::{graded_breakpoints, integrate_spectrum, Integral, QuadratureSpec};
use crate::response::{check_unit_axis, Oscillator, SpinningSphere};
use crate::rotation::{rotate_matrix, rotation_to_axis, spin_matrix};
use crate::units::UnitSystem;

/// Largest separation accepted as non-retarded (m).
pub const MAX_SEPARATION: f64 = 1e-2;

/// Two spheres, their separation and the unit vector from A to B.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairContext {
    pub sphere_a: SpinningSphere,
    pub sphere_b: SpinningSphere,
    /// Centre-to-centre distance `R` (m).
    pub separation: f64,
    pub direction: Vector3<f64>,
}

impl PairContext {
    pub fn new(
        sphere_a: SpinningSphere,
        sphere_b: SpinningSphere,
        separation: f64,
        direction: Vector3<f64>,
    ) -> Result<Self> {
        let ctx = Self {
            sphere_a,
            sphere_b,
            separation,
            direction,
        };
        ctx.validate()?;
        Ok(ctx)
    }

    pub fn validate(&self) -> Result<()> {
        self.sphere_a.validate()?;
        self.sphere_b.validate()?;
        let r = self.separation;
        let contact = self.sphere_a.radius + self.sphere_b.radius;
        if !(r.is_finite() && r > contact) {
            return Err(Error::invalid(
                "separation",
                format!("must exceed the sum of radii {contact:e} m, got {r:e}"),
            ));
        }
        if r >= MAX_SEPARATION {
            return Err(Error::invalid(
                "separation",
                format!("{r:e} m is outside the non-retarded regime (< {MAX_SEPARATION:e} m)"),
            ));
        }
        check_unit_axis("direction", &self.direction)
    }

    /// Same pair with new spin rates.
    pub fn with_spins(&self, omega_a: f64, omega_b: f64) -> Self {
        let mut c = *self;
        c.sphere_a.omega = omega_a;
        c.sphere_b.omega = omega_b;
        c
    }

    /// Same pair with new spin axes and separation direction.
    pub fn with_geometry(
        &self,
        axis_a: Vector3<f64>,
        axis_b: Vector3<f64>,
        direction: Vector3<f64>,
    ) -> Result<Self> {
        let mut c = *self;
        c.sphere_a.axis = axis_a;
        c.sphere_b.axis = axis_b;
        c.direction = direction;
        c.validate()?;
        Ok(c)
    }

    pub fn with_separation(&self, separation: f64) -> Result<Self> {
        let mut c = *self;
        c.separation = separation;
        c.validate()?;
        Ok(c)
    }

    /// The pair with the roles of A and B exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            sphere_a: self.sphere_b,
            sphere_b: self.sphere_a,
            separation: self.separation,
            direction: -self.direction,
        }
    }

    /// Resonance frequency of sphere A (rad/s), the reference frequency.
    pub fn omega0(&self) -> f64 {
        self.sphere_a.material.resonance_frequency()
    }

    pub fn units(&self) -> UnitSystem {
        UnitSystem::new(self.omega0(), self.sphere_a.radius, self.separation)
    }

    pub fn reduced(&self) -> ReducedPair {
        let units = self.units();
        let scale = |o: Oscillator| Oscillator {
            strength: o.strength / (units.alpha_scale * units.omega_scale * units.omega_scale),
            resonance: units.reduce_frequency(o.resonance),
            damping: units.reduce_frequency(o.damping),
        };
        ReducedPair {
            a: scale(self.sphere_a.oscillator()),
            b: scale(self.sphere_b.oscillator()),
            theta_a: units.reduce_temperature(self.sphere_a.temperature),
            theta_b: units.reduce_temperature(self.sphere_b.temperature),
            units,
        }
    }
}

/// Oscillators and thermal frequencies of a pair in reduced units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedPair {
    pub a: Oscillator,
    pub b: Oscillator,
    pub theta_a: f64,
    pub theta_b: f64,
    pub units: UnitSystem,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub rel_tol: f64,
    /// Absolute tolerance in reduced energy units.
    pub abs_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            abs_tol: 1e-12,
        }
    }
}

/// A converged spectral energy in reduced units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

/// Evaluates the spectral integrals of one pair.
#[derive(Debug, Clone)]
pub struct SpectralSolver {
    ctx: PairContext,
    pair: ReducedPair,
    tol: Tolerances,
}

impl SpectralSolver {
    pub fn new(ctx: PairContext, tol: Tolerances) -> Result<Self> {
        ctx.validate()?;
        if !(tol.rel_tol > 0.0 && tol.abs_tol >= 0.0) {
            return Err(Error::invalid("rel_tol", "tolerances must be positive"));
        }
        for (name, s) in [("sphere_a.gamma0", &ctx.sphere_a), ("sphere_b.gamma0", &ctx.sphere_b)] {
            if !(s.material.gamma0 > 0.0) {
                return Err(Error::invalid(
                    name,
                    "spectral integrals need gamma0 > 0; use the oracle module for the dissipationless model",
                ));
            }
        }
        Ok(Self {
            pair: ctx.reduced(),
            ctx,
            tol,
        })
    }

    pub fn context(&self) -> &PairContext {
        &self.ctx
    }

    pub fn reduced_pair(&self) -> &ReducedPair {
        &self.pair
    }

    pub fn tolerances(&self) -> Tolerances {
        self.tol
    }

    pub fn units(&self) -> UnitSystem {
        self.pair.units
    }

    /// Quadrature layout for rotation rates `spins` (reduced): breakpoints
    /// graded around every Doppler-shifted resonance and every sign kink.
    pub fn quadrature_spec(&self, spins: &[f64]) -> QuadratureSpec {
        let (a, b) = (&self.pair.a, &self.pair.b);
        let w0 = [a.resonance, b.resonance];
        let mut window = w0[0].max(w0[1]);
        let mut centers = vec![0.0];
        for &w in &w0 {
            centers.extend([w, -w]);
        }
        for &s in spins {
            window = window.max(s.abs() + w0[0]).max(s.abs() + w0[1]);
            centers.extend([s, -s]);
            for &w in &w0 {
                centers.extend([w + s, w - s, -w + s, -w - s]);
            }
        }
        let window = 50.0 * window;
        let width = a.damping.min(b.damping);
        let span = w0[0].max(w0[1]);
        let breakpoints = graded_breakpoints(&centers, width, span)
            .into_iter()
            .filter(|p| p.abs() < 0.99 * window);
        QuadratureSpec::new(self.tol.rel_tol, self.tol.abs_tol, window).with_breakpoints(breakpoints)
    }

    fn finish(&self, integral: Integral, prefactor: f64) -> Result<Evaluation> {
        let value = prefactor * integral.value;
        let error = prefactor.abs() * integral.error;
        let bound = self.tol.abs_tol.max(self.tol.rel_tol * value.re.abs()) + error;
        if value.im.abs() > bound {
            return Err(Error::ImaginaryResidue {
                real: value.re,
                imag: value.im,
                bound,
            });
        }
        Ok(Evaluation {
            value: value.re,
            error,
            evaluations: integral.evaluations,
        })
    }

    /// `𝓔_{B→A}` at reduced rotation rate `spin`.
    pub fn energy_ba_reduced(&self, spin: f64) -> Result<Evaluation> {
        let ReducedPair { a, b, theta_b, .. } = self.pair;
        let f = |w: f64| (a.alpha(w + spin) + a.alpha(w - spin)) * b.hadamard(w, theta_b);
        let integral = integrate_spectrum(f, &self.quadrature_spec(&[spin]))?;
        self.finish(integral, -1.0 / (32.0 * PI))
    }

    /// `𝓔_{A→B}` at reduced rotation rate `spin`.
    pub fn energy_ab_reduced(&self, spin: f64) -> Result<Evaluation> {
        let ReducedPair { a, b, theta_a, .. } = self.pair;
        let f = |w: f64| (a.hadamard(w + spin, theta_a) + a.hadamard(w - spin, theta_a)) * b.alpha(w);
        let integral = integrate_spectrum(f, &self.quadrature_spec(&[spin]))?;
        self.finish(integral, -1.0 / (32.0 * PI))
    }

    /// `𝓔(Ω) = 𝓔_{A→B} + 𝓔_{B→A}`, integrated as a single spectrum.
    pub fn aux_energy_reduced(&self, spin: f64) -> Result<Evaluation> {
        let ReducedPair {
            a, b, theta_a, theta_b, ..
        } = self.pair;
        let f = |w: f64| {
            (a.alpha(w + spin) + a.alpha(w - spin)) * b.hadamard(w, theta_b)
                + (a.hadamard(w + spin, theta_a) + a.hadamard(w - spin, theta_a)) * b.alpha(w)
        };
        let integral = integrate_spectrum(f, &self.quadrature_spec(&[spin]))?;
        self.finish(integral, -1.0 / (32.0 * PI))
    }

    /// Full tensor-contracted energy for reduced spin rates and the axes and
    /// direction stored in the context.
    pub fn general_energy_reduced(&self, spin_a: f64, spin_b: f64) -> Result<Evaluation> {
        let ReducedPair {
            a, b, theta_a, theta_b, ..
        } = self.pair;
        let rot_a = rotation_to_axis(&self.ctx.sphere_a.axis)?;
        let rot_b = rotation_to_axis(&self.ctx.sphere_b.axis)?;
        let n = self.ctx.direction;
        let d = (Matrix3::identity() - 3.0 * n * n.transpose()).map(|x| Complex64::new(x, 0.0));

        let tensor = |rot: &Matrix3<f64>, xi: &dyn Fn(f64) -> Complex64, spin: f64, w: f64| {
            rotate_matrix(rot, &spin_matrix(xi(w + spin), xi(w - spin), xi(w)))
        };
        let real = |x: f64| Complex64::new(x, 0.0);
        let alpha_a = |w: f64| a.alpha(w);
        let alpha_b = |w: f64| b.alpha(w);
        let eta_a = |w: f64| real(a.hadamard(w, theta_a));
        let eta_b = |w: f64| real(b.hadamard(w, theta_b));

        let f = |w: f64| {
            let aa = tensor(&rot_a, &alpha_a, spin_a, w);
            let ab = tensor(&rot_b, &alpha_b, spin_b, w);
            let ea = tensor(&rot_a, &eta_a, spin_a, w);
            let eb = tensor(&rot_b, &eta_b, spin_b, w);
            let first = aa.transpose() * d * eb.conjugate() * d;
            let second = ea.conjugate().transpose() * d * ab * d;
            first.trace() + second.trace()
        };
        let integral = integrate_spectrum(f, &self.quadrature_spec(&[spin_a, spin_b]))?;
        self.finish(integral, -1.0 / (8.0 * PI))
    }

    fn si(&self, eval: Result<Evaluation>) -> Result<f64> {
        Ok(self.pair.units.energy_si(eval?.value))
    }

    fn reduce(&self, omega: f64) -> f64 {
        self.pair.units.reduce_frequency(omega)
    }

    /// `𝓔_{B→A}(Ω)` in joules, `Ω` in rad/s.
    pub fn energy_ba(&self, omega: f64) -> Result<f64> {
        self.si(self.energy_ba_reduced(self.reduce(omega)))
    }

    /// `𝓔_{A→B}(Ω)` in joules, `Ω` in rad/s.
    pub fn energy_ab(&self, omega: f64) -> Result<f64> {
        self.si(self.energy_ab_reduced(self.reduce(omega)))
    }

    /// `𝓔(Ω)` in joules, `Ω` in rad/s.
    pub fn aux_energy(&self, omega: f64) -> Result<f64> {
        self.si(self.aux_energy_reduced(self.reduce(omega)))
    }

    /// Tensor-contracted energy in joules using the spins, axes and
    /// direction of the context.
    pub fn general_energy(&self) -> Result<f64> {
        let sa = self.reduce(self.ctx.sphere_a.omega);
        let sb = self.reduce(self.ctx.sphere_b.omega);
        self.si(self.general_energy_reduced(sa, sb))
    }
}

/// `𝓔_{B→A}(Ω)` (J) with default tolerances.
pub fn energy_ba(ctx: &PairContext, omega: f64) -> Result<f64> {
    SpectralSolver::new(*ctx, Tolerances::default())?.energy_ba(omega)
}

/// `𝓔_{A→B}(Ω)` (J) with default tolerances.
pub fn energy_ab(ctx: &PairContext, omega: f64) -> Result<f64> {
    SpectralSolver::new(*ctx, Tolerances::default())?.energy_ab(omega)
}

/// `𝓔(Ω)` (J) with default tolerances.
pub fn aux_energy(ctx: &PairContext, omega: f64) -> Result<f64> {
    SpectralSolver::new(*ctx, Tolerances::default())?.aux_energy(omega)
}

/// Tensor-contracted interaction energy (J) with default tolerances.
pub fn general_energy(ctx: &PairContext) -> Result<f64> {
    SpectralSolver::new(*ctx, Tolerances::default())?.general_energy()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::response::MaterialModel;

    fn ctx(temperature: f64) -> PairContext {
        let s = SpinningSphere::at_rest(60e-9, MaterialModel::bst(), temperature).unwrap();
        PairContext::new(s, s, 180e-9, Vector3::z()).unwrap()
    }

    fn solver(temperature: f64) -> SpectralSolver {
        SpectralSolver::new(ctx(temperature), Tolerances::default()).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn context_rejects_overlap_and_retardation() {
        let c = ctx(300.0);
        assert!(c.with_separation(100e-9).is_err());
        assert!(c.with_separation(2e-2).is_err());
        assert!(PairContext::new(c.sphere_a, c.sphere_b, 180e-9, Vector3::new(1.0, 1.0, 0.0)).is_err());
    }

    #[test]
    fn solver_needs_damping() {
        let mut c = ctx(0.0);
        c.sphere_b.material.gamma0 = 0.0;
        assert!(SpectralSolver::new(c, Tolerances::default()).is_err());
    }

    #[test]
    fn reduced_oscillator_of_a_has_unit_resonance() {
        let p = ctx(300.0).reduced();
        assert!((p.a.resonance - 1.0).abs() < 1e-15);
        assert!(rel(p.a.static_alpha(), 12.2 / 15.2) < 1e-14);
    }

    #[test]
    fn aux_is_sum_of_both_directions() {
        let s = solver(300.0);
        for spin in [0.0, 0.7, 2.3] {
            let ab = s.energy_ab_reduced(spin).unwrap().value;
            let ba = s.energy_ba_reduced(spin).unwrap().value;
            let aux = s.aux_energy_reduced(spin).unwrap().value;
            assert!(rel(ab + ba, aux) < 1e-7, "spin {spin}");
        }
    }

    #[test]
    fn identical_spheres_at_rest_split_evenly() {
        let s = solver(300.0);
        let ab = s.energy_ab_reduced(0.0).unwrap().value;
        let ba = s.energy_ba_reduced(0.0).unwrap().value;
        assert!(rel(ab, ba) < 1e-8);
        assert!(ab < 0.0);
    }

    #[test]
    fn aux_is_even() {
        let s = solver(1500.0);
        for spin in [0.4, 1.9, 3.1] {
            let p = s.aux_energy_reduced(spin).unwrap().value;
            let m = s.aux_energy_reduced(-spin).unwrap().value;
            assert!(rel(m, p) < 1e-8, "spin {spin}");
        }
    }

    #[test]
    fn shift_can_be_moved_onto_the_partner() {
        // ∫ [η^A(ω+Ω) + η^A(ω−Ω)] α^B(ω) dω = ∫ η^A(ω) [α^B(ω−Ω) + α^B(ω+Ω)] dω
        let s = solver(300.0);
        let ReducedPair { a, b, theta_a, .. } = *s.reduced_pair();
        let spin = 1.3;
        let direct = s.energy_ab_reduced(spin).unwrap().value;
        let f = |w: f64| (b.alpha(w - spin) + b.alpha(w + spin)) * a.hadamard(w, theta_a);
        let moved = integrate_spectrum(f, &s.quadrature_spec(&[spin])).unwrap().value.re / (-32.0 * PI);
        assert!(rel(moved, direct) < 1e-7);
    }

    #[test]
    fn general_at_rest_is_twelve_aux() {
        let s = solver(300.0);
        let e0 = s.general_energy_reduced(0.0, 0.0).unwrap().value;
        let aux = s.aux_energy_reduced(0.0).unwrap().value;
        assert!(rel(e0, 12.0 * aux) < 1e-7);
    }

    #[test]
    fn si_energy_uses_energy_scale() {
        let s = solver(300.0);
        let reduced = s.aux_energy_reduced(0.0).unwrap().value;
        let si = s.aux_energy(0.0).unwrap();
        assert!(rel(si, reduced * s.units().energy_scale) < 1e-14);
    }
}
