//! Interaction energies of the canonical spin arrangements and the forces
//! derived from them.
//!
//! | kind | axis A | axis B | R̂ | energy |
//! |------|--------|--------|----|--------|
//! | →→ | ẑ | ẑ | ẑ | `4[𝓔(Ω_A−Ω_B) + 2𝓔(0)]` |
//! | ↑↑ | ẑ | ẑ | x̂ | `𝓔(Ω_A−Ω_B) + 9𝓔(Ω_A+Ω_B) + 2𝓔(0)` |
//! | ↑→ | ẑ | x̂ | x̂ | `8𝓔(Ω_A) + 2𝓔(Ω_B) + 𝓔(Ω_A−Ω_B) + 𝓔(Ω_A+Ω_B)` |
//! | ↑⊙ | ẑ | ŷ | x̂ | `2𝓔(Ω_A) + 2𝓔(Ω_B) + 4𝓔(Ω_A−Ω_B) + 4𝓔(Ω_A+Ω_B)` |
//!
//! Every term scales as `R⁻⁶`, so the radial force is exactly `F = 6E/R`
//! (negative for attraction).

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::RwLock;

use nalgebra::Vector3;

use crate::error::{Error, Result};
use crate::response::check_unit_axis;
use crate::spectral::{PairContext, SpectralSolver, Tolerances};

/// Resolution of the `𝓔` cache key in units of `ω₀(A)`.
pub const CACHE_QUANTUM: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArrangementKind {
    /// →→: both axes along the line joining the centres.
    Rr,
    /// ↑↑: parallel axes perpendicular to the line.
    Uu,
    /// ↑→: A perpendicular, B along the line.
    Ur,
    /// ↑⊙: perpendicular axes, both perpendicular to the line.
    Uo,
    General,
}

impl ArrangementKind {
    pub const CANONICAL: [ArrangementKind; 4] = [Self::Rr, Self::Uu, Self::Ur, Self::Uo];

    pub fn name(self) -> &'static str {
        match self {
            Self::Rr => "rr",
            Self::Uu => "uu",
            Self::Ur => "ur",
            Self::Uo => "uo",
            Self::General => "general",
        }
    }
}

impl fmt::Display for ArrangementKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ArrangementKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rr" => Ok(Self::Rr),
            "uu" => Ok(Self::Uu),
            "ur" => Ok(Self::Ur),
            "uo" => Ok(Self::Uo),
            "general" => Ok(Self::General),
            other => Err(Error::invalid(
                "arrangement",
                format!("unknown arrangement `{other}` (expected rr, uu, ur, uo or general)"),
            )),
        }
    }
}

/// Spin axes of both spheres and the unit vector from A to B.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arrangement {
    pub kind: ArrangementKind,
    pub axis_a: Vector3<f64>,
    pub axis_b: Vector3<f64>,
    pub direction: Vector3<f64>,
}

impl Arrangement {
    pub fn canonical(kind: ArrangementKind) -> Result<Self> {
        let (x, y, z) = (Vector3::x(), Vector3::y(), Vector3::z());
        let (axis_a, axis_b, direction) = match kind {
            ArrangementKind::Rr => (z, z, z),
            ArrangementKind::Uu => (z, z, x),
            ArrangementKind::Ur => (z, x, x),
            ArrangementKind::Uo => (z, y, x),
            ArrangementKind::General => {
                return Err(Error::invalid("arrangement", "general arrangements need explicit axes"))
            }
        };
        Ok(Self {
            kind,
            axis_a,
            axis_b,
            direction,
        })
    }

    pub fn rr() -> Self {
        Self::canonical(ArrangementKind::Rr).unwrap()
    }

    pub fn uu() -> Self {
        Self::canonical(ArrangementKind::Uu).unwrap()
    }

    pub fn ur() -> Self {
        Self::canonical(ArrangementKind::Ur).unwrap()
    }

    pub fn uo() -> Self {
        Self::canonical(ArrangementKind::Uo).unwrap()
    }

    pub fn general(axis_a: Vector3<f64>, axis_b: Vector3<f64>, direction: Vector3<f64>) -> Result<Self> {
        check_unit_axis("axis_a", &axis_a)?;
        check_unit_axis("axis_b", &axis_b)?;
        check_unit_axis("direction", &direction)?;
        Ok(Self {
            kind: ArrangementKind::General,
            axis_a,
            axis_b,
            direction,
        })
    }

    /// The same axes, evaluated through the full tensor contraction.
    pub fn as_general(&self) -> Self {
        Self {
            kind: ArrangementKind::General,
            ..*self
        }
    }
}

/// Energies and forces of one sphere pair across spin rates and arrangements.
///
/// Values of `𝓔` are cached by `|Ω|` (quantised to [`CACHE_QUANTUM`]·ω₀) and
/// always computed at the quantised rate, so results do not depend on which
/// caller filled the cache first.
#[derive(Debug)]
pub struct InteractionModel {
    solver: SpectralSolver,
    cache: RwLock<HashMap<i64, f64>>,
}

impl InteractionModel {
    /// The spins, axes and direction stored in `ctx` are ignored; they are
    /// supplied per call.
    pub fn new(ctx: PairContext, tol: Tolerances) -> Result<Self> {
        Ok(Self {
            solver: SpectralSolver::new(ctx, tol)?,
            cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn context(&self) -> &PairContext {
        self.solver.context()
    }

    pub fn solver(&self) -> &SpectralSolver {
        &self.solver
    }

    pub fn omega0(&self) -> f64 {
        self.context().omega0()
    }

    /// `𝓔` at a reduced rate, in reduced energy units.
    pub fn aux_reduced(&self, spin: f64) -> Result<f64> {
        let scaled = (spin.abs() / CACHE_QUANTUM).round();
        if !(scaled.is_finite() && scaled < i64::MAX as f64) {
            return Err(Error::invalid("Omega", format!("rotation rate {spin} out of range")));
        }
        let key = scaled as i64;
        if let Some(&v) = self.cache.read().unwrap().get(&key) {
            return Ok(v);
        }
        let v = self.solver.aux_energy_reduced(key as f64 * CACHE_QUANTUM)?.value;
        self.cache.write().unwrap().insert(key, v);
        Ok(v)
    }

    /// `𝓔(Ω)` in joules, `Ω` in rad/s.
    pub fn aux(&self, omega: f64) -> Result<f64> {
        let u = self.solver.units();
        Ok(u.energy_si(self.aux_reduced(u.reduce_frequency(omega))?))
    }

    pub fn cached_values(&self) -> usize {
        self.cache.read().unwrap().len()
    }

    fn assemble(&self, terms: &[(f64, f64)]) -> Result<f64> {
        let mut sum = 0.0;
        for &(c, spin) in terms {
            sum += c * self.aux_reduced(spin)?;
        }
        Ok(self.solver.units().energy_si(sum))
    }

    fn reduce(&self, omega_a: f64, omega_b: f64) -> (f64, f64) {
        let u = self.solver.units();
        (u.reduce_frequency(omega_a), u.reduce_frequency(omega_b))
    }

    pub fn energy_rr(&self, omega_a: f64, omega_b: f64) -> Result<f64> {
        let (a, b) = self.reduce(omega_a, omega_b);
        self.assemble(&[(4.0, a - b), (8.0, 0.0)])
    }

    pub fn energy_uu(&self, omega_a: f64, omega_b: f64) -> Result<f64> {
        let (a, b) = self.reduce(omega_a, omega_b);
        self.assemble(&[(1.0, a - b), (9.0, a + b), (2.0, 0.0)])
    }

    pub fn energy_ur(&self, omega_a: f64, omega_b: f64) -> Result<f64> {
        let (a, b) = self.reduce(omega_a, omega_b);
        self.assemble(&[(8.0, a), (2.0, b), (1.0, a - b), (1.0, a + b)])
    }

    pub fn energy_uo(&self, omega_a: f64, omega_b: f64) -> Result<f64> {
        let (a, b) = self.reduce(omega_a, omega_b);
        self.assemble(&[(2.0, a), (2.0, b), (4.0, a - b), (4.0, a + b)])
    }

    /// Energy of both spheres at rest, `12𝓔(0)`.
    pub fn energy_at_rest(&self) -> Result<f64> {
        self.assemble(&[(12.0, 0.0)])
    }

    /// Tensor-contracted energy for arbitrary axes (no cache).
    pub fn energy_general(&self, arrangement: &Arrangement, omega_a: f64, omega_b: f64) -> Result<f64> {
        let ctx = self
            .context()
            .with_geometry(arrangement.axis_a, arrangement.axis_b, arrangement.direction)?;
        let solver = SpectralSolver::new(ctx, self.solver.tolerances())?;
        let (a, b) = self.reduce(omega_a, omega_b);
        Ok(solver.units().energy_si(solver.general_energy_reduced(a, b)?.value))
    }

    pub fn energy(&self, arrangement: &Arrangement, omega_a: f64, omega_b: f64) -> Result<f64> {
        match arrangement.kind {
            ArrangementKind::Rr => self.energy_rr(omega_a, omega_b),
            ArrangementKind::Uu => self.energy_uu(omega_a, omega_b),
            ArrangementKind::Ur => self.energy_ur(omega_a, omega_b),
            ArrangementKind::Uo => self.energy_uo(omega_a, omega_b),
            ArrangementKind::General => self.energy_general(arrangement, omega_a, omega_b),
        }
    }

    /// Radial force `6E/R` (N); negative is attractive.
    pub fn force(&self, arrangement: &Arrangement, omega_a: f64, omega_b: f64) -> Result<f64> {
        Ok(force_from_energy(
            self.energy(arrangement, omega_a, omega_b)?,
            self.context().separation,
        ))
    }

    /// `E(Ω_A, Ω_B) − E(0, 0)` (J).
    pub fn delta_energy(&self, arrangement: &Arrangement, omega_a: f64, omega_b: f64) -> Result<f64> {
        Ok(self.energy(arrangement, omega_a, omega_b)? - self.energy(arrangement, 0.0, 0.0)?)
    }

    /// `F(Ω_A, Ω_B) − F(0, 0)` (N); positive is a repulsive contribution.
    pub fn delta_force(&self, arrangement: &Arrangement, omega_a: f64, omega_b: f64) -> Result<f64> {
        Ok(force_from_energy(
            self.delta_energy(arrangement, omega_a, omega_b)?,
            self.context().separation,
        ))
    }
}

/// `F = −∂E/∂R = 6E/R` for an energy scaling as `R⁻⁶`.
pub fn force_from_energy(energy: f64, separation: f64) -> f64 {
    6.0 * energy / separation
}

fn model(ctx: &PairContext) -> Result<InteractionModel> {
    InteractionModel::new(*ctx, Tolerances::default())
}

/// `E_→→` (J) with default tolerances.
pub fn energy_rr(ctx: &PairContext, omega_a: f64, omega_b: f64) -> Result<f64> {
    model(ctx)?.energy_rr(omega_a, omega_b)
}

/// `E_↑↑` (J) with default tolerances.
pub fn energy_uu(ctx: &PairContext, omega_a: f64, omega_b: f64) -> Result<f64> {
    model(ctx)?.energy_uu(omega_a, omega_b)
}

/// `E_↑→` (J) with default tolerances.
pub fn energy_ur(ctx: &PairContext, omega_a: f64, omega_b: f64) -> Result<f64> {
    model(ctx)?.energy_ur(omega_a, omega_b)
}

/// `E_↑⊙` (J) with default tolerances.
pub fn energy_uo(ctx: &PairContext, omega_a: f64, omega_b: f64) -> Result<f64> {
    model(ctx)?.energy_uo(omega_a, omega_b)
}

/// Radial force (N) with default tolerances.
pub fn force(ctx: &PairContext, arrangement: &Arrangement, omega_a: f64, omega_b: f64) -> Result<f64> {
    model(ctx)?.force(arrangement, omega_a, omega_b)
}

/// `F(Ω_A, Ω_B) − F(0, 0)` (N) with default tolerances.
pub fn delta_force(ctx: &PairContext, arrangement: &Arrangement, omega_a: f64, omega_b: f64) -> Result<f64> {
    model(ctx)?.delta_force(arrangement, omega_a, omega_b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::response::{MaterialModel, SpinningSphere};

    fn model(temperature: f64) -> InteractionModel {
        let s = SpinningSphere::at_rest(60e-9, MaterialModel::bst(), temperature).unwrap();
        let ctx = PairContext::new(s, s, 180e-9, Vector3::z()).unwrap();
        InteractionModel::new(ctx, Tolerances::default()).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn canonical_axes() {
        let uo = Arrangement::uo();
        assert_eq!(uo.axis_a, Vector3::z());
        assert_eq!(uo.axis_b, Vector3::y());
        assert_eq!(uo.direction, Vector3::x());
        assert!(Arrangement::canonical(ArrangementKind::General).is_err());
        assert!(Arrangement::general(Vector3::z(), Vector3::new(0.0, 2.0, 0.0), Vector3::x()).is_err());
        for k in ArrangementKind::CANONICAL {
            assert_eq!(k.name().parse::<ArrangementKind>().unwrap(), k);
        }
    }

    #[test]
    fn all_arrangements_agree_at_rest() {
        let m = model(300.0);
        let e0 = m.energy_at_rest().unwrap();
        for k in ArrangementKind::CANONICAL {
            let e = m.energy(&Arrangement::canonical(k).unwrap(), 0.0, 0.0).unwrap();
            assert!(rel(e, e0) < 1e-14, "{k}");
        }
        assert!(e0 < 0.0);
    }

    #[test]
    fn rr_depends_on_relative_rate_only() {
        let m = model(300.0);
        let w0 = m.omega0();
        let e = m.energy_rr(1.2 * w0, 0.4 * w0).unwrap();
        let shifted = m.energy_rr(2.9 * w0, 2.1 * w0).unwrap();
        assert!(rel(shifted, e) < 1e-9);
        assert!(rel(m.energy_rr(w0, w0).unwrap(), m.energy_at_rest().unwrap()) < 1e-14);
    }

    #[test]
    fn ur_without_b_spin() {
        let m = model(300.0);
        let w = 0.8 * m.omega0();
        let expected = 10.0 * m.aux(w).unwrap() + 2.0 * m.aux(0.0).unwrap();
        assert!(rel(m.energy_ur(w, 0.0).unwrap(), expected) < 1e-14);
    }

    #[test]
    fn uo_is_symmetric() {
        let m = model(300.0);
        let w0 = m.omega0();
        let x = m.energy_uo(0.3 * w0, 1.7 * w0).unwrap();
        let y = m.energy_uo(1.7 * w0, 0.3 * w0).unwrap();
        assert!(rel(x, y) < 1e-14);
    }

    #[test]
    fn force_is_six_energy_over_r() {
        let m = model(300.0);
        let a = Arrangement::uu();
        let e = m.energy(&a, 0.5 * m.omega0(), 0.0).unwrap();
        let f = m.force(&a, 0.5 * m.omega0(), 0.0).unwrap();
        assert_eq!(f, 6.0 * e / 180e-9);
        assert!(f < 0.0);
        assert_eq!(m.delta_force(&a, 0.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn cache_is_keyed_on_magnitude() {
        let m = model(300.0);
        let w0 = m.omega0();
        m.aux(0.7 * w0).unwrap();
        m.aux(-0.7 * w0).unwrap();
        assert_eq!(m.cached_values(), 1);
        m.energy_uu(0.2 * w0, -0.2 * w0).unwrap();
        assert_eq!(m.cached_values(), 3);
    }
}
