//! Closed forms for dissipationless single-resonance spheres at zero
//! temperature.
//!
//! With `α^ζ(ω) = α₀ζ ω₀ζ² / (ω₀ζ² − ω²)` the Hadamard functions collapse to
//! delta functions at `±ω₀ζ` and every spectral integral reduces to a sum of
//! residues. Nothing here touches the quadrature engine.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::spectral::PairContext;
use crate::units::{EPSILON_0, HBAR};

/// Exclusion radius around each pole, in units of the reference resonance.
pub const POLE_EXCLUSION: f64 = 1e-6;

/// Two undamped Lorentz spheres a distance `separation` apart (SI units).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzPair {
    pub alpha0_a: f64,
    pub alpha0_b: f64,
    pub omega0_a: f64,
    pub omega0_b: f64,
    pub separation: f64,
}

impl LorentzPair {
    pub fn new(alpha0_a: f64, alpha0_b: f64, omega0_a: f64, omega0_b: f64, separation: f64) -> Result<Self> {
        let p = Self {
            alpha0_a,
            alpha0_b,
            omega0_a,
            omega0_b,
            separation,
        };
        for (name, v) in [
            ("alpha0_a", alpha0_a),
            ("alpha0_b", alpha0_b),
            ("omega0_a", omega0_a),
            ("omega0_b", omega0_b),
            ("separation", separation),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(name, format!("must be > 0, got {v}")));
            }
        }
        Ok(p)
    }

    /// The dissipationless limit of the spheres in `ctx`: same static
    /// polarizabilities and resonances, damping and temperature dropped.
    pub fn from_context(ctx: &PairContext) -> Self {
        let a = ctx.sphere_a.oscillator();
        let b = ctx.sphere_b.oscillator();
        Self {
            alpha0_a: a.static_alpha(),
            alpha0_b: b.static_alpha(),
            omega0_a: a.resonance,
            omega0_b: b.resonance,
            separation: ctx.separation,
        }
    }

    pub fn swapped(&self) -> Self {
        Self {
            alpha0_a: self.alpha0_b,
            alpha0_b: self.alpha0_a,
            omega0_a: self.omega0_b,
            omega0_b: self.omega0_a,
            separation: self.separation,
        }
    }

    /// `ħ α₀A α₀B / (128 π² ε₀² R⁶)`.
    fn prefactor(&self) -> f64 {
        HBAR * self.alpha0_a * self.alpha0_b
            / (128.0 * PI * PI * EPSILON_0 * EPSILON_0 * self.separation.powi(6))
    }

    fn sum(&self) -> f64 {
        self.omega0_a + self.omega0_b
    }

    fn difference(&self) -> f64 {
        self.omega0_a - self.omega0_b
    }
}

fn exclude(omega: f64, poles: &[f64], reference: f64) -> Result<()> {
    let radius = POLE_EXCLUSION * reference;
    if !omega.is_finite() {
        return Err(Error::invalid("Omega", "must be finite"));
    }
    for &p in poles {
        for pole in [p, -p] {
            if (omega - pole).abs() < radius {
                return Err(Error::PoleExclusion { omega, pole, radius });
            }
        }
    }
    Ok(())
}

/// `𝓔_{B→A}(Ω)` (J): dipole induced in A by the fluctuations of B.
pub fn eba_closed(pair: &LorentzPair, omega: f64) -> Result<f64> {
    let (wa, wb) = (pair.omega0_a, pair.omega0_b);
    let s = pair.sum();
    let d = pair.difference();
    let o2 = omega * omega;
    if wa == wb {
        exclude(omega, &[s], wa)?;
        return Ok(-pair.prefactor() * wa * wa * wb / (s * s - o2));
    }
    exclude(omega, &[s, d], wa)?;
    Ok(-pair.prefactor() * wa * wa * wb * (wa * wa - wb * wb - o2) / ((o2 - s * s) * (o2 - d * d)))
}

/// `𝓔_{A→B}(Ω)` (J): [`eba_closed`] with A and B exchanged.
pub fn eab_closed(pair: &LorentzPair, omega: f64) -> Result<f64> {
    let e = eba_closed(&pair.swapped(), omega);
    if let Err(Error::PoleExclusion { omega, pole, .. }) = e {
        return Err(Error::PoleExclusion {
            omega,
            pole,
            radius: POLE_EXCLUSION * pair.omega0_a,
        });
    }
    e
}

/// `𝓔(Ω) = 𝓔_{A→B} + 𝓔_{B→A}` (J). The poles at `Ω = ±(ω₀A − ω₀B)` of the
/// two contributions cancel in the sum.
pub fn aux_closed(pair: &LorentzPair, omega: f64) -> Result<f64> {
    let s = pair.sum();
    exclude(omega, &[s], pair.omega0_a)?;
    Ok(-pair.prefactor() * pair.omega0_a * pair.omega0_b * s / (s * s - omega * omega))
}

/// `𝓔(Ω)/𝓔(0) = (ω₀A+ω₀B)² / [(ω₀A+ω₀B)² − Ω²]`.
pub fn ratio_aux(pair: &LorentzPair, omega: f64) -> Result<f64> {
    let s = pair.sum();
    exclude(omega, &[s], pair.omega0_a)?;
    Ok(s * s / (s * s - omega * omega))
}

/// `𝓔(Ω)/𝓔(0)` for identical resonances `ω₀`.
fn identical(omega0: f64, omega: f64) -> Result<f64> {
    if !(omega0.is_finite() && omega0 > 0.0) {
        return Err(Error::invalid("omega0", format!("must be > 0, got {omega0}")));
    }
    exclude(omega, &[2.0 * omega0], omega0)?;
    let q = 4.0 * omega0 * omega0;
    Ok(q / (q - omega * omega))
}

/// `E_→→/E⁽⁰⁾ = [4ω₀²/(4ω₀² − Ω_AB²) + 2]/3` for identical spheres.
pub fn ratio_rr(omega0: f64, omega_ab: f64) -> Result<f64> {
    Ok((identical(omega0, omega_ab)? + 2.0) / 3.0)
}

/// `E_↑↑/E⁽⁰⁾ = (ω₀²/3)/(4ω₀² − Ω_AB²) + 3ω₀²/(4ω₀² − (Ω_A+Ω_B)²) + 1/6`.
pub fn ratio_uu(omega0: f64, omega_a: f64, omega_b: f64) -> Result<f64> {
    let minus = identical(omega0, omega_a - omega_b)?;
    let plus = identical(omega0, omega_a + omega_b)?;
    Ok(minus / 12.0 + 3.0 * plus / 4.0 + 1.0 / 6.0)
}

/// `E_↑→/E⁽⁰⁾` for identical spheres, A spinning along ẑ and B along R̂ = x̂.
pub fn ratio_ur(omega0: f64, omega_a: f64, omega_b: f64) -> Result<f64> {
    let r = |w| identical(omega0, w);
    Ok((8.0 * r(omega_a)? + 2.0 * r(omega_b)? + r(omega_a - omega_b)? + r(omega_a + omega_b)?) / 12.0)
}

/// `E_↑⊙/E⁽⁰⁾` for identical spheres, A along ẑ and B along ŷ, with R̂ = x̂.
pub fn ratio_uo(omega0: f64, omega_a: f64, omega_b: f64) -> Result<f64> {
    let r = |w| identical(omega0, w);
    Ok((2.0 * r(omega_a)? + 2.0 * r(omega_b)? + 4.0 * r(omega_a - omega_b)? + 4.0 * r(omega_a + omega_b)?) / 12.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    const W0: f64 = 1.283e10;

    fn pair(wa: f64, wb: f64) -> LorentzPair {
        LorentzPair::new(2.0e-32, 3.0e-32, wa, wb, 180e-9).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn identical_spheres_at_rest() {
        let p = LorentzPair::new(2.0e-32, 2.0e-32, W0, W0, 180e-9).unwrap();
        let expected = -HBAR * 4.0e-64 * W0
            / (512.0 * PI * PI * EPSILON_0 * EPSILON_0 * 180e-9_f64.powi(6));
        assert!(rel(eba_closed(&p, 0.0).unwrap(), expected) < 1e-14);
        assert!(rel(eab_closed(&p, 0.0).unwrap(), expected) < 1e-14);
    }

    #[test]
    fn identical_spheres_share_both_contributions() {
        let p = pair(W0, W0);
        for &o in &[0.0, 0.3, 1.7, 2.5] {
            let w = o * W0;
            assert!(rel(eab_closed(&p, w).unwrap(), eba_closed(&p, w).unwrap()) < 1e-14);
        }
    }

    #[test]
    fn general_form_reaches_the_identical_limit() {
        // ω₀B → ω₀A through the uncancelled expression
        let w = 0.7 * W0;
        let near = pair(W0, W0 * (1.0 + 1e-7));
        let same = pair(W0, W0);
        assert!(rel(eba_closed(&near, w).unwrap(), eba_closed(&same, w).unwrap()) < 1e-6);
    }

    #[test]
    fn distinct_resonances_give_opposite_signs_at_rest() {
        for &ratio in &[0.5, 0.9, 1.2, 3.0] {
            let p = pair(W0, ratio * W0);
            let ba = eba_closed(&p, 0.0).unwrap();
            let ab = eab_closed(&p, 0.0).unwrap();
            assert!(ba * ab < 0.0, "ratio {ratio}");
        }
    }

    #[test]
    fn aux_is_sum_and_matches_ratio() {
        let p = pair(W0, 1.4 * W0);
        let e0 = aux_closed(&p, 0.0).unwrap();
        for &o in &[0.0, 0.25, 1.1, 3.7] {
            let w = o * W0;
            let sum = eab_closed(&p, w).unwrap() + eba_closed(&p, w).unwrap();
            let aux = aux_closed(&p, w).unwrap();
            assert!(rel(sum, aux) < 1e-12, "Ω = {o} ω₀");
            assert!(rel(aux / e0, ratio_aux(&p, w).unwrap()) < 1e-14);
            assert_eq!(ratio_aux(&p, -w).unwrap(), ratio_aux(&p, w).unwrap());
        }
    }

    #[test]
    fn ratio_values() {
        assert_eq!(ratio_aux(&pair(W0, W0), 0.0).unwrap(), 1.0);
        assert!(rel(ratio_aux(&pair(W0, W0), W0).unwrap(), 4.0 / 3.0) < 1e-15);
        assert_eq!(ratio_rr(W0, 0.0).unwrap(), 1.0);
        assert_eq!(ratio_uu(W0, 0.0, 0.0).unwrap(), 1.0);
        assert_eq!(ratio_ur(W0, 0.0, 0.0).unwrap(), 1.0);
        assert_eq!(ratio_uo(W0, 0.0, 0.0).unwrap(), 1.0);
        assert!(rel(ratio_rr(W0, W0).unwrap(), 10.0 / 9.0) < 1e-15);
        assert!((ratio_rr(W0, 1e8 * W0).unwrap() - 2.0 / 3.0).abs() < 1e-12);
        assert!((ratio_uu(W0, 1e8 * W0, 0.0).unwrap() - 1.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn ratio_uu_is_symmetric() {
        for &(a, b) in &[(0.3, 1.1), (-0.7, 2.9), (1.5, -0.2)] {
            let x = ratio_uu(W0, a * W0, b * W0).unwrap();
            let y = ratio_uu(W0, b * W0, a * W0).unwrap();
            assert!(rel(x, y) < 1e-15);
        }
    }

    #[test]
    fn co_rotation_in_uu_has_its_pole_at_the_resonance() {
        assert!(matches!(ratio_uu(W0, W0, W0), Err(Error::PoleExclusion { .. })));
        assert!(ratio_uu(W0, 0.999 * W0, 0.999 * W0).unwrap() > 100.0);
        // the difference term alone stays finite for Ω_A = Ω_B
        assert!(ratio_uu(W0, 0.5 * W0, 0.5 * W0).unwrap().is_finite());
    }

    #[test]
    fn poles_are_excluded() {
        let p = pair(W0, 1.5 * W0);
        let s = 2.5 * W0;
        let d = 0.5 * W0;
        assert!(matches!(eba_closed(&p, s), Err(Error::PoleExclusion { .. })));
        assert!(matches!(eba_closed(&p, -d + 1e-7 * W0), Err(Error::PoleExclusion { .. })));
        assert!(eba_closed(&p, d + 1e-5 * W0).is_ok());
        // the difference pole cancels in the sum
        assert!(aux_closed(&p, d).is_ok());
        assert!(matches!(ratio_rr(W0, -2.0 * W0), Err(Error::PoleExclusion { .. })));
    }

    #[test]
    fn rejects_nonpositive_parameters() {
        assert!(LorentzPair::new(0.0, 1.0, 1.0, 1.0, 1.0).is_err());
        assert!(LorentzPair::new(1.0, 1.0, 1.0, -1.0, 1.0).is_err());
        assert!(ratio_rr(0.0, 1.0).is_err());
    }
}
