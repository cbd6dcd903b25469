//! Lab-frame response tensors of a spinning sphere.
//!
//! A sphere spinning at `Ω` about ẑ sees its isotropic rest-frame response
//! `ξ(ω)` (polarizability or Hadamard function) split into Doppler sidebands:
//!
//! ```text
//! ξ_xx = ξ_yy = [ξ(ω+Ω) + ξ(ω−Ω)]/2
//! ξ_xy = −ξ_yx = i[ξ(ω+Ω) − ξ(ω−Ω)]/2
//! ξ_zz = ξ(ω)
//! ```
//!
//! The tensor z-axis is always the spin axis; [`axis_rotate`] moves a tensor
//! onto an arbitrary spin axis.

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;

use crate::error::Result;
use crate::response::{check_unit_axis, coth_weight};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResponseKind {
    Polarizability,
    Hadamard,
}

/// A 3×3 complex response tensor at one lab-frame frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResponseTensor {
    pub entries: Matrix3<Complex64>,
    pub omega: f64,
    pub kind: ResponseKind,
}

impl ResponseTensor {
    /// Largest entry modulus, used as the scale for relative comparisons.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0_f64, |m, z| m.max(z.norm()))
    }

    /// `max |a − b| / max(|a|, |b|)` over all entries.
    pub fn relative_difference(&self, other: &ResponseTensor) -> f64 {
        let diff = (self.entries - other.entries)
            .iter()
            .fold(0.0_f64, |m, z| m.max(z.norm()));
        let scale = self.max_abs().max(other.max_abs());
        if scale == 0.0 {
            diff
        } else {
            diff / scale
        }
    }
}

/// Doppler-split tensor assembled from `ξ(ω+Ω)`, `ξ(ω−Ω)` and `ξ(ω)`.
#[inline]
pub fn spin_matrix(plus: Complex64, minus: Complex64, center: Complex64) -> Matrix3<Complex64> {
    let zero = Complex64::new(0.0, 0.0);
    let diag = (plus + minus) * 0.5;
    let xy = Complex64::i() * (plus - minus) * 0.5;
    Matrix3::new(diag, xy, zero, -xy, diag, zero, zero, zero, center)
}

/// Lab-frame tensor of a sphere spinning at `spin` about ẑ, built from the
/// rest-frame isotropic response `scalar`.
pub fn spin_transform<F>(scalar: F, spin: f64, omega: f64, kind: ResponseKind) -> Result<ResponseTensor>
where
    F: Fn(f64) -> Result<Complex64>,
{
    let plus = scalar(omega + spin)?;
    let minus = scalar(omega - spin)?;
    let center = scalar(omega)?;
    Ok(ResponseTensor {
        entries: spin_matrix(plus, minus, center),
        omega,
        kind,
    })
}

/// A proper rotation taking ẑ onto `axis` (Rodrigues construction).
pub fn rotation_to_axis(axis: &Vector3<f64>) -> Result<Matrix3<f64>> {
    check_unit_axis("axis", axis)?;
    let z = Vector3::z();
    let c = z.dot(axis);
    if c < -1.0 + 1e-12 {
        // antiparallel: half turn about x̂
        return Ok(Matrix3::new(1.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, -1.0));
    }
    let v = z.cross(axis);
    let k = v.cross_matrix();
    Ok(Matrix3::identity() + k + k * k / (1.0 + c))
}

/// Rotation by `angle` about the unit vector `axis`.
pub fn rotation_about(axis: &Vector3<f64>, angle: f64) -> Matrix3<f64> {
    let k = axis.cross_matrix();
    Matrix3::identity() + k * angle.sin() + k * k * (1.0 - angle.cos())
}

/// `R T Rᵀ` for a real rotation `R`.
#[inline]
pub fn rotate_matrix(rotation: &Matrix3<f64>, m: &Matrix3<Complex64>) -> Matrix3<Complex64> {
    let r = rotation.map(|x| Complex64::new(x, 0.0));
    r * m * r.transpose()
}

/// Re-express a tensor whose spin axis is ẑ for a sphere spinning about `axis`.
pub fn axis_rotate(tensor: &ResponseTensor, axis: &Vector3<f64>) -> Result<ResponseTensor> {
    let r = rotation_to_axis(axis)?;
    Ok(ResponseTensor {
        entries: rotate_matrix(&r, &tensor.entries),
        ..*tensor
    })
}

/// Hadamard tensor obtained from the lab-frame polarizability tensor through the
/// nonequilibrium fluctuation–dissipation relations of a spinning body.
///
/// With `f = [coth((ω−Ω)/2θ) + coth((ω+Ω)/2θ)]/2` and
/// `g = [coth((ω−Ω)/2θ) − coth((ω+Ω)/2θ)]/2`:
///
/// ```text
/// η_xx = 2f Im α_xx + 2g Re α_xy
/// η_xy = −2i f Re α_xy − 2i g Im α_xx
/// η_zz = 2 coth(ω/2θ) Im α_zz
/// ```
///
/// `theta` is `k_B T/ħ` in the units of `omega`; at `theta = 0` the coth
/// weights become exact sign functions. Where a coth weight is singular
/// (`ω = ±Ω` or `ω = 0` at `θ > 0`) it multiplies a sideband with vanishing
/// `Im α`, and the product is replaced by its limit `2θ·d(Im α)/dω`.
pub fn noneq_fdt_hadamard<F>(alpha_tensor: F, spin: f64, omega: f64, theta: f64) -> Result<ResponseTensor>
where
    F: Fn(f64) -> Result<ResponseTensor>,
{
    let centre = alpha_tensor(omega)?;
    let singular = theta > 0.0 && (omega == 0.0 || omega == spin || omega == -spin);
    if !singular {
        return fdt_from_alpha(&centre, spin, theta);
    }

    // sidebands α± = α_xx ∓ iα_xy and the axial α_zz
    let i = Complex64::i();
    let im_plus = |t: &ResponseTensor| (t.entries[(0, 0)] - i * t.entries[(0, 1)]).im;
    let im_minus = |t: &ResponseTensor| (t.entries[(0, 0)] + i * t.entries[(0, 1)]).im;
    let im_axial = |t: &ResponseTensor| t.entries[(2, 2)].im;
    let scale = omega.abs().max(spin.abs()).max(theta);

    let weighted = |x: f64, im: &dyn Fn(&ResponseTensor) -> f64| -> Result<f64> {
        if x == 0.0 {
            let slope = central_slope(|w| Ok(im(&alpha_tensor(w)?)), omega, scale)?;
            Ok(2.0 * theta * slope)
        } else {
            Ok(coth_weight(x, theta) * im(&centre))
        }
    };
    let p_plus = weighted(omega + spin, &im_plus)?;
    let p_minus = weighted(omega - spin, &im_minus)?;
    let p_axial = weighted(omega, &im_axial)?;

    let diag = Complex64::new(p_plus + p_minus, 0.0);
    let xy = i * (p_plus - p_minus);
    let zz = Complex64::new(2.0 * p_axial, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    Ok(ResponseTensor {
        entries: Matrix3::new(diag, xy, zero, -xy, diag, zero, zero, zero, zz),
        omega,
        kind: ResponseKind::Hadamard,
    })
}

/// Derivative at `x` by Ridders' extrapolation of central differences.
///
/// The starting step is found by halving `scale` until two successive
/// difference quotients agree to 1%, so `scale` only needs to be an upper
/// bound on the width of the features of `g`.
fn central_slope<G: Fn(f64) -> Result<f64>>(g: G, x: f64, scale: f64) -> Result<f64> {
    const SHRINK: f64 = 1.4;
    const ROWS: usize = 16;
    let diff = |h: f64| -> Result<f64> { Ok((g(x + h)? - g(x - h)?) / (2.0 * h)) };

    let mut h = scale;
    let mut d = diff(h)?;
    for _ in 0..200 {
        let half = diff(0.5 * h)?;
        if (half - d).abs() <= 1e-2 * half.abs() {
            break;
        }
        h *= 0.5;
        d = half;
    }

    let mut table = [[0.0_f64; ROWS]; ROWS];
    table[0][0] = d;
    let mut best = d;
    let mut err = f64::INFINITY;
    for i in 1..ROWS {
        h /= SHRINK;
        table[0][i] = diff(h)?;
        let mut fac = SHRINK * SHRINK;
        for j in 1..=i {
            table[j][i] = (table[j - 1][i] * fac - table[j - 1][i - 1]) / (fac - 1.0);
            fac *= SHRINK * SHRINK;
            let e = (table[j][i] - table[j - 1][i]).abs().max((table[j][i] - table[j - 1][i - 1]).abs());
            if e <= err {
                err = e;
                best = table[j][i];
            }
        }
        if (table[i][i] - table[i - 1][i - 1]).abs() >= 2.0 * err {
            break;
        }
    }
    Ok(best)
}

fn fdt_from_alpha(alpha: &ResponseTensor, spin: f64, theta: f64) -> Result<ResponseTensor> {
    let omega = alpha.omega;
    let c_minus = coth_weight(omega - spin, theta);
    let c_plus = coth_weight(omega + spin, theta);
    let f = 0.5 * (c_minus + c_plus);
    let g = 0.5 * (c_minus - c_plus);

    let a = &alpha.entries;
    let im_xx = a[(0, 0)].im;
    let re_xy = a[(0, 1)].re;
    let i = Complex64::i();

    let diag = Complex64::new(2.0 * f * im_xx + 2.0 * g * re_xy, 0.0);
    let xy = -2.0 * i * f * re_xy - 2.0 * i * g * im_xx;
    let zz = Complex64::new(2.0 * coth_weight(omega, theta) * a[(2, 2)].im, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    Ok(ResponseTensor {
        entries: Matrix3::new(diag, xy, zero, -xy, diag, zero, zero, zero, zz),
        omega,
        kind: ResponseKind::Hadamard,
    })
}
