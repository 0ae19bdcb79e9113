//! Series solutions for the sound-soft disk and sphere.
//!
//! Sphere of radius `a`:
//! `v(x) = -Σ (2l+1) i^l [j_l(ka)/h_l(ka)] h_l(k|x|) P_l(α·x̂)` with far field
//! `A(α') = (i/k) Σ (2l+1) [j_l(ka)/h_l(ka)] P_l(α·α')`.
//!
//! Disk of radius `a`:
//! `v(x) = -Σ ε_l i^l [J_l(ka)/H_l(ka)] H_l(k|x|) cos(lθ)` with `ε_0 = 1`,
//! `ε_l = 2`, and far field
//! `A(θ) = -√(2/(πk)) e^{-iπ/4} Σ ε_l [J_l(ka)/H_l(ka)] cos(lθ)`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::basis::planar_farfield_scale;
use crate::error::{MrcError, Result};
use crate::field::FarField;
use crate::point::Point;
use crate::specfun::{self, ensure_unit};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Truncation report of a series evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesTruncation {
    pub lmax: usize,
    /// `|last term| / |partial sum|`.
    pub tail_bound: f64,
}

/// A series value with its truncation report.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: Complex64,
    pub truncation: SeriesTruncation,
}

/// Order giving a tail below `1e-12` for `ka <= 5`.
pub const DEFAULT_LMAX: usize = 30;

fn check_params(a: f64, k: f64) -> Result<()> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(MrcError::invalid(alloc::format!("radius must be positive, got {a}")));
    }
    if !(k > 0.0 && k.is_finite()) {
        return Err(MrcError::invalid(alloc::format!("wavenumber must be positive, got {k}")));
    }
    Ok(())
}

fn check_exterior(a: f64, r: f64) -> Result<()> {
    if r < a * (1.0 - 1e-12) {
        return Err(MrcError::domain(alloc::format!("|x| = {r} lies inside the radius {a}")));
    }
    Ok(())
}

fn legendre_table(lmax: usize, t: f64) -> Vec<f64> {
    let mut p = alloc::vec![0.0; lmax + 1];
    p[0] = 1.0;
    if lmax >= 1 {
        p[1] = t;
    }
    for l in 1..lmax {
        p[l + 1] = ((2 * l + 1) as f64 * t * p[l] - l as f64 * p[l - 1]) / (l + 1) as f64;
    }
    p
}

fn i_pow(l: usize) -> Complex64 {
    match l % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

fn summed(terms: impl Iterator<Item = Complex64>, lmax: usize) -> SeriesValue {
    let mut value = ZERO;
    let mut last = ZERO;
    for t in terms {
        value += t;
        last = t;
    }
    let tail_bound = if value == ZERO { 0.0 } else { last.norm() / value.norm() };
    SeriesValue {
        value,
        truncation: SeriesTruncation { lmax, tail_bound },
    }
}

/// `j_l(ka) / h_l(ka)` for `l <= lmax`.
fn sphere_ratios(a: f64, k: f64, lmax: usize) -> Result<Vec<Complex64>> {
    let j = specfun::sph_bessel_j_table(lmax, k * a);
    (0..=lmax)
        .map(|l| Ok(j[l] / specfun::sph_hankel1(l, k * a)?))
        .collect()
}

/// `J_l(ka) / H_l(ka)` for `l <= lmax`.
fn disk_ratios(a: f64, k: f64, lmax: usize) -> Result<Vec<Complex64>> {
    let h = specfun::cyl_hankel1_table(lmax, k * a)?;
    Ok(h.iter().map(|hl| hl.re / hl).collect())
}

/// Scattered field of the sound-soft sphere of radius `a` centred at the
/// origin, at `|x| >= a`.
pub fn sphere_scattered_exact(a: f64, k: f64, alpha: &Point, x: &Point, lmax: usize) -> Result<SeriesValue> {
    check_params(a, k)?;
    ensure_unit(alpha)?;
    let r = x.norm();
    check_exterior(a, r)?;
    let ratio = sphere_ratios(a, k, lmax)?;
    let p = legendre_table(lmax, (alpha.dot(x) / r).clamp(-1.0, 1.0));
    let terms = (0..=lmax)
        .map(|l| Ok(-((2 * l + 1) as f64) * i_pow(l) * ratio[l] * specfun::sph_hankel1(l, k * r)? * p[l]))
        .collect::<Result<Vec<_>>>()?;
    Ok(summed(terms.into_iter(), lmax))
}

/// Scattered field of the sound-soft disk of radius `a` centred at the
/// origin, at `|x| >= a`.
pub fn disk_scattered_exact_2d(a: f64, k: f64, alpha: &Point, x: &Point, lmax: usize) -> Result<SeriesValue> {
    check_params(a, k)?;
    ensure_unit(alpha)?;
    if alpha.z() != 0.0 || x.z() != 0.0 {
        return Err(MrcError::invalid("planar oracle needs zero z components"));
    }
    let r = x.norm();
    check_exterior(a, r)?;
    let ratio = disk_ratios(a, k, lmax)?;
    let h = specfun::cyl_hankel1_table(lmax, k * r)?;
    let theta = libm::atan2(x.y(), x.x()) - libm::atan2(alpha.y(), alpha.x());
    let terms = (0..=lmax).map(|l| {
        let eps = if l == 0 { 1.0 } else { 2.0 };
        -eps * i_pow(l) * ratio[l] * h[l] * libm::cos(l as f64 * theta)
    });
    Ok(summed(terms, lmax))
}

/// Far-field amplitude of the sound-soft sphere, `v ~ A(α') e^{ikr}/r`.
pub fn sphere_farfield_exact(a: f64, k: f64, alpha: &Point, directions: &[Point], lmax: usize) -> Result<FarField> {
    check_params(a, k)?;
    ensure_unit(alpha)?;
    let ratio = sphere_ratios(a, k, lmax)?;
    let scale = Complex64::new(0.0, 1.0 / k);
    let mut amplitudes = Vec::with_capacity(directions.len());
    for d in directions {
        ensure_unit(d)?;
        let p = legendre_table(lmax, alpha.dot(d).clamp(-1.0, 1.0));
        let sum: Complex64 = (0..=lmax).map(|l| (2 * l + 1) as f64 * ratio[l] * p[l]).sum();
        amplitudes.push(scale * sum);
    }
    FarField::new(directions.to_vec(), amplitudes)
}

/// Far-field amplitude of the sound-soft disk, `v ~ A(α') e^{ikr}/√r`.
pub fn disk_farfield_exact_2d(a: f64, k: f64, alpha: &Point, directions: &[Point], lmax: usize) -> Result<FarField> {
    check_params(a, k)?;
    ensure_unit(alpha)?;
    let ratio = disk_ratios(a, k, lmax)?;
    let scale = -planar_farfield_scale(k);
    let mut amplitudes = Vec::with_capacity(directions.len());
    for d in directions {
        ensure_unit(d)?;
        let theta = libm::atan2(d.y(), d.x()) - libm::atan2(alpha.y(), alpha.x());
        let sum: Complex64 = (0..=lmax)
            .map(|l| {
                let eps = if l == 0 { 1.0 } else { 2.0 };
                eps * ratio[l] * libm::cos(l as f64 * theta)
            })
            .sum();
        amplitudes.push(scale * sum);
    }
    FarField::new(directions.to_vec(), amplitudes)
}

/// `A_lm = (4πi/k) [j_l(ka)/h_l(ka)] conj(Y_lm(α))` for `l <= lmax`, indexed
/// by [`specfun::harmonic_slot`].
pub fn sphere_farfield_coefficients(a: f64, k: f64, alpha: &Point, lmax: usize) -> Result<Vec<Complex64>> {
    check_params(a, k)?;
    ensure_unit(alpha)?;
    let ratio = sphere_ratios(a, k, lmax)?;
    let y = specfun::sph_harmonics_table(lmax, alpha);
    let scale = Complex64::new(0.0, 4.0 * PI / k);
    let mut out = alloc::vec![ZERO; y.len()];
    for l in 0..=lmax {
        for m in -(l as i32)..=(l as i32) {
            let s = specfun::harmonic_slot(l, m);
            out[s] = scale * ratio[l] * y[s].conj();
        }
    }
    Ok(out)
}
