//! Special functions behind the outgoing-wave basis.
//!
//! Cylindrical Bessel functions of integer order are evaluated as whole
//! order tables: `J` by Miller's downward recurrence normalized with
//! `J_0 + 2 Σ J_2k = 1`, `Y_0`/`Y_1` from the Neumann series over those `J`
//! values (or Hankel's asymptotic expansion for large arguments) and higher
//! `Y` by upward recurrence, which is stable for the second kind.
//!
//! Spherical Hankel functions use the terminating closed form
//!
//! ```text
//! h_l(z) = (-i)^(l+1) e^{iz}/z  Σ_{k=0}^{l} (i/2z)^k (l+k)! / (k! (l-k)!)
//! ```
//!
//! and the outgoing radial factor of the 3D basis is
//! `h̃_l(k, r) = i^(l+1) k h_l(kr)`, the multiple of `h_l(kr)` that tends to
//! `e^{ikr}/r`. With this choice `h̃_0(k, r) = e^{ikr}/r` exactly.
//!
//! Spherical harmonics are orthonormal with the Condon–Shortley phase:
//! `Y_lm(θ, φ) = N_lm P_l^m(cos φ) e^{imθ}`, φ the polar angle.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{MrcError, Result};
use crate::point::Point;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Above this argument `J_0, J_1, Y_0, Y_1` come from Hankel's expansion.
const ASYMPTOTIC_ARG: f64 = 25.0;

const RESCALE_AT: f64 = 1e250;

fn check_positive(x: f64, what: &str) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(MrcError::domain(alloc::format!(
            "{what} requires a positive finite argument, got {x}"
        )))
    }
}

fn parity(l: u32) -> f64 {
    if l % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Unnormalized Miller sequence for `J_0 ..= J_start`, scaled so that
/// `J_0 + 2 Σ J_2k = 1`.
fn miller_j(nmax: usize, x: f64) -> Vec<f64> {
    let top = (nmax as f64).max(x);
    let mut start = (top + 20.0 + libm::sqrt(40.0 * top)) as usize + 2;
    start += start % 2;
    let mut vals = vec![0.0; start + 1];
    let mut next = 0.0;
    let mut cur = 1e-30;
    vals[start] = cur;
    for n in (1..=start).rev() {
        let prev = (2.0 * n as f64 / x) * cur - next;
        next = cur;
        cur = prev;
        vals[n - 1] = prev;
        if libm::fabs(prev) > RESCALE_AT {
            for v in &mut vals[n - 1..] {
                *v /= RESCALE_AT;
            }
            next /= RESCALE_AT;
            cur /= RESCALE_AT;
        }
    }
    let mut norm = vals[0];
    let mut k = 2;
    while k <= start {
        norm += 2.0 * vals[k];
        k += 2;
    }
    for v in &mut vals {
        *v /= norm;
    }
    vals
}

/// Hankel's large-argument expansion: returns `(J_nu(x), Y_nu(x))`.
fn hankel_asymptotic(nu: f64, x: f64) -> (f64, f64) {
    let mu = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term: f64 = 1.0;
    let mut prev_abs = f64::INFINITY;
    for k in 1..200 {
        let odd = (2 * k - 1) as f64;
        term *= (mu - odd * odd) / (8.0 * k as f64 * x);
        let a = libm::fabs(term);
        if a > prev_abs {
            break;
        }
        prev_abs = a;
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
        if a < 1e-17 * libm::fabs(p) {
            break;
        }
    }
    let chi = x - (0.5 * nu + 0.25) * PI;
    let (s, c) = libm::sincos(chi);
    let amp = libm::sqrt(2.0 / (PI * x));
    (amp * (p * c - q * s), amp * (p * s + q * c))
}

/// `Y_0` and `Y_1` from the Neumann series over a full Miller table:
///
/// ```text
/// (π/2) Y_0 = (ln(x/2) + γ) J_0 - 2 Σ_k (-1)^k J_2k / k
/// (π/2) Y_1 = -J_0/x + (ln(x/2) + γ) J_1 + Σ_k (-1)^k (J_2k-1 - J_2k+1) / k
/// ```
fn neumann_y01(j: &[f64], x: f64) -> (f64, f64) {
    let lg = libm::log(0.5 * x) + EULER_GAMMA;
    let top = j.len() - 1;
    let mut s0 = 0.0;
    let mut s1 = 0.0;
    let mut k = 1;
    while 2 * k < top {
        let sign = parity(k as u32);
        s0 += sign * j[2 * k] / k as f64;
        s1 += sign * (j[2 * k - 1] - j[2 * k + 1]) / k as f64;
        k += 1;
    }
    (
        (2.0 / PI) * (lg * j[0] - 2.0 * s0),
        (2.0 / PI) * (-j[0] / x + lg * j[1] + s1),
    )
}

/// `J_0 ..= J_nmax` and `Y_0 ..= Y_nmax` at `x > 0`.
pub(crate) fn cyl_jy_table(nmax: usize, x: f64) -> (Vec<f64>, Vec<f64>) {
    let mut y = vec![0.0; nmax.max(1) + 1];
    let mut j;
    if x >= ASYMPTOTIC_ARG {
        let (j0, y0) = hankel_asymptotic(0.0, x);
        let (j1, y1) = hankel_asymptotic(1.0, x);
        y[0] = y0;
        y[1] = y1;
        if (nmax as f64) < x {
            // upward recurrence for J is stable while n < x
            j = vec![0.0; nmax.max(1) + 1];
            j[0] = j0;
            j[1] = j1;
            for n in 1..nmax {
                j[n + 1] = (2.0 * n as f64 / x) * j[n] - j[n - 1];
            }
        } else {
            j = miller_j(nmax, x);
        }
    } else {
        j = miller_j(nmax, x);
        (y[0], y[1]) = neumann_y01(&j, x);
    }
    for n in 1..nmax {
        y[n + 1] = (2.0 * n as f64 / x) * y[n] - y[n - 1];
    }
    j.truncate(nmax + 1);
    y.truncate(nmax + 1);
    (j, y)
}

/// Bessel function of the first kind `J_l(x)` for integer `l` and `x > 0`.
pub fn cyl_bessel_j(l: i32, x: f64) -> Result<f64> {
    check_positive(x, "cyl_bessel_j")?;
    let n = l.unsigned_abs();
    let (j, _) = cyl_jy_table(n as usize, x);
    let v = j[n as usize];
    Ok(if l < 0 { parity(n) * v } else { v })
}

/// Hankel function of the first kind `H_l^(1)(x) = J_l(x) + i Y_l(x)`.
pub fn cyl_hankel1(l: i32, x: f64) -> Result<Complex64> {
    check_positive(x, "cyl_hankel1")?;
    let n = l.unsigned_abs();
    let (j, y) = cyl_jy_table(n as usize, x);
    let h = Complex64::new(j[n as usize], y[n as usize]);
    Ok(if l < 0 { h * parity(n) } else { h })
}

/// `H_0^(1)(x) ..= H_lmax^(1)(x)`.
pub fn cyl_hankel1_table(lmax: usize, x: f64) -> Result<Vec<Complex64>> {
    check_positive(x, "cyl_hankel1_table")?;
    let (j, y) = cyl_jy_table(lmax, x);
    Ok(j.iter().zip(&y).map(|(&a, &b)| Complex64::new(a, b)).collect())
}

/// `Σ_{k=0}^{l} (i/2z)^k (l+k)!/(k!(l-k)!)`, the polynomial factor shared by
/// `h_l` and `h̃_l`.
fn sph_hankel_poly(l: usize, z: f64) -> Complex64 {
    let step = Complex64::new(0.0, 1.0 / (2.0 * z));
    let mut coeff = 1.0;
    let mut pow = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(1.0, 0.0);
    for k in 1..=l {
        coeff *= ((l + k) * (l - k + 1)) as f64 / k as f64;
        pow *= step;
        sum += pow * coeff;
    }
    sum
}

fn i_pow(n: i64) -> Complex64 {
    match n.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Standard spherical Hankel function of the first kind `h_l^(1)(x)`.
pub fn sph_hankel1(l: usize, x: f64) -> Result<Complex64> {
    check_positive(x, "sph_hankel1")?;
    let (s, c) = libm::sincos(x);
    let e = Complex64::new(c, s) / x;
    Ok(i_pow(-(l as i64) - 1) * e * sph_hankel_poly(l, x))
}

/// Outgoing radial factor `h̃_l(k, r) = i^(l+1) k h_l^(1)(kr)`, normalized so
/// that `h̃_l(k, r) ~ e^{ikr}/r` as `r → ∞`.
pub fn sph_hankel1_out(l: usize, k: f64, r: f64) -> Result<Complex64> {
    check_positive(k, "sph_hankel1_out (wavenumber)")?;
    check_positive(r, "sph_hankel1_out")?;
    let (s, c) = libm::sincos(k * r);
    Ok(Complex64::new(c, s) / r * sph_hankel_poly(l, k * r))
}

/// `h̃_0(k, r) ..= h̃_lmax(k, r)`.
pub fn sph_hankel1_out_table(lmax: usize, k: f64, r: f64) -> Result<Vec<Complex64>> {
    check_positive(k, "sph_hankel1_out_table (wavenumber)")?;
    check_positive(r, "sph_hankel1_out_table")?;
    let (s, c) = libm::sincos(k * r);
    let e = Complex64::new(c, s) / r;
    Ok((0..=lmax).map(|l| e * sph_hankel_poly(l, k * r)).collect())
}

/// Spherical Bessel functions `j_0(x) ..= j_lmax(x)` for `x >= 0`.
///
/// Upward recurrence from the trigonometric closed forms while the order
/// stays below the argument, Miller's downward recurrence normalized by
/// `Σ (2n+1) j_n² = 1` otherwise. Negative arguments use the parity
/// `j_l(-x) = (-1)^l j_l(x)`.
pub fn sph_bessel_j_table(lmax: usize, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; lmax + 1];
    if x == 0.0 {
        out[0] = 1.0;
        return out;
    }
    if x < 0.0 {
        let mut t = sph_bessel_j_table(lmax, -x);
        for (l, v) in t.iter_mut().enumerate() {
            *v *= parity(l as u32);
        }
        return t;
    }
    let (s, c) = libm::sincos(x);
    let j0 = s / x;
    let j1 = s / (x * x) - c / x;
    if (lmax as f64) < x {
        out[0] = j0;
        if lmax >= 1 {
            out[1] = j1;
        }
        for n in 1..lmax {
            out[n + 1] = ((2 * n + 1) as f64 / x) * out[n] - out[n - 1];
        }
        return out;
    }
    let top = (lmax as f64).max(x);
    let start = (top + 20.0 + libm::sqrt(40.0 * top)) as usize + 2;
    let mut vals = vec![0.0; start + 1];
    let mut next = 0.0;
    let mut cur = 1e-30;
    vals[start] = cur;
    for n in (1..=start).rev() {
        let prev = ((2 * n + 1) as f64 / x) * cur - next;
        next = cur;
        cur = prev;
        vals[n - 1] = prev;
        if libm::fabs(prev) > RESCALE_AT {
            for v in &mut vals[n - 1..] {
                *v /= RESCALE_AT;
            }
            next /= RESCALE_AT;
            cur /= RESCALE_AT;
        }
    }
    let sumsq: f64 = vals
        .iter()
        .enumerate()
        .map(|(n, v)| (2 * n + 1) as f64 * v * v)
        .sum();
    let mut scale = 1.0 / libm::sqrt(sumsq);
    // fix the sign against whichever of j_0, j_1 is better conditioned
    let flip = if libm::fabs(j0) >= libm::fabs(j1) {
        j0 * vals[0] < 0.0
    } else {
        j1 * vals[1] < 0.0
    };
    if flip {
        scale = -scale;
    }
    for (o, v) in out.iter_mut().zip(&vals) {
        *o = v * scale;
    }
    out
}

/// Spherical Bessel function `j_l(x)`; `j_l(0) = δ_l0`.
pub fn sph_bessel_j(l: usize, x: f64) -> f64 {
    sph_bessel_j_table(l, x)[l]
}

/// Legendre polynomial `P_l(x)`.
pub fn legendre_p(l: usize, x: f64) -> f64 {
    let mut p0 = 1.0;
    if l == 0 {
        return p0;
    }
    let mut p1 = x;
    for n in 1..l {
        let p2 = ((2 * n + 1) as f64 * x * p1 - n as f64 * p0) / (n + 1) as f64;
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// Flat position of `(l, m)` in a harmonic table ordered by `l`, then `m`
/// ascending from `-l` to `l`.
#[inline]
pub fn harmonic_slot(l: usize, m: i32) -> usize {
    ((l * l + l) as isize + m as isize) as usize
}

/// All `Y_lm(dir)` for `l <= lmax`, laid out per [`harmonic_slot`].
/// `dir` is assumed to be a unit vector.
pub fn sph_harmonics_table(lmax: usize, dir: &Point) -> Vec<Complex64> {
    let cos_p = dir.z().clamp(-1.0, 1.0);
    let rho = libm::hypot(dir.x(), dir.y());
    let sin_p = rho;
    let azim = if rho > 0.0 {
        Complex64::new(dir.x() / rho, dir.y() / rho)
    } else {
        Complex64::new(1.0, 0.0)
    };
    let mut out = vec![Complex64::new(0.0, 0.0); (lmax + 1) * (lmax + 1)];
    let mut pmm = libm::sqrt(1.0 / (4.0 * PI));
    let mut phase = Complex64::new(1.0, 0.0);
    for m in 0..=lmax {
        if m > 0 {
            pmm *= -libm::sqrt((2 * m + 1) as f64 / (2 * m) as f64) * sin_p;
            phase *= azim;
        }
        // column m of the normalized associated Legendre table
        // p_l = a_l (cos φ p_{l-1} - p_{l-2} / a_{l-1}),  a_l = √((4l²-1)/(l²-m²))
        let mut p_prev = 0.0;
        let mut p_cur = pmm;
        let mut a_prev = 1.0;
        for l in m..=lmax {
            if l > m {
                let lf = l as f64;
                let mf = m as f64;
                let a = libm::sqrt((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf));
                let next = a * (cos_p * p_cur - p_prev / a_prev);
                p_prev = p_cur;
                p_cur = next;
                a_prev = a;
            }
            let y = phase * p_cur;
            out[harmonic_slot(l, m as i32)] = y;
            if m > 0 {
                out[harmonic_slot(l, -(m as i32))] = y.conj() * parity(m as u32);
            }
        }
    }
    out
}

fn check_unit(dir: &Point) -> Result<()> {
    if dir.is_finite() && dir.is_unit(1e-10) {
        Ok(())
    } else {
        Err(MrcError::invalid(alloc::format!(
            "direction {:?} is not a unit vector",
            dir.0
        )))
    }
}

/// Orthonormal spherical harmonic `Y_lm` at the unit vector `dir`.
pub fn sph_harmonic(l: usize, m: i32, dir: &Point) -> Result<Complex64> {
    if m.unsigned_abs() as usize > l {
        return Err(MrcError::invalid(alloc::format!("|m| = {} exceeds l = {l}", m.abs())));
    }
    check_unit(dir)?;
    Ok(sph_harmonics_table(l, dir)[harmonic_slot(l, m)])
}

pub(crate) fn ensure_unit(dir: &Point) -> Result<()> {
    check_unit(dir)
}
