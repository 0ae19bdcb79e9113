//! Outgoing basis functions anchored at interior sources.
//!
//! In the plane `ψ_l(x, x_j) = H_l^(1)(k|x - x_j|) e^{ilθ_j}` for
//! `-L <= l <= L`; in space `ψ_lm(x, x_j) = Y_lm(α') h̃_l(k|x - x_j|)` for
//! `0 <= l <= L`, `|m| <= l`, with `α'` the unit vector from `x_j` to `x`.
//!
//! Columns of the collocation matrix are ordered source-major, then by `l`
//! ascending, then by `m` ascending. Coefficient files depend on this order.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{MrcError, Result};
use crate::geometry::{PointBatch, Surface};
use crate::point::{Dimension, Point};
use crate::specfun::{self, harmonic_slot};

/// Tag written to coefficient files to identify the column order.
pub const COLUMN_ORDERING: &str = "source-major/l-ascending/m-ascending";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisIndex {
    /// 0-based source index within the batch.
    pub source: usize,
    pub ell: i32,
    /// Azimuthal index; `None` in the plane.
    pub m: Option<i32>,
}

/// Column enumeration for `sources` points and maximal order `order`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasisLayout {
    pub dim: Dimension,
    pub order: usize,
    pub sources: usize,
}

impl BasisLayout {
    pub fn new(dim: Dimension, order: usize, sources: usize) -> Self {
        BasisLayout { dim, order, sources }
    }

    /// Functions per source: `2L + 1` in the plane, `(L + 1)²` in space.
    pub fn per_source(&self) -> usize {
        per_source(self.dim, self.order)
    }

    /// Total column count `N`.
    pub fn len(&self) -> usize {
        self.per_source() * self.sources
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index_of(&self, flat: usize) -> BasisIndex {
        let per = self.per_source();
        let source = flat / per;
        let (ell, m) = local_index(self.dim, self.order, flat % per);
        BasisIndex { source, ell, m }
    }

    pub fn flat_of(&self, idx: &BasisIndex) -> Option<usize> {
        if idx.source >= self.sources {
            return None;
        }
        let local = local_slot(self.dim, self.order, idx.ell, idx.m)?;
        Some(idx.source * self.per_source() + local)
    }
}

pub fn per_source(dim: Dimension, order: usize) -> usize {
    match dim {
        Dimension::Two => 2 * order + 1,
        Dimension::Three => (order + 1) * (order + 1),
    }
}

/// `(l, m)` of the `local`-th function of one source.
pub fn local_index(dim: Dimension, order: usize, local: usize) -> (i32, Option<i32>) {
    match dim {
        Dimension::Two => (local as i32 - order as i32, None),
        Dimension::Three => {
            let l = libm::floor(libm::sqrt(local as f64)) as usize;
            // guard against rounding in the square root
            let l = if (l + 1) * (l + 1) <= local { l + 1 } else if l * l > local { l - 1 } else { l };
            (l as i32, Some(local as i32 - (l * l + l) as i32))
        }
    }
}

/// Inverse of [`local_index`].
pub fn local_slot(dim: Dimension, order: usize, ell: i32, m: Option<i32>) -> Option<usize> {
    match (dim, m) {
        (Dimension::Two, None) if ell.unsigned_abs() as usize <= order => Some((ell + order as i32) as usize),
        (Dimension::Three, Some(m)) if ell >= 0 && ell as usize <= order && m.abs() <= ell => {
            Some(harmonic_slot(ell as usize, m))
        }
        _ => None,
    }
}

fn separation(x: &Point, xj: &Point) -> Result<(Point, f64)> {
    let d = *x - *xj;
    let r = d.norm();
    if r > 0.0 && r.is_finite() {
        Ok((d, r))
    } else {
        Err(MrcError::domain(alloc::format!(
            "basis function evaluated at its own source {:?}",
            xj.0
        )))
    }
}

fn unit_phase_pow(base: Complex64, l: i32) -> Complex64 {
    if l >= 0 {
        base.powu(l as u32)
    } else {
        base.conj().powu(l.unsigned_abs())
    }
}

/// `ψ_l(x, x_j) = H_l^(1)(k|x - x_j|) e^{ilθ_j}` in the plane.
pub fn psi_2d(l: i32, k: f64, x: &Point, xj: &Point) -> Result<Complex64> {
    let (d, r) = separation(x, xj)?;
    let h = specfun::cyl_hankel1(l, k * r)?;
    let e = Complex64::new(d.x() / r, d.y() / r);
    Ok(h * unit_phase_pow(e, l))
}

/// `ψ_lm(x, x_j) = Y_lm(α') h̃_l(k|x - x_j|)` in space.
pub fn psi_3d(l: usize, m: i32, k: f64, x: &Point, xj: &Point) -> Result<Complex64> {
    if m.unsigned_abs() as usize > l {
        return Err(MrcError::invalid(alloc::format!("|m| = {} exceeds l = {l}", m.abs())));
    }
    let (d, r) = separation(x, xj)?;
    let dir = d.scale(1.0 / r);
    let y = specfun::sph_harmonics_table(l, &dir)[harmonic_slot(l, m)];
    Ok(y * specfun::sph_hankel1_out(l, k, r)?)
}

/// Every basis function of one source evaluated at `x`, written to `out` in
/// local column order. `out.len()` must equal [`per_source`].
pub fn eval_source_block(
    dim: Dimension,
    order: usize,
    k: f64,
    x: &Point,
    xj: &Point,
    out: &mut [Complex64],
) -> Result<()> {
    debug_assert_eq!(out.len(), per_source(dim, order));
    let (d, r) = separation(x, xj)?;
    match dim {
        Dimension::Two => {
            let h = specfun::cyl_hankel1_table(order, k * r)?;
            let e = Complex64::new(d.x() / r, d.y() / r);
            let mut phase = Complex64::new(1.0, 0.0);
            out[order] = h[0];
            for l in 1..=order {
                phase *= e;
                let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
                out[order + l] = h[l] * phase;
                out[order - l] = h[l] * sign * phase.conj();
            }
        }
        Dimension::Three => {
            if order == 0 {
                let (s, c) = libm::sincos(k * r);
                out[0] = Complex64::new(c, s) * (Y00 / r);
                return Ok(());
            }
            let dir = d.scale(1.0 / r);
            let y = specfun::sph_harmonics_table(order, &dir);
            let h = specfun::sph_hankel1_out_table(order, k, r)?;
            for l in 0..=order {
                for m in -(l as i32)..=(l as i32) {
                    let s = harmonic_slot(l, m);
                    out[s] = y[s] * h[l];
                }
            }
        }
    }
    Ok(())
}

/// `Y_00 = 1/√(4π)`.
pub(crate) const Y00: f64 = 0.282_094_791_773_878_14;

/// `M × N` matrix of basis values at the boundary nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct CollocationMatrix {
    pub layout: BasisLayout,
    pub entries: DMatrix<Complex64>,
}

impl CollocationMatrix {
    pub fn rows(&self) -> usize {
        self.entries.nrows()
    }

    pub fn cols(&self) -> usize {
        self.entries.ncols()
    }

    /// `A c` as a plain vector.
    pub fn apply(&self, c: &[Complex64]) -> Result<Vec<Complex64>> {
        if c.len() != self.cols() {
            return Err(MrcError::DimensionMismatch {
                expected: self.cols(),
                got: c.len(),
            });
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.rows()];
        for (j, cj) in c.iter().enumerate() {
            if *cj == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (o, a) in out.iter_mut().zip(self.entries.column(j).iter()) {
                *o += a * cj;
            }
        }
        Ok(out)
    }
}

/// Collocation matrix with entry `(m, n) = ψ_{index(n)}(t_m, x_{j(n)})`.
pub fn assemble(surface: &Surface, sources: &PointBatch, order: usize, k: f64) -> Result<CollocationMatrix> {
    let dim = surface.dimension();
    let layout = BasisLayout::new(dim, order, sources.points.len());
    let per = layout.per_source();
    let rows = surface.len();
    let mut entries = DMatrix::<Complex64>::zeros(rows, layout.len());
    let mut block = vec![Complex64::new(0.0, 0.0); per];
    for (j, xj) in sources.points.iter().enumerate() {
        for (m, t) in surface.nodes().iter().enumerate() {
            eval_source_block(dim, order, k, t, xj, &mut block)?;
            for (local, v) in block.iter().enumerate() {
                entries[(m, j * per + local)] = *v;
            }
        }
    }
    Ok(CollocationMatrix { layout, entries })
}

/// Far-field pattern of a single basis function.
///
/// In space `ψ_lm(x, x_j) ~ [Y_lm(α') e^{-ik α'·x_j}] e^{ikr}/r`; in the
/// plane `ψ_l(x, x_j) ~ [√(2/(πk)) e^{-iπ/4} (-i)^l e^{ilθ'} e^{-ik α'·x_j}] e^{ikr}/√r`.
/// The bracketed factor is returned.
pub fn farfield_pattern(dim: Dimension, ell: i32, m: Option<i32>, source: &Point, k: f64, direction: &Point) -> Result<Complex64> {
    specfun::ensure_unit(direction)?;
    let (s, c) = libm::sincos(-k * direction.dot(source));
    let shift = Complex64::new(c, s);
    match (dim, m) {
        (Dimension::Three, Some(m)) if ell >= 0 => Ok(specfun::sph_harmonic(ell as usize, m, direction)? * shift),
        (Dimension::Two, None) => {
            let e = Complex64::new(direction.x(), direction.y());
            Ok(planar_farfield_scale(k) * minus_i_pow(ell) * unit_phase_pow(e, ell) * shift)
        }
        _ => Err(MrcError::invalid(alloc::format!(
            "basis index (l = {ell}, m = {m:?}) does not match {dim:?}"
        ))),
    }
}

/// `√(2/(πk)) e^{-iπ/4}`.
pub(crate) fn planar_farfield_scale(k: f64) -> Complex64 {
    let a = libm::sqrt(2.0 / (PI * k));
    Complex64::new(a * core::f64::consts::FRAC_1_SQRT_2, -a * core::f64::consts::FRAC_1_SQRT_2)
}

pub(crate) fn minus_i_pow(l: i32) -> Complex64 {
    match l.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    }
}

/// Far-field patterns of every basis function of one source, in local
/// column order. The direction is not validated.
pub(crate) fn farfield_source_block(
    dim: Dimension,
    order: usize,
    k: f64,
    source: &Point,
    direction: &Point,
    out: &mut [Complex64],
) {
    let (s, c) = libm::sincos(-k * direction.dot(source));
    let shift = Complex64::new(c, s);
    match dim {
        Dimension::Two => {
            let e = Complex64::new(direction.x(), direction.y());
            let base = planar_farfield_scale(k) * shift;
            for (local, o) in out.iter_mut().enumerate() {
                let l = local as i32 - order as i32;
                *o = base * minus_i_pow(l) * unit_phase_pow(e, l);
            }
        }
        Dimension::Three => {
            let y = specfun::sph_harmonics_table(order, direction);
            for (o, yv) in out.iter_mut().zip(y) {
                *o = yv * shift;
            }
        }
    }
}
