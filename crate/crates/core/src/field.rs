//! Fields reconstructed from an [`Expansion`].
//!
//! In space the far-field amplitude is normalized by `v ~ A(α') e^{ikr}/r`;
//! in the plane by `v ~ A(α') e^{ikr}/√r`.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::basis::{eval_source_block, farfield_source_block};
use crate::error::{MrcError, Result};
use crate::geometry::Surface;
use crate::lsq::normalized_norm;
use crate::mrc::Expansion;
use crate::point::{Dimension, Point};
use crate::quadrature::SphereQuadrature;
use crate::specfun::{self, ensure_unit, harmonic_slot};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Far-field amplitudes `A(α')` on a set of directions.
#[derive(Debug, Clone, PartialEq)]
pub struct FarField {
    pub directions: Vec<Point>,
    pub amplitudes: Vec<Complex64>,
}

impl FarField {
    pub fn new(directions: Vec<Point>, amplitudes: Vec<Complex64>) -> Result<Self> {
        if directions.len() != amplitudes.len() {
            return Err(MrcError::DimensionMismatch {
                expected: directions.len(),
                got: amplitudes.len(),
            });
        }
        if amplitudes.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(MrcError::NumericalFailure {
                iteration: None,
                detail: "far-field amplitude is not finite".into(),
            });
        }
        Ok(FarField { directions, amplitudes })
    }

    /// Sample `f` on `directions`.
    pub fn sample<F: FnMut(&Point) -> Complex64>(directions: &[Point], mut f: F) -> Result<Self> {
        let amplitudes = directions.iter().map(&mut f).collect();
        FarField::new(directions.to_vec(), amplitudes)
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }
}

fn check_point(exp: &Expansion, x: &Point) -> Result<()> {
    if !x.is_finite() {
        return Err(MrcError::invalid("evaluation point is not finite"));
    }
    if exp.problem.dim == Dimension::Two && x.z() != 0.0 {
        return Err(MrcError::invalid("planar evaluation point must have zero z component"));
    }
    Ok(())
}

/// `v(x) = Σ c ψ(x, x_j)` over every term of the expansion.
pub fn scattered_field(exp: &Expansion, x: &Point) -> Result<Complex64> {
    check_point(exp, x)?;
    let per = exp.per_source();
    let mut buf = vec![ZERO; per];
    let mut sum = ZERO;
    for block in &exp.blocks {
        eval_source_block(exp.problem.dim, exp.order, exp.problem.k, x, &block.source, &mut buf)?;
        sum += block.coeffs.iter().zip(&buf).map(|(c, p)| c * p).sum::<Complex64>();
    }
    Ok(sum)
}

/// `u(x) = e^{ikα·x} + v(x)`.
pub fn total_field(exp: &Expansion, x: &Point) -> Result<Complex64> {
    Ok(exp.problem.incident(x) + scattered_field(exp, x)?)
}

fn check_direction(dim: Dimension, d: &Point) -> Result<()> {
    ensure_unit(d)?;
    if dim == Dimension::Two && d.z() != 0.0 {
        return Err(MrcError::invalid("planar direction must have zero z component"));
    }
    Ok(())
}

/// `A(α') = Σ c · farfield_pattern(term, α')` for each direction.
pub fn farfield(exp: &Expansion, directions: &[Point]) -> Result<FarField> {
    let dim = exp.problem.dim;
    let per = exp.per_source();
    let mut buf = vec![ZERO; per];
    let mut amplitudes = Vec::with_capacity(directions.len());
    for d in directions {
        check_direction(dim, d)?;
        let mut sum = ZERO;
        for block in &exp.blocks {
            farfield_source_block(dim, exp.order, exp.problem.k, &block.source, d, &mut buf);
            sum += block.coeffs.iter().zip(&buf).map(|(c, p)| c * p).sum::<Complex64>();
        }
        amplitudes.push(sum);
    }
    FarField::new(directions.to_vec(), amplitudes)
}

/// `A_lm = ∫ A(α') conj(Y_lm(α')) dα'` for `l <= lmax`, evaluated with
/// `quadrature`, whose directions must be those of `ff`. Output is indexed
/// by [`harmonic_slot`].
pub fn farfield_coefficients(ff: &FarField, quadrature: &SphereQuadrature, lmax: usize) -> Result<Vec<Complex64>> {
    if quadrature.degree < 2 * lmax {
        return Err(MrcError::InsufficientQuadrature {
            degree: quadrature.degree,
            order: lmax,
        });
    }
    if ff.len() != quadrature.len() {
        return Err(MrcError::DimensionMismatch {
            expected: quadrature.len(),
            got: ff.len(),
        });
    }
    if ff.directions.iter().zip(&quadrature.directions).any(|(a, b)| a.distance(b) > 1e-12) {
        return Err(MrcError::invalid("far-field directions differ from the quadrature nodes"));
    }
    let mut coeffs = vec![ZERO; (lmax + 1) * (lmax + 1)];
    for ((d, w), a) in quadrature.directions.iter().zip(&quadrature.weights).zip(&ff.amplitudes) {
        let y = specfun::sph_harmonics_table(lmax, d);
        for (c, yv) in coeffs.iter_mut().zip(y) {
            *c += a * yv.conj() * *w;
        }
    }
    Ok(coeffs)
}

/// Coefficient `A_lm` from the output of [`farfield_coefficients`].
pub fn coefficient(coeffs: &[Complex64], l: usize, m: i32) -> Option<Complex64> {
    if m.unsigned_abs() as usize > l {
        return None;
    }
    coeffs.get(harmonic_slot(l, m)).copied()
}

/// `|Δ_h v + k² v| / (k² |v|)` with the central second-difference Laplacian
/// of step `h`; zero when `v` vanishes identically.
pub fn helmholtz_residual(exp: &Expansion, x: &Point, h: f64) -> Result<f64> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(MrcError::invalid(alloc::format!("step must be positive, got {h}")));
    }
    check_point(exp, x)?;
    if let Some(b) = exp.blocks.iter().find(|b| b.source.distance(x) <= 2.0 * h) {
        return Err(MrcError::domain(alloc::format!(
            "stencil of step {h} at {:?} reaches the source {:?}",
            x.0,
            b.source.0
        )));
    }
    if exp.blocks.iter().all(|b| b.coeffs.iter().all(|c| *c == ZERO)) {
        return Ok(0.0);
    }
    let k = exp.problem.k;
    let v = scattered_field(exp, x)?;
    let mut lap = -2.0 * exp.problem.dim.count() as f64 * v;
    for axis in 0..exp.problem.dim.count() {
        for s in [-1.0, 1.0] {
            let mut y = *x;
            y.0[axis] += s * h;
            lap += scattered_field(exp, &y)?;
        }
    }
    lap /= h * h;
    Ok((lap + k * k * v).norm() / (k * k * v.norm().max(1e-300)))
}

/// Normalized norm of `u_0 + v` over the surface nodes.
pub fn boundary_error(exp: &Expansion, surface: &Surface) -> Result<f64> {
    if surface.dimension() != exp.problem.dim {
        return Err(MrcError::invalid("surface and expansion dimensions differ"));
    }
    let values = surface
        .nodes()
        .iter()
        .map(|t| total_field(exp, t))
        .collect::<Result<Vec<_>>>()?;
    Ok(normalized_norm(&values))
}
