//! Truncated-SVD minimization of `‖b + A c‖` in the normalized discrete norm.
//!
//! Tall systems are first reduced with a Householder QR, `A = Q R`; the SVD
//! of the square factor `R = U Σ V*` has the singular values of `A`, and the
//! minimum-norm minimizer is `c = -V Σ⁺ U* (Q* b)`, where `Σ⁺` inverts only
//! singular values at or above the cutoff.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::linalg::SVD;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{MrcError, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `√((1/M) Σ |b_m|²)`.
pub fn normalized_norm(b: &[Complex64]) -> f64 {
    if b.is_empty() {
        return 0.0;
    }
    let sum: f64 = b.iter().map(|z| z.norm_sqr()).sum();
    libm::sqrt(sum / b.len() as f64)
}

/// Which singular values are discarded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cutoff {
    /// Drop `s_n < w`.
    Absolute(f64),
    /// Drop `s_n < w · s_max`.
    Relative(f64),
}

impl Cutoff {
    fn threshold(&self, s_max: f64) -> f64 {
        match *self {
            Cutoff::Absolute(w) => w,
            Cutoff::Relative(w) => w * s_max,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LsqSolution {
    pub coeffs: Vec<Complex64>,
    /// `b + A c` at the minimizer.
    pub residual_vector: Vec<Complex64>,
    /// Normalized norm of `residual_vector`.
    pub residual: f64,
    pub rank_used: usize,
    pub sv_max: f64,
    /// Smallest retained singular value, 0 if none was retained.
    pub sv_min_retained: f64,
}

/// Minimize `‖b + A c‖` with an absolute singular-value cutoff `w_min`.
pub fn svd_min(a: &DMatrix<Complex64>, b: &[Complex64], w_min: f64) -> Result<LsqSolution> {
    svd_min_with(a, b, Cutoff::Absolute(w_min))
}

pub fn svd_min_with(a: &DMatrix<Complex64>, b: &[Complex64], cutoff: Cutoff) -> Result<LsqSolution> {
    let (m, n) = a.shape();
    if m == 0 || n == 0 {
        return Err(MrcError::invalid("least squares needs a non-empty matrix"));
    }
    if b.len() != m {
        return Err(MrcError::DimensionMismatch { expected: m, got: b.len() });
    }
    let (w, valid) = match cutoff {
        Cutoff::Absolute(w) | Cutoff::Relative(w) => (w, w > 0.0 && w.is_finite()),
    };
    if !valid {
        return Err(MrcError::invalid(alloc::format!("cutoff must be positive, got {w}")));
    }
    if a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(MrcError::NumericalFailure {
            iteration: None,
            detail: "collocation matrix has non-finite entries".into(),
        });
    }

    // Reduce to a square problem when the system is tall.
    let (core, rhs) = if m > n {
        let (r, qb) = householder_reduce(a, b);
        (r, qb)
    } else {
        (a.clone(), DVector::from_column_slice(b))
    };

    let svd = SVD::try_new(core, true, true, f64::EPSILON, 10_000).ok_or_else(|| MrcError::NumericalFailure {
        iteration: None,
        detail: alloc::format!("SVD did not converge for a {m}x{n} matrix"),
    })?;
    let u = svd.u.as_ref().expect("requested U");
    let v_t = svd.v_t.as_ref().expect("requested V*");
    let s = &svd.singular_values;

    let sv_max = s.iter().cloned().fold(0.0, f64::max);
    let threshold = cutoff.threshold(sv_max);
    let mut coeffs = vec![ZERO; n];
    let mut rank_used = 0;
    let mut sv_min_retained = f64::INFINITY;
    for (i, &si) in s.iter().enumerate() {
        if !(si >= threshold) || si == 0.0 {
            continue;
        }
        rank_used += 1;
        sv_min_retained = sv_min_retained.min(si);
        // (u_i* rhs) / s_i
        let proj: Complex64 = u.column(i).iter().zip(rhs.iter()).map(|(ui, r)| ui.conj() * r).sum::<Complex64>() / si;
        // column i of V is the conjugate of row i of V*
        for (c, vt) in coeffs.iter_mut().zip(v_t.row(i).iter()) {
            *c -= vt.conj() * proj;
        }
    }
    if rank_used == 0 {
        sv_min_retained = 0.0;
    }

    let mut residual_vector = b.to_vec();
    for (j, cj) in coeffs.iter().enumerate() {
        if *cj == ZERO {
            continue;
        }
        for (r, aij) in residual_vector.iter_mut().zip(a.column(j).iter()) {
            *r += aij * cj;
        }
    }
    let residual = normalized_norm(&residual_vector);
    Ok(LsqSolution {
        coeffs,
        residual_vector,
        residual,
        rank_used,
        sv_max,
        sv_min_retained,
    })
}

/// Householder QR of a tall `a`: returns the `n × n` factor `R` and the
/// leading `n` entries of `Q* b`.
fn householder_reduce(a: &DMatrix<Complex64>, b: &[Complex64]) -> (DMatrix<Complex64>, DVector<Complex64>) {
    let (m, n) = a.shape();
    let mut work = a.clone();
    let mut qb = b.to_vec();
    let data = work.as_mut_slice();
    let mut v = vec![ZERO; m];
    for j in 0..n {
        let col = &data[j * m + j..(j + 1) * m];
        let norm = libm::sqrt(col.iter().map(|z| z.norm_sqr()).sum::<f64>());
        if norm == 0.0 {
            continue;
        }
        let x0 = col[0];
        let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { Complex64::new(1.0, 0.0) };
        let alpha = -phase * norm;
        let len = m - j;
        v[..len].copy_from_slice(col);
        v[0] -= alpha;
        let vv: f64 = v[..len].iter().map(|z| z.norm_sqr()).sum();
        if vv == 0.0 {
            continue;
        }
        let scale = 2.0 / vv;
        // column j becomes (alpha, 0, ..., 0)
        data[j * m + j] = alpha;
        for z in &mut data[j * m + j + 1..(j + 1) * m] {
            *z = ZERO;
        }
        for c in j + 1..n {
            let colc = &mut data[c * m + j..(c + 1) * m];
            let dot: Complex64 = v[..len].iter().zip(colc.iter()).map(|(vi, x)| vi.conj() * x).sum();
            let f = dot * scale;
            for (x, vi) in colc.iter_mut().zip(&v[..len]) {
                *x -= vi * f;
            }
        }
        let tail = &mut qb[j..];
        let dot: Complex64 = v[..len].iter().zip(tail.iter()).map(|(vi, x)| vi.conj() * x).sum();
        let f = dot * scale;
        for (x, vi) in tail.iter_mut().zip(&v[..len]) {
            *x -= vi * f;
        }
    }
    let r = DMatrix::from_fn(n, n, |i, c| if i <= c { work[(i, c)] } else { ZERO });
    (r, DVector::from_column_slice(&qb[..n]))
}
