//! The random multi-point MRC iteration.
//!
//! Each iteration draws a batch of interior sources, fits the current
//! boundary trace `g` with the outgoing functions anchored there, and either
//! stops (residual at or below `ε`) or absorbs the fitted field into `g` and
//! continues with a fresh batch. All fitted terms are kept in an
//! [`Expansion`], which reconstructs the scattered field anywhere outside
//! the obstacle.

use alloc::vec::Vec;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::basis::{self, BasisIndex, BasisLayout, CollocationMatrix};
use crate::error::{MrcError, Result};
use crate::geometry::{deterministic_sources, sample_sources_clear, PointBatch, Sampling, Surface};
use crate::lsq::{normalized_norm, svd_min_with, Cutoff};
use crate::point::{Dimension, Point};

/// Incident plane wave `u_0 = e^{ik α·x}` and wavenumber.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatterProblem {
    pub dim: Dimension,
    pub k: f64,
    pub alpha: Point,
}

impl ScatterProblem {
    pub fn new(dim: Dimension, k: f64, alpha: Point) -> Result<Self> {
        if !(k > 0.0 && k.is_finite()) {
            return Err(MrcError::invalid(alloc::format!("wavenumber must be positive, got {k}")));
        }
        if !alpha.is_finite() || !alpha.is_unit(1e-12) {
            return Err(MrcError::invalid(alloc::format!("incident direction {:?} is not a unit vector", alpha.0)));
        }
        if dim == Dimension::Two && alpha.z() != 0.0 {
            return Err(MrcError::invalid("planar incident direction must have zero z component"));
        }
        Ok(ScatterProblem { dim, k, alpha })
    }

    pub fn incident(&self, x: &Point) -> Complex64 {
        let (s, c) = libm::sincos(self.k * self.alpha.dot(x));
        Complex64::new(c, s)
    }
}

/// How each iteration chooses its sources.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Placement {
    /// Fresh uniform samples of the interior every iteration.
    Random,
    /// One iteration with sources on the boundary shrunk by `scale` (planar only).
    Deterministic { scale: f64 },
}

/// Optional early exit when the residual stops moving.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StagnationGuard {
    pub rel_tol: f64,
    pub window: usize,
}

impl Default for StagnationGuard {
    fn default() -> Self {
        StagnationGuard {
            rel_tol: 1e-8,
            window: 50,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Target residual `ε`.
    pub epsilon: f64,
    /// Maximal order `L`.
    pub order: usize,
    /// Sources per batch `J`.
    pub batch_size: usize,
    /// Iteration cap `N_max`.
    pub max_iterations: usize,
    /// Singular-value cutoff `w_min`.
    pub w_min: f64,
    /// Interpret `w_min` relative to the largest singular value.
    pub relative_cutoff: bool,
    pub seed: u64,
    pub placement: Placement,
    /// Source distribution used by [`Placement::Random`].
    pub sampling: Sampling,
    /// Random sources closer than this to every boundary node are redrawn.
    /// Zero disables the check.
    pub clearance: f64,
    pub stagnation: Option<StagnationGuard>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            epsilon: 1e-4,
            order: 5,
            batch_size: 1,
            max_iterations: 20_000,
            w_min: 1e-12,
            relative_cutoff: false,
            seed: 1,
            placement: Placement::Random,
            sampling: Sampling::Uniform,
            clearance: 0.0,
            stagnation: None,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(MrcError::invalid(alloc::format!("solver config: {what}")));
        if !(self.epsilon > 0.0) {
            return bad("epsilon must be positive");
        }
        if self.batch_size == 0 {
            return bad("batch size must be at least 1");
        }
        if self.max_iterations == 0 {
            return bad("max_iterations must be at least 1");
        }
        if !(self.w_min > 0.0 && self.w_min.is_finite()) {
            return bad("w_min must be positive");
        }
        if !(self.clearance >= 0.0 && self.clearance.is_finite()) {
            return bad("clearance must be finite and non-negative");
        }
        if let Placement::Deterministic { scale } = self.placement {
            if !(scale > 0.0 && scale < 1.0) {
                return bad("deterministic scale must lie in (0, 1)");
            }
        }
        if let Some(g) = self.stagnation {
            if g.window == 0 || !(g.rel_tol >= 0.0) {
                return bad("stagnation guard needs a positive window and non-negative tolerance");
            }
        }
        Ok(())
    }

    fn cutoff(&self) -> Cutoff {
        if self.relative_cutoff {
            Cutoff::Relative(self.w_min)
        } else {
            Cutoff::Absolute(self.w_min)
        }
    }
}

/// Coefficients of every basis function anchored at one source.
#[derive(Debug, Clone, PartialEq)]
pub struct SourceBlock {
    /// Iteration (1-based) that produced the source.
    pub iteration: usize,
    /// Position of the source within its batch (0-based).
    pub slot: usize,
    pub source: Point,
    /// One coefficient per basis function, in local column order.
    pub coeffs: Vec<Complex64>,
}

/// One term `c · ψ_index(x, source)` of an expansion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub iteration: usize,
    pub index: BasisIndex,
    pub source: Point,
    pub coeff: Complex64,
}

/// Accumulated sources and coefficients of an approximate scattered field.
#[derive(Debug, Clone, PartialEq)]
pub struct Expansion {
    pub problem: ScatterProblem,
    pub order: usize,
    pub blocks: Vec<SourceBlock>,
}

impl Expansion {
    pub fn empty(problem: ScatterProblem, order: usize) -> Self {
        Expansion {
            problem,
            order,
            blocks: Vec::new(),
        }
    }

    pub fn per_source(&self) -> usize {
        basis::per_source(self.problem.dim, self.order)
    }

    pub fn term_count(&self) -> usize {
        self.blocks.len() * self.per_source()
    }

    /// Highest iteration index among the blocks, 0 when empty.
    pub fn iterations(&self) -> usize {
        self.blocks.iter().map(|b| b.iteration).max().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = Term> + '_ {
        let dim = self.problem.dim;
        let order = self.order;
        self.blocks.iter().flat_map(move |b| {
            b.coeffs.iter().enumerate().map(move |(local, c)| {
                let (ell, m) = basis::local_index(dim, order, local);
                Term {
                    iteration: b.iteration,
                    index: BasisIndex {
                        source: b.slot,
                        ell,
                        m,
                    },
                    source: b.source,
                    coeff: *c,
                }
            })
        })
    }

    /// Append the blocks of `other`, which must describe the same problem
    /// and order.
    pub fn extend_from(&mut self, other: &Expansion) -> Result<()> {
        if other.problem != self.problem || other.order != self.order {
            return Err(MrcError::invalid("expansions differ in problem or order"));
        }
        self.blocks.extend(other.blocks.iter().cloned());
        Ok(())
    }

    fn push_batch(&mut self, batch: &PointBatch, coeffs: &[Complex64]) {
        let per = self.per_source();
        for (slot, (p, c)) in batch.points.iter().zip(coeffs.chunks(per)).enumerate() {
            self.blocks.push(SourceBlock {
                iteration: batch.batch_index,
                slot,
                source: *p,
                coeffs: c.to_vec(),
            });
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    /// Minimal discrepancy `r_min` of every iteration.
    pub residual_history: Vec<f64>,
    pub final_residual: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Seconds spent in the solve. The core has no clock and leaves this at
    /// zero; drivers with one fill it in.
    pub wall_time: f64,
}

/// Boundary values `g_m = u_0(t_m)` of the incident wave.
pub fn boundary_trace(problem: &ScatterProblem, surface: &Surface) -> Result<Vec<Complex64>> {
    if surface.dimension() != problem.dim {
        return Err(MrcError::invalid("surface and problem dimensions differ"));
    }
    Ok(surface.nodes().iter().map(|t| problem.incident(t)).collect())
}

/// `Φ(c) = ‖g + A c‖`.
pub fn discrepancy(g: &[Complex64], a: &CollocationMatrix, c: &[Complex64]) -> Result<f64> {
    if g.len() != a.rows() {
        return Err(MrcError::DimensionMismatch {
            expected: a.rows(),
            got: g.len(),
        });
    }
    let ac = a.apply(c)?;
    let sum: Vec<Complex64> = g.iter().zip(&ac).map(|(x, y)| x + y).collect();
    Ok(normalized_norm(&sum))
}

pub fn solve(problem: &ScatterProblem, surface: &Surface, config: &SolverConfig) -> Result<(Expansion, SolveReport)> {
    solve_observed(problem, surface, config, |_, _| {})
}

/// [`solve`] with a callback receiving `(iteration, r_min)` after every
/// iteration.
pub fn solve_observed<F>(
    problem: &ScatterProblem,
    surface: &Surface,
    config: &SolverConfig,
    mut observe: F,
) -> Result<(Expansion, SolveReport)>
where
    F: FnMut(usize, f64),
{
    config.validate()?;
    let mut g = boundary_trace(problem, surface)?;
    let mut expansion = Expansion::empty(*problem, config.order);
    let mut history = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let cutoff = config.cutoff();
    let max_iter = match config.placement {
        Placement::Random => config.max_iterations,
        Placement::Deterministic { .. } => 1,
    };

    let mut converged = false;
    for n in 1..=max_iter {
        let mut batch = match config.placement {
            Placement::Random => sample_sources_clear(surface, config.batch_size, config.sampling, config.clearance, &mut rng),
            Placement::Deterministic { scale } => deterministic_sources(surface, scale, config.batch_size),
        }
        .map_err(|e| e.at_iteration(n))?;
        batch.batch_index = n;

        let a = basis::assemble(surface, &batch, config.order, problem.k).map_err(|e| e.at_iteration(n))?;
        let fit = svd_min_with(&a.entries, &g, cutoff).map_err(|e| e.at_iteration(n))?;

        expansion.push_batch(&batch, &fit.coeffs);
        g = fit.residual_vector;
        history.push(fit.residual);
        observe(n, fit.residual);

        if fit.residual <= config.epsilon {
            converged = true;
            break;
        }
        if let Some(guard) = config.stagnation {
            if history.len() > guard.window {
                let old = history[history.len() - 1 - guard.window];
                if old - fit.residual < guard.rel_tol * old {
                    break;
                }
            }
        }
    }

    let final_residual = *history.last().expect("at least one iteration");
    let report = SolveReport {
        iterations: history.len(),
        final_residual,
        converged,
        residual_history: history,
        wall_time: 0.0,
    };
    Ok((expansion, report))
}

/// One fit with caller-chosen sources, reported as a single iteration.
/// Only `epsilon`, `order`, `w_min` and `relative_cutoff` of `config` are used.
pub fn fit_sources(
    problem: &ScatterProblem,
    surface: &Surface,
    sources: &[Point],
    config: &SolverConfig,
) -> Result<(Expansion, SolveReport)> {
    config.validate()?;
    if sources.is_empty() {
        return Err(MrcError::invalid("at least one source is required"));
    }
    if let Some(p) = sources.iter().find(|p| !surface.contains(p)) {
        return Err(MrcError::invalid(alloc::format!("source {:?} is not inside the obstacle", p.0)));
    }
    let g = boundary_trace(problem, surface)?;
    let batch = PointBatch {
        points: sources.to_vec(),
        batch_index: 1,
    };
    let a = basis::assemble(surface, &batch, config.order, problem.k).map_err(|e| e.at_iteration(1))?;
    let fit = svd_min_with(&a.entries, &g, config.cutoff()).map_err(|e| e.at_iteration(1))?;
    let mut expansion = Expansion::empty(*problem, config.order);
    expansion.push_batch(&batch, &fit.coeffs);
    let report = SolveReport {
        residual_history: alloc::vec![fit.residual],
        final_residual: fit.residual,
        iterations: 1,
        converged: fit.residual <= config.epsilon,
        wall_time: 0.0,
    };
    Ok((expansion, report))
}

/// Layout of one iteration's columns for an expansion's problem.
pub fn batch_layout(expansion: &Expansion, batch_size: usize) -> BasisLayout {
    BasisLayout::new(expansion.problem.dim, expansion.order, batch_size)
}
