//! TOML experiment descriptions.
//!
//! ```toml
//! [obstacle]
//! kind = "ellipse"
//! a = 2.0
//! b = 1.0
//! nodes = 720
//!
//! [problem]
//! k = 1.0
//! alpha = [1.0, 0.0]      # planar: Cartesian; spatial: [theta, phi], phi polar
//!
//! [solver]
//! epsilon = 1e-4
//! order = 5
//!
//! [outputs]
//! dir = "out"
//! coefficients = true
//! ```
//!
//! Unknown keys anywhere are rejected.

use std::path::{Path, PathBuf};

use mrc_core::geometry::{Obstacle, Sampling, Surface, TRIANGLE_VERTICES};
use mrc_core::mrc::{Placement, ScatterProblem, SolverConfig, StagnationGuard};
use mrc_core::point::{direction_from_angles, Dimension, Point};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub obstacle: ObstacleSpec,
    pub problem: ProblemSpec,
    #[serde(default)]
    pub solver: SolverSpec,
    #[serde(default)]
    pub outputs: OutputSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ObstacleKind {
    Ellipse,
    Kite,
    Triangle,
    Disk,
    Sphere,
    Cube,
    Ellipsoid,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObstacleSpec {
    pub kind: ObstacleKind,
    /// Number of boundary nodes `M`.
    pub nodes: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub half: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<[[f64; 2]; 3]>,
}

impl ObstacleSpec {
    pub fn of(obstacle: &Obstacle, nodes: usize) -> Self {
        let mut s = ObstacleSpec {
            kind: ObstacleKind::Kite,
            nodes,
            a: None,
            b: None,
            c: None,
            radius: None,
            half: None,
            vertices: None,
        };
        match *obstacle {
            Obstacle::Ellipse { a, b } => {
                s.kind = ObstacleKind::Ellipse;
                (s.a, s.b) = (Some(a), Some(b));
            }
            Obstacle::Kite => {}
            Obstacle::Triangle { vertices } => {
                s.kind = ObstacleKind::Triangle;
                s.vertices = Some(vertices);
            }
            Obstacle::Disk { radius } => {
                s.kind = ObstacleKind::Disk;
                s.radius = Some(radius);
            }
            Obstacle::Sphere { radius } => {
                s.kind = ObstacleKind::Sphere;
                s.radius = Some(radius);
            }
            Obstacle::Cube { half } => {
                s.kind = ObstacleKind::Cube;
                s.half = Some(half);
            }
            Obstacle::Ellipsoid { a, b, c } => {
                s.kind = ObstacleKind::Ellipsoid;
                (s.a, s.b, s.c) = (Some(a), Some(b), Some(c));
            }
        }
        s
    }

    pub fn obstacle(&self) -> CliResult<Obstacle> {
        let present = [
            ("a", self.a.is_some()),
            ("b", self.b.is_some()),
            ("c", self.c.is_some()),
            ("radius", self.radius.is_some()),
            ("half", self.half.is_some()),
            ("vertices", self.vertices.is_some()),
        ];
        let (allowed, required): (&[&str], &[&str]) = match self.kind {
            ObstacleKind::Ellipse => (&["a", "b"], &["a", "b"]),
            ObstacleKind::Kite => (&[], &[]),
            ObstacleKind::Triangle => (&["vertices"], &[]),
            ObstacleKind::Disk | ObstacleKind::Sphere => (&["radius"], &["radius"]),
            ObstacleKind::Cube => (&["half"], &["half"]),
            ObstacleKind::Ellipsoid => (&["a", "b", "c"], &["a", "b", "c"]),
        };
        for (key, set) in present {
            if set && !allowed.contains(&key) {
                return Err(CliError::config(format!("obstacle.{key} is not used by kind {:?}", self.kind)));
            }
            if !set && required.contains(&key) {
                return Err(CliError::config(format!("obstacle.{key} is required for kind {:?}", self.kind)));
            }
        }
        let v = |x: Option<f64>| x.unwrap_or_default();
        let o = match self.kind {
            ObstacleKind::Ellipse => Obstacle::Ellipse { a: v(self.a), b: v(self.b) },
            ObstacleKind::Kite => Obstacle::Kite,
            ObstacleKind::Triangle => Obstacle::Triangle {
                vertices: self.vertices.unwrap_or(TRIANGLE_VERTICES),
            },
            ObstacleKind::Disk => Obstacle::Disk { radius: v(self.radius) },
            ObstacleKind::Sphere => Obstacle::Sphere { radius: v(self.radius) },
            ObstacleKind::Cube => Obstacle::Cube { half: v(self.half) },
            ObstacleKind::Ellipsoid => Obstacle::Ellipsoid {
                a: v(self.a),
                b: v(self.b),
                c: v(self.c),
            },
        };
        Ok(o)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub k: f64,
    /// Planar: the unit vector itself. Spatial: `[theta, phi]` in radians,
    /// `phi` polar.
    pub alpha: [f64; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlacementKind {
    #[default]
    Random,
    Deterministic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SamplingKind {
    #[default]
    Uniform,
    Polar,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StagnationSpec {
    pub rel_tol: f64,
    pub window: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverSpec {
    pub epsilon: f64,
    pub order: usize,
    pub batch_size: usize,
    pub max_iterations: usize,
    pub w_min: f64,
    pub relative_cutoff: bool,
    pub seed: u64,
    pub placement: PlacementKind,
    /// Shrink factor for deterministic placement.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scale: Option<f64>,
    pub sampling: SamplingKind,
    /// Minimum distance of random sources from every boundary node.
    pub clearance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stagnation: Option<StagnationSpec>,
}

impl Default for SolverSpec {
    fn default() -> Self {
        SolverSpec::from_config(&SolverConfig::default())
    }
}

impl SolverSpec {
    pub fn from_config(c: &SolverConfig) -> Self {
        let (placement, scale) = match c.placement {
            Placement::Random => (PlacementKind::Random, None),
            Placement::Deterministic { scale } => (PlacementKind::Deterministic, Some(scale)),
        };
        SolverSpec {
            epsilon: c.epsilon,
            order: c.order,
            batch_size: c.batch_size,
            max_iterations: c.max_iterations,
            w_min: c.w_min,
            relative_cutoff: c.relative_cutoff,
            seed: c.seed,
            placement,
            scale,
            sampling: match c.sampling {
                Sampling::Uniform => SamplingKind::Uniform,
                Sampling::Polar => SamplingKind::Polar,
            },
            clearance: c.clearance,
            stagnation: c.stagnation.map(|g| StagnationSpec {
                rel_tol: g.rel_tol,
                window: g.window,
            }),
        }
    }

    pub fn config(&self) -> CliResult<SolverConfig> {
        if self.seed > i64::MAX as u64 {
            return Err(CliError::config("solver.seed must not exceed 2^63 - 1"));
        }
        let placement = match (self.placement, self.scale) {
            (PlacementKind::Random, None) => Placement::Random,
            (PlacementKind::Random, Some(_)) => {
                return Err(CliError::config("solver.scale is only used with placement = \"deterministic\""))
            }
            (PlacementKind::Deterministic, Some(scale)) => Placement::Deterministic { scale },
            (PlacementKind::Deterministic, None) => {
                return Err(CliError::config("solver.scale is required with placement = \"deterministic\""))
            }
        };
        let c = SolverConfig {
            epsilon: self.epsilon,
            order: self.order,
            batch_size: self.batch_size,
            max_iterations: self.max_iterations,
            w_min: self.w_min,
            relative_cutoff: self.relative_cutoff,
            seed: self.seed,
            placement,
            sampling: match self.sampling {
                SamplingKind::Uniform => Sampling::Uniform,
                SamplingKind::Polar => Sampling::Polar,
            },
            clearance: self.clearance,
            stagnation: self.stagnation.as_ref().map(|g| StagnationGuard {
                rel_tol: g.rel_tol,
                window: g.window,
            }),
        };
        c.validate().map_err(|e| CliError::config(e.to_string()))?;
        Ok(c)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    /// `[x0, x1, y0, y1]` or `[x0, x1, y0, y1, z0, z1]`.
    pub bounds: Vec<f64>,
    /// Points per axis.
    pub resolution: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FarFieldSpec {
    pub directions: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSpec {
    pub dir: PathBuf,
    pub report: bool,
    pub coefficients: bool,
    pub residual_history: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field_grid: Option<GridSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub farfield: Option<FarFieldSpec>,
}

impl Default for OutputSpec {
    fn default() -> Self {
        OutputSpec {
            dir: PathBuf::from("."),
            report: true,
            coefficients: false,
            residual_history: false,
            field_grid: None,
            farfield: None,
        }
    }
}

/// Everything a solve needs, checked.
#[derive(Debug, Clone, PartialEq)]
pub struct Validated {
    pub surface: Surface,
    pub problem: ScatterProblem,
    pub config: SolverConfig,
}

impl ExperimentSpec {
    pub fn parse(text: &str) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| CliError::config(e.to_string()))
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
        ExperimentSpec::parse(&text)
    }

    /// Fails only for integers TOML cannot hold (above `i64::MAX`).
    pub fn to_toml(&self) -> CliResult<String> {
        toml::to_string(self).map_err(|e| CliError::config(e.to_string()))
    }

    pub fn validate(&self) -> CliResult<Validated> {
        let obstacle = self.obstacle.obstacle()?;
        let surface = Surface::new(obstacle, self.obstacle.nodes).map_err(|e| CliError::config(e.to_string()))?;
        let dim = obstacle.dimension();
        let alpha = match dim {
            Dimension::Two => Point::xy(self.problem.alpha[0], self.problem.alpha[1]),
            Dimension::Three => direction_from_angles(self.problem.alpha[0], self.problem.alpha[1]),
        };
        let problem = ScatterProblem::new(dim, self.problem.k, alpha).map_err(|e| CliError::config(e.to_string()))?;
        let config = self.solver.config()?;
        if let Some(g) = &self.outputs.field_grid {
            grid_axes(dim, &g.bounds, g.resolution)?;
        }
        if matches!(&self.outputs.farfield, Some(f) if f.directions == 0) {
            return Err(CliError::config("outputs.farfield.directions must be positive"));
        }
        Ok(Validated {
            surface,
            problem,
            config,
        })
    }
}

/// Sample coordinates along each axis of a grid, endpoints included.
pub fn grid_axes(dim: Dimension, bounds: &[f64], resolution: usize) -> CliResult<Vec<Vec<f64>>> {
    if bounds.len() != 2 * dim.count() {
        return Err(CliError::config(format!(
            "grid bounds need {} numbers for a {}-dimensional problem, got {}",
            2 * dim.count(),
            dim.count(),
            bounds.len()
        )));
    }
    if resolution == 0 {
        return Err(CliError::config("grid resolution must be positive"));
    }
    bounds
        .chunks(2)
        .map(|lh| {
            let (lo, hi) = (lh[0], lh[1]);
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(CliError::config(format!("bad grid interval [{lo}, {hi}]")));
            }
            Ok(if resolution == 1 {
                vec![0.5 * (lo + hi)]
            } else {
                (0..resolution)
                    .map(|i| lo + (hi - lo) * i as f64 / (resolution - 1) as f64)
                    .collect()
            })
        })
        .collect()
}
