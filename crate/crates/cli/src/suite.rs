//! The two benchmark tables.
//!
//! Table 1: four planar obstacles × k ∈ {1, 5} × α ∈ {(1,0), (0,1)}, random
//! mode with J = 1, L = 5, M = 720, ε = 1e-4, at most 20000 iterations, plus
//! a single deterministic fit (`r_min_old`) with the shrunken-boundary
//! sources of the earlier multi-point method.
//!
//! Table 2: sphere, cube and ellipsoid with J = 80, L = 0, w_min = 1e-12.
//! Each row targets its reference residual with four times the reference
//! iteration count (at least 10) as the cap.
//!
//! Row `i` (0-based) of a suite uses seed `seed ^ i`. The result table holds
//! no timings, so equal seeds give byte-identical tables; wall times go to a
//! separate file.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use mrc_core::geometry::Obstacle;
use mrc_core::mrc::{solve, Placement, SolveReport, SolverConfig};

use crate::config::{ExperimentSpec, ObstacleSpec, OutputSpec, ProblemSpec, SamplingKind, SolverSpec};
use crate::error::{CliError, CliResult};
use crate::files::num;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Table1,
    Table2,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Table1 => "table1",
            Suite::Table2 => "table2",
        }
    }

    pub fn cases(self, seed: u64) -> Vec<SuiteCase> {
        match self {
            Suite::Table1 => table1_cases(seed),
            Suite::Table2 => table2_cases(seed),
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "table1" => Ok(Suite::Table1),
            "table2" => Ok(Suite::Table2),
            _ => Err(CliError::config(format!("unknown suite `{s}`, expected table1 or table2"))),
        }
    }
}

/// Placement of the earlier deterministic multi-point method.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OldPlacement {
    pub batch_size: usize,
    pub scale: f64,
}

/// Reference values for a row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reference {
    pub r_min_old: Option<f64>,
    pub r_min: f64,
    pub n_iter: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteCase {
    pub experiment: &'static str,
    pub row: usize,
    /// 1 or 2 for spatial rows, the Cartesian direction is in `spec`.
    pub alpha_index: usize,
    pub spec: ExperimentSpec,
    pub old: Option<OldPlacement>,
    pub reference: Reference,
}

fn spec(obstacle: Obstacle, nodes: usize, k: f64, alpha: [f64; 2], solver: SolverSpec) -> ExperimentSpec {
    ExperimentSpec {
        obstacle: ObstacleSpec::of(&obstacle, nodes),
        problem: ProblemSpec { k, alpha },
        solver,
        outputs: OutputSpec {
            report: false,
            ..OutputSpec::default()
        },
    }
}

pub fn table1_cases(seed: u64) -> Vec<SuiteCase> {
    let experiments: [(&str, Obstacle, usize, f64, [f64; 4]); 4] = [
        ("I", Obstacle::Ellipse { a: 2.0, b: 1.0 }, 4, 0.7, [0.000201, 0.000357, 0.001309, 0.007228]),
        ("II", Obstacle::Kite, 16, 0.9, [0.003555, 0.002169, 0.009673, 0.007291]),
        ("III", Obstacle::triangle(), 16, 0.9, [0.008281, 0.007523, 0.021571, 0.024360]),
        ("IV", Obstacle::Ellipse { a: 0.1, b: 1.0 }, 32, 0.95, [0.006610, 0.006785, 0.034027, 0.040129]),
    ];
    let mut cases = Vec::new();
    for (name, obstacle, j_old, scale, old) in experiments {
        for (i, (k, alpha)) in [(1.0, [1.0, 0.0]), (1.0, [0.0, 1.0]), (5.0, [1.0, 0.0]), (5.0, [0.0, 1.0])]
            .into_iter()
            .enumerate()
        {
            let row = cases.len();
            let solver = SolverSpec {
                epsilon: 1e-4,
                order: 5,
                batch_size: 1,
                max_iterations: 20_000,
                w_min: 1e-12,
                seed: seed ^ row as u64,
                ..SolverSpec::default()
            };
            cases.push(SuiteCase {
                experiment: name,
                row,
                alpha_index: if alpha[0] == 1.0 { 1 } else { 2 },
                spec: spec(obstacle, 720, k, alpha, solver),
                old: Some(OldPlacement {
                    batch_size: j_old,
                    scale,
                }),
                reference: Reference {
                    r_min_old: Some(old[i]),
                    r_min: 1e-4,
                    n_iter: None,
                },
            });
        }
    }
    cases
}

/// `α_1 = (θ, φ) = (0, π/2)`, `α_2 = (π/2, π/4)`.
pub const TABLE2_ALPHAS: [[f64; 2]; 2] = [[0.0, FRAC_PI_2], [FRAC_PI_2, FRAC_PI_4]];

pub fn table2_cases(seed: u64) -> Vec<SuiteCase> {
    #[rustfmt::skip]
    let rows: [(&str, Obstacle, usize, f64, usize, f64, usize); 10] = [
        ("I", Obstacle::Sphere { radius: 1.0 }, 450, 1.0, 1, 0.0002, 1),
        ("I", Obstacle::Sphere { radius: 1.0 }, 450, 5.0, 1, 0.001, 700),
        ("II", Obstacle::Cube { half: 1.0 }, 1350, 1.0, 1, 0.001, 800),
        ("II", Obstacle::Cube { half: 1.0 }, 1350, 1.0, 2, 0.001, 200),
        ("II", Obstacle::Cube { half: 1.0 }, 1350, 5.0, 1, 0.0035, 2000),
        ("II", Obstacle::Cube { half: 1.0 }, 1350, 5.0, 2, 0.002, 2000),
        ("III", Obstacle::Ellipsoid { a: 4.0, b: 1.0, c: 1.0 }, 450, 1.0, 1, 0.001, 3600),
        ("III", Obstacle::Ellipsoid { a: 4.0, b: 1.0, c: 1.0 }, 450, 1.0, 2, 0.001, 3000),
        ("III", Obstacle::Ellipsoid { a: 4.0, b: 1.0, c: 1.0 }, 450, 5.0, 1, 0.0026, 5000),
        ("III", Obstacle::Ellipsoid { a: 4.0, b: 1.0, c: 1.0 }, 450, 5.0, 2, 0.001, 5000),
    ];
    rows.into_iter()
        .enumerate()
        .map(|(row, (name, obstacle, nodes, k, ai, r_min, n_iter))| {
            let sampling = match obstacle {
                Obstacle::Sphere { .. } => SamplingKind::Polar,
                _ => SamplingKind::Uniform,
            };
            let solver = SolverSpec {
                epsilon: r_min,
                order: 0,
                batch_size: 80,
                max_iterations: (4 * n_iter).max(10),
                w_min: 1e-12,
                seed: seed ^ row as u64,
                sampling,
                ..SolverSpec::default()
            };
            SuiteCase {
                experiment: name,
                row,
                alpha_index: ai,
                spec: spec(obstacle, nodes, k, TABLE2_ALPHAS[ai - 1], solver),
                old: None,
                reference: Reference {
                    r_min_old: None,
                    r_min,
                    n_iter: Some(n_iter),
                },
            }
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct CaseResult {
    pub case: SuiteCase,
    pub report: SolveReport,
    /// Single deterministic fit residual (Table 1 only).
    pub old_residual: Option<f64>,
    pub old_wall_time: Option<f64>,
}

pub fn run_case(case: &SuiteCase) -> CliResult<CaseResult> {
    let v = case.spec.validate()?;
    let (old_residual, old_wall_time) = match case.old {
        Some(old) => {
            let cfg = SolverConfig {
                batch_size: old.batch_size,
                placement: Placement::Deterministic { scale: old.scale },
                ..v.config
            };
            let start = Instant::now();
            let (_, rep) = solve(&v.problem, &v.surface, &cfg)?;
            (Some(rep.final_residual), Some(start.elapsed().as_secs_f64()))
        }
        None => (None, None),
    };
    let start = Instant::now();
    let (_, mut report) = solve(&v.problem, &v.surface, &v.config)?;
    report.wall_time = start.elapsed().as_secs_f64();
    Ok(CaseResult {
        case: case.clone(),
        report,
        old_residual,
        old_wall_time,
    })
}

pub fn write_table<W: Write>(out: W, suite: Suite, results: &[CaseResult]) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(out);
    match suite {
        Suite::Table1 => w.write_record([
            "experiment", "obstacle", "J_old", "k", "alpha_x", "alpha_y", "r_min_old", "r_min", "n_iter", "converged",
            "seed",
        ])?,
        Suite::Table2 => w.write_record([
            "experiment", "obstacle", "k", "alpha", "theta", "phi", "sampling", "epsilon", "n_max", "r_min", "n_iter",
            "converged", "seed",
        ])?,
    }
    for r in results {
        let c = &r.case;
        let s = &c.spec;
        let tag = s.obstacle.obstacle()?.tag();
        let common_tail = [
            num(r.report.final_residual),
            r.report.iterations.to_string(),
            r.report.converged.to_string(),
            s.solver.seed.to_string(),
        ];
        let mut rec: Vec<String> = match suite {
            Suite::Table1 => vec![
                c.experiment.to_string(),
                tag.to_string(),
                c.old.map(|o| o.batch_size.to_string()).unwrap_or_default(),
                s.problem.k.to_string(),
                s.problem.alpha[0].to_string(),
                s.problem.alpha[1].to_string(),
                r.old_residual.map(num).unwrap_or_default(),
            ],
            Suite::Table2 => vec![
                c.experiment.to_string(),
                tag.to_string(),
                s.problem.k.to_string(),
                c.alpha_index.to_string(),
                num(s.problem.alpha[0]),
                num(s.problem.alpha[1]),
                format!("{:?}", s.solver.sampling).to_lowercase(),
                s.solver.epsilon.to_string(),
                s.solver.max_iterations.to_string(),
            ],
        };
        rec.extend(common_tail);
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_timing<W: Write>(out: W, results: &[CaseResult]) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["row", "experiment", "wall_time_s", "old_wall_time_s"])?;
    for r in results {
        w.write_record([
            r.case.row.to_string(),
            r.case.experiment.to_string(),
            format!("{:.3}", r.report.wall_time),
            r.old_wall_time.map(|t| format!("{t:.3}")).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Run every row, calling `progress` after each, and write
/// `<suite>.csv` and `<suite>_timing.csv` into `out_dir`.
pub fn run_suite<F: FnMut(&CaseResult)>(suite: Suite, seed: u64, out_dir: &Path, mut progress: F) -> CliResult<Vec<CaseResult>> {
    let mut results = Vec::new();
    for case in suite.cases(seed) {
        let r = run_case(&case)?;
        progress(&r);
        results.push(r);
    }
    std::fs::create_dir_all(out_dir)?;
    let table = BufWriter::new(File::create(out_dir.join(format!("{}.csv", suite.name())))?);
    write_table(table, suite, &results)?;
    let timing = BufWriter::new(File::create(out_dir.join(format!("{}_timing.csv", suite.name())))?);
    write_timing(timing, &results)?;
    Ok(results)
}

/// Human-readable progress line for a finished row.
pub fn progress_line(r: &CaseResult) -> String {
    let s = &r.case.spec;
    let old = r.old_residual.map(|x| format!(" r_min_old={x:.6}")).unwrap_or_default();
    format!(
        "{:>3} {:<4} {:<12} k={} alpha=({},{}){} r_min={:.6e} n_iter={} converged={} time={:.1}s",
        r.case.row,
        r.case.experiment,
        s.obstacle.obstacle().map(|o| o.tag()).unwrap_or("?"),
        s.problem.k,
        s.problem.alpha[0],
        s.problem.alpha[1],
        old,
        r.report.final_residual,
        r.report.iterations,
        r.report.converged,
        r.report.wall_time
    )
}
