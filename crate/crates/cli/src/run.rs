use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use mrc_core::field::{farfield, scattered_field};
use mrc_core::mrc::{solve, Expansion, SolveReport};
use mrc_core::point::{Dimension, Point};

use crate::config::{grid_axes, ExperimentSpec, Validated};
use crate::error::CliResult;
use crate::files::{self, farfield_directions};

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub expansion: Expansion,
    pub report: SolveReport,
    pub summary: String,
}

/// One-line result in the layout of the suite tables.
pub fn summary_line(v: &Validated, report: &SolveReport) -> String {
    let a = v.problem.alpha;
    let alpha = match v.problem.dim {
        Dimension::Two => format!("({},{})", a.x(), a.y()),
        Dimension::Three => format!("({:.6},{:.6},{:.6})", a.x(), a.y(), a.z()),
    };
    format!(
        "obstacle={} k={} alpha={} r_min={:.6e} n_iter={} converged={} time={:.2}s",
        v.surface.obstacle().tag(),
        v.problem.k,
        alpha,
        report.final_residual,
        report.iterations,
        report.converged,
        report.wall_time
    )
}

fn create(dir: &Path, name: &str) -> CliResult<BufWriter<File>> {
    std::fs::create_dir_all(dir)?;
    Ok(BufWriter::new(File::create(dir.join(name))?))
}

/// Grid points, row-major with the last axis fastest.
pub fn grid_points(dim: Dimension, bounds: &[f64], resolution: usize) -> CliResult<Vec<Point>> {
    let axes = grid_axes(dim, bounds, resolution)?;
    let mut pts = Vec::new();
    match dim {
        Dimension::Two => {
            for &x in &axes[0] {
                for &y in &axes[1] {
                    pts.push(Point::xy(x, y));
                }
            }
        }
        Dimension::Three => {
            for &x in &axes[0] {
                for &y in &axes[1] {
                    for &z in &axes[2] {
                        pts.push(Point::xyz(x, y, z));
                    }
                }
            }
        }
    }
    Ok(pts)
}

/// Solve the experiment and write every requested artifact into
/// `spec.outputs.dir`.
pub fn run(spec: &ExperimentSpec) -> CliResult<RunOutcome> {
    let v = spec.validate()?;
    let start = Instant::now();
    let (expansion, mut report) = solve(&v.problem, &v.surface, &v.config)?;
    report.wall_time = start.elapsed().as_secs_f64();
    let summary = summary_line(&v, &report);

    let out = &spec.outputs;
    if out.report {
        let mut w = create(&out.dir, "report.txt")?;
        writeln!(w, "{summary}")?;
    }
    if out.coefficients {
        files::write_coefficients(create(&out.dir, "coefficients.csv")?, &expansion, v.config.batch_size)?;
    }
    if out.residual_history {
        files::write_history(create(&out.dir, "residual_history.csv")?, &report.residual_history)?;
    }
    if let Some(g) = &out.field_grid {
        let pts = grid_points(v.problem.dim, &g.bounds, g.resolution)?;
        let vals = pts
            .iter()
            .map(|p| scattered_field(&expansion, p))
            .collect::<Result<Vec<_>, _>>()?;
        files::write_field_grid(create(&out.dir, "field.csv")?, v.problem.dim, &pts, &vals)?;
    }
    if let Some(f) = &out.farfield {
        let ff = farfield(&expansion, &farfield_directions(v.problem.dim, f.directions))?;
        files::write_farfield(create(&out.dir, "farfield.csv")?, v.problem.dim, &ff)?;
    }
    Ok(RunOutcome {
        expansion,
        report,
        summary,
    })
}
