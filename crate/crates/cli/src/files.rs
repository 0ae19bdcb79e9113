//! Coefficient, field-grid and far-field files.
//!
//! All are CSV with a header row, optionally preceded by `#` comment lines.
//! Coefficient files carry the problem in `# key = value` comments:
//!
//! ```text
//! # format = mrc-coefficients 1
//! # dimension = 2
//! # k = 1
//! # alpha = 1,0
//! # order = 5
//! # batch_size = 1
//! # iterations = 4210
//! # ordering = source-major/l-ascending/m-ascending
//! iteration,source,l,x,y,re,im
//! 1,0,-5,0.31,-0.2,...
//! ```
//!
//! Spatial files add the columns `m` and `z`. Numbers carry 17 significant
//! digits.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use mrc_core::basis::{self, COLUMN_ORDERING};
use mrc_core::field::FarField;
use mrc_core::mrc::{Expansion, ScatterProblem, SourceBlock};
use mrc_core::point::{Dimension, Point};
use num_complex::Complex64;

use crate::error::{CliError, CliResult};

const FORMAT_TAG: &str = "mrc-coefficients 1";

/// Full-precision number formatting shared by every output file.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_coefficients<W: Write>(out: W, exp: &Expansion, batch_size: usize) -> CliResult<()> {
    let mut out = out;
    let p = &exp.problem;
    let d = p.dim.count();
    writeln!(out, "# format = {FORMAT_TAG}")?;
    writeln!(out, "# dimension = {d}")?;
    writeln!(out, "# k = {}", p.k)?;
    let alpha: Vec<String> = p.alpha.0[..d].iter().map(|c| format!("{c}")).collect();
    writeln!(out, "# alpha = {}", alpha.join(","))?;
    writeln!(out, "# order = {}", exp.order)?;
    writeln!(out, "# batch_size = {batch_size}")?;
    writeln!(out, "# iterations = {}", exp.iterations())?;
    writeln!(out, "# ordering = {COLUMN_ORDERING}")?;
    let mut w = csv::Writer::from_writer(out);
    match p.dim {
        Dimension::Two => w.write_record(["iteration", "source", "l", "x", "y", "re", "im"])?,
        Dimension::Three => w.write_record(["iteration", "source", "l", "m", "x", "y", "z", "re", "im"])?,
    }
    for t in exp.terms() {
        let mut rec = vec![t.iteration.to_string(), t.index.source.to_string(), t.index.ell.to_string()];
        if let Some(m) = t.index.m {
            rec.push(m.to_string());
        }
        rec.extend(t.source.0[..d].iter().map(|c| num(*c)));
        rec.push(num(t.coeff.re));
        rec.push(num(t.coeff.im));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Format(msg.into())
}

fn split_header<R: BufRead>(input: R) -> CliResult<(BTreeMap<String, String>, String)> {
    let mut meta = BTreeMap::new();
    let mut body = String::new();
    for line in input.lines() {
        let line = line?;
        if let Some(rest) = line.strip_prefix('#') {
            if let Some((k, v)) = rest.split_once('=') {
                meta.insert(k.trim().to_string(), v.trim().to_string());
            }
        } else {
            body.push_str(&line);
            body.push('\n');
        }
    }
    Ok((meta, body))
}

fn field<T: std::str::FromStr>(meta: &BTreeMap<String, String>, key: &str) -> CliResult<T> {
    let v = meta.get(key).ok_or_else(|| bad(format!("missing header `{key}`")))?;
    v.parse().map_err(|_| bad(format!("header `{key}` has unparseable value `{v}`")))
}

/// Read a coefficient file back into an expansion. Returns the expansion
/// and the batch size recorded in the header.
pub fn read_coefficients<R: BufRead>(input: R) -> CliResult<(Expansion, usize)> {
    let (meta, body) = split_header(input)?;
    if meta.get("format").map(String::as_str) != Some(FORMAT_TAG) {
        return Err(bad(format!("expected `# format = {FORMAT_TAG}`")));
    }
    if meta.get("ordering").map(String::as_str) != Some(COLUMN_ORDERING) {
        return Err(bad(format!("expected `# ordering = {COLUMN_ORDERING}`")));
    }
    let dim = match field::<usize>(&meta, "dimension")? {
        2 => Dimension::Two,
        3 => Dimension::Three,
        n => return Err(bad(format!("dimension must be 2 or 3, got {n}"))),
    };
    let k: f64 = field(&meta, "k")?;
    let order: usize = field(&meta, "order")?;
    let batch_size: usize = field(&meta, "batch_size")?;
    let alpha_text: String = field(&meta, "alpha")?;
    let alpha: Vec<f64> = alpha_text
        .split(',')
        .map(|s| s.trim().parse().map_err(|_| bad(format!("bad alpha component `{s}`"))))
        .collect::<CliResult<_>>()?;
    if alpha.len() != dim.count() {
        return Err(bad("alpha has the wrong number of components"));
    }
    let problem =
        ScatterProblem::new(dim, k, Point::from_slice(&alpha).expect("checked length")).map_err(|e| bad(e.to_string()))?;
    let mut exp = Expansion::empty(problem, order);
    let per = exp.per_source();
    let d = dim.count();
    let width = 3 + usize::from(dim == Dimension::Three) + d + 2;

    let mut reader = csv::Reader::from_reader(body.as_bytes());
    let mut pending: Option<SourceBlock> = None;
    for (row, rec) in reader.records().enumerate() {
        let rec = rec?;
        if rec.len() != width {
            return Err(bad(format!("row {row}: expected {width} fields, got {}", rec.len())));
        }
        let get = |i: usize| rec.get(i).expect("width checked");
        let int = |i: usize| get(i).parse::<i64>().map_err(|_| bad(format!("row {row}: bad integer `{}`", get(i))));
        let real = |i: usize| get(i).parse::<f64>().map_err(|_| bad(format!("row {row}: bad number `{}`", get(i))));
        let iteration = int(0)? as usize;
        let slot = int(1)? as usize;
        let ell = int(2)? as i32;
        let (m, first) = match dim {
            Dimension::Two => (None, 3),
            Dimension::Three => (Some(int(3)? as i32), 4),
        };
        let mut coords = [0.0; 3];
        for (i, c) in coords.iter_mut().take(d).enumerate() {
            *c = real(first + i)?;
        }
        let coeff = Complex64::new(real(first + d)?, real(first + d + 1)?);

        let block = match pending.take() {
            Some(b) if b.coeffs.len() < per => b,
            done => {
                if let Some(b) = done {
                    exp.blocks.push(b);
                }
                SourceBlock {
                    iteration,
                    slot,
                    source: Point(coords),
                    coeffs: Vec::with_capacity(per),
                }
            }
        };
        let local = block.coeffs.len();
        if basis::local_slot(dim, order, ell, m) != Some(local)
            || block.iteration != iteration
            || block.slot != slot
            || block.source != Point(coords)
        {
            return Err(bad(format!("row {row}: out of order for the declared column ordering")));
        }
        let mut block = block;
        block.coeffs.push(coeff);
        pending = Some(block);
    }
    if let Some(b) = pending {
        if b.coeffs.len() != per {
            return Err(bad("last source block is incomplete"));
        }
        exp.blocks.push(b);
    }
    Ok((exp, batch_size))
}

/// Field values on grid points.
pub fn write_field_grid<W: Write>(out: W, dim: Dimension, points: &[Point], values: &[Complex64]) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(out);
    match dim {
        Dimension::Two => w.write_record(["x", "y", "re_v", "im_v"])?,
        Dimension::Three => w.write_record(["x", "y", "z", "re_v", "im_v"])?,
    }
    for (p, v) in points.iter().zip(values) {
        let mut rec: Vec<String> = p.0[..dim.count()].iter().map(|c| num(*c)).collect();
        rec.push(num(v.re));
        rec.push(num(v.im));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Far-field amplitudes by angle: `theta` in the plane, `theta, phi` (phi
/// polar) in space.
pub fn write_farfield<W: Write>(out: W, dim: Dimension, ff: &FarField) -> CliResult<()> {
    let mut out = out;
    match dim {
        Dimension::Two => writeln!(out, "# normalization: v ~ A exp(ikr) / sqrt(r)")?,
        Dimension::Three => writeln!(out, "# normalization: v ~ A exp(ikr) / r")?,
    }
    let mut w = csv::Writer::from_writer(out);
    match dim {
        Dimension::Two => w.write_record(["theta", "re_a", "im_a"])?,
        Dimension::Three => w.write_record(["theta", "phi", "re_a", "im_a"])?,
    }
    for (d, a) in ff.directions.iter().zip(&ff.amplitudes) {
        let theta = d.y().atan2(d.x()).rem_euclid(std::f64::consts::TAU);
        let mut rec = vec![num(theta)];
        if dim == Dimension::Three {
            rec.push(num(d.z().clamp(-1.0, 1.0).acos()));
        }
        rec.push(num(a.re));
        rec.push(num(a.im));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_history<W: Write>(out: W, history: &[f64]) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["iteration", "r_min"])?;
    for (i, r) in history.iter().enumerate() {
        w.write_record([(i + 1).to_string(), num(*r)])?;
    }
    w.flush()?;
    Ok(())
}

/// `n` far-field directions: equally spaced angles in the plane, a
/// Fibonacci set in space.
pub fn farfield_directions(dim: Dimension, n: usize) -> Vec<Point> {
    match dim {
        Dimension::Two => (0..n)
            .map(|i| {
                let t = std::f64::consts::TAU * i as f64 / n as f64;
                Point::xy(t.cos(), t.sin())
            })
            .collect(),
        Dimension::Three => mrc_core::point::fibonacci_directions(n),
    }
}
