use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mrc_cli::config::ExperimentSpec;
use mrc_cli::error::{CliError, CliResult, EXIT_UNCONVERGED};
use mrc_cli::files;
use mrc_cli::run::{grid_points, run};
use mrc_cli::suite::{progress_line, run_suite, Suite};
use mrc_core::field::{farfield, scattered_field};

#[derive(Parser)]
#[command(name = "mrc", version, about = "Random multi-point MRC solver for soft-obstacle scattering")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one experiment described by a TOML file.
    Run { config: PathBuf },
    /// Run a benchmark table.
    Suite {
        /// table1 or table2
        name: Suite,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Evaluate the scattered field of a coefficient file on a grid.
    Field {
        coefficients: PathBuf,
        /// x0,x1,y0,y1[,z0,z1]
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        grid: Vec<f64>,
        #[arg(long)]
        res: usize,
        /// Defaults to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate the far-field amplitude of a coefficient file.
    Farfield {
        coefficients: PathBuf,
        #[arg(long)]
        ndir: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn output(path: Option<&Path>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn load_expansion(path: &Path) -> CliResult<mrc_core::mrc::Expansion> {
    let file = File::open(path)?;
    Ok(files::read_coefficients(BufReader::new(file))?.0)
}

fn execute(cli: Cli) -> CliResult<i32> {
    match cli.command {
        Command::Run { config } => {
            let spec = ExperimentSpec::load(&config)?;
            let outcome = run(&spec)?;
            println!("{}", outcome.summary);
            Ok(if outcome.report.converged { 0 } else { EXIT_UNCONVERGED })
        }
        Command::Suite { name, seed, out } => {
            let results = run_suite(name, seed, &out, |r| println!("{}", progress_line(r)))?;
            let failed = results.iter().filter(|r| !r.report.converged).count();
            println!("{}: {} rows, {} unconverged", name.name(), results.len(), failed);
            Ok(if failed == 0 { 0 } else { EXIT_UNCONVERGED })
        }
        Command::Field { coefficients, grid, res, out } => {
            let exp = load_expansion(&coefficients)?;
            let dim = exp.problem.dim;
            let pts = grid_points(dim, &grid, res)?;
            let vals = pts
                .iter()
                .map(|p| scattered_field(&exp, p))
                .collect::<Result<Vec<_>, _>>()?;
            files::write_field_grid(output(out.as_deref())?, dim, &pts, &vals)?;
            Ok(0)
        }
        Command::Farfield { coefficients, ndir, out } => {
            if ndir == 0 {
                return Err(CliError::config("--ndir must be positive"));
            }
            let exp = load_expansion(&coefficients)?;
            let dim = exp.problem.dim;
            let ff = farfield(&exp, &files::farfield_directions(dim, ndir))?;
            files::write_farfield(output(out.as_deref())?, dim, &ff)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("mrc: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
