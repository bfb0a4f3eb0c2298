use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use torext::cli_io::{self, CliOptions};

/// Exact toric toolkit: difference components, graded cohomology of
/// difference bundles, universal extension sequences, Klyachko filtration
/// data, and SVG figures — all from lattice-polyhedron input.
#[derive(Parser)]
#[command(name = "torext", version)]
struct Cli {
    /// One of: components, cohomology, ext, klyachko, verify, plot.
    command: String,
    /// Input JSON document with named lattices, polyhedra, fans, and jobs.
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    /// Restrict a cohomology query to one degree, e.g. "0,-1".
    #[arg(long, value_name = "DEGREE")]
    degree: Option<String>,
    /// Write the JSON result here instead of stdout.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Write the SVG figure here (plot command).
    #[arg(long, value_name = "FILE")]
    svg: Option<PathBuf>,
    /// Cross-check cohomology tables against the affine-cover complex.
    #[arg(long)]
    verify_oracle: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprint!("{}", cli_io::error_json(&e));
            ExitCode::from(u8::try_from(e.exit_code()).unwrap_or(2))
        }
    }
}

fn run(cli: &Cli) -> torext::Result<()> {
    let text = fs::read_to_string(&cli.input)?;
    let options = CliOptions { degree: cli.degree.clone(), verify_oracle: cli.verify_oracle };
    let output = cli_io::execute(&cli.command, &text, &options)?;
    if let Some(svg) = &output.svg {
        match &cli.svg {
            Some(path) => fs::write(path, svg)?,
            // Without --svg the figure itself is the result.
            None => {
                print!("{svg}");
                return Ok(());
            }
        }
    }
    match &cli.out {
        Some(path) => fs::write(path, &output.json)?,
        None => print!("{}", output.json),
    }
    Ok(())
}
