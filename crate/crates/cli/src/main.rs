use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, ValueEnum};
use linfty_cli::{commands, doc, execute, run_job, InputError, Report, Request};

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

/// Exact checks for curved L∞[1] algebras, their transfers and bundles.
///
/// Commands: check-relations, check-morphism, transfer, reduce, split,
/// pipeline, etale, ce, cohomology, quasi-iso, koszul-verify, heq,
/// bigrading; `run` executes a job document and `canon` prints the
/// canonical form of any document.
#[derive(Parser)]
#[command(name = "linfty", version)]
struct Cli {
    command: String,
    /// Structure, bundle, morphism or job document.
    #[arg(long)]
    input: String,
    /// Contraction document for transfer and heq.
    #[arg(long)]
    contraction: Option<String>,
    /// Points document for split, pipeline and etale.
    #[arg(long)]
    points: Option<String>,
    /// Reduction degree k, cohomology depth, or Koszul degree bound.
    #[arg(long)]
    degrees: Option<i32>,
    /// Weight bound for heq and koszul-verify.
    #[arg(long)]
    weights: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Leave the timing field out, for byte-stable output.
    #[arg(long)]
    no_timing: bool,
}

fn emit(cli: &Cli, text: &str) -> Result<(), InputError> {
    match &cli.out {
        Some(p) => fs::write(p, text).map_err(|e| InputError::Io {
            path: p.display().to_string(),
            message: e.to_string(),
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn report(cli: &Cli) -> Result<Report, InputError> {
    let here = Path::new(".");
    if cli.command == "run" {
        return run_job(here, &cli.input);
    }
    let req = Request {
        input: cli.input.clone(),
        contraction: cli.contraction.clone(),
        points: cli.points.clone(),
        degrees: cli.degrees,
        weights: cli.weights,
    };
    execute(&cli.command, &req, here)
}

fn main_inner(cli: &Cli) -> Result<i32, InputError> {
    if cli.command == "canon" {
        let d = commands::load(Path::new("."), &cli.input)?;
        emit(cli, &doc::serialize(&d))?;
        return Ok(0);
    }
    let start = Instant::now();
    let mut r = report(cli)?;
    if !cli.no_timing {
        r.timing_ms = Some(start.elapsed().as_millis() as u64);
    }
    let text = match cli.format {
        Format::Json => r.to_json(),
        Format::Text => r.to_text(),
    };
    emit(cli, &text)?;
    Ok(r.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match main_inner(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
