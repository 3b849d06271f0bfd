use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use nimopa_cli::{run, CliError, Command, Format, Options, RunConfig};

#[derive(Parser)]
#[command(
    name = "nimopa",
    version,
    about = "Laser-controlled loss compensation in doped negative-index slabs"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// JSON run configuration; omitted keys take the published defaults
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    /// Worker threads for sweeps (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[arg(long, global = true, value_enum, default_value = "csv")]
    format: FormatArg,
}

#[derive(Subcommand, Clone, Copy)]
enum Cmd {
    /// Driven optical constants against signal detuning
    Response,
    /// Signal transmittance against optical thickness
    Slab,
    /// Signal transmittance against one control strength
    ScanG,
    /// Zeros of the phase mismatch in signal detuning
    DkZeros,
    /// Dopant density to slab thickness estimate
    Estimate,
    /// Quick checks against analytic limits
    Selftest,
}

#[derive(ValueEnum, Clone, Copy)]
enum FormatArg {
    #[value(name = "csv")]
    Csv,
    #[value(name = "csv+svg")]
    CsvSvg,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match go(&cli) {
        Ok(lines) => {
            for l in lines {
                println!("{l}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("nimopa: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn go(cli: &Cli) -> Result<Vec<String>, CliError> {
    let cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let command = match cli.command {
        Cmd::Response => Command::Response,
        Cmd::Slab => Command::Slab,
        Cmd::ScanG => Command::ScanG,
        Cmd::DkZeros => Command::DkZeros,
        Cmd::Estimate => Command::Estimate,
        Cmd::Selftest => Command::Selftest,
    };
    let opts = Options {
        format: match cli.format {
            FormatArg::Csv => Format::Csv,
            FormatArg::CsvSvg => Format::CsvSvg,
        },
        threads: cli.threads,
    };
    if opts.threads == Some(0) {
        return Err(CliError::Config("--threads must be at least 1".into()));
    }
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = opts.threads {
        pool = pool.num_threads(n);
    }
    let pool = pool.build().map_err(|e| CliError::Config(e.to_string()))?;
    let report = pool.install(|| run(command, &cfg, &opts, &cli.out))?;
    let mut lines = report.summary;
    lines.push(format!(
        "wrote {} files to {}",
        report.artifacts.files.len(),
        cli.out.display()
    ));
    Ok(lines)
}
