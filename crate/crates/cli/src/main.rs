use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use rcar_harness::{emit, report, run, Format, RunConfig};

/// Run identity checks of the reducible CAR representation.
#[derive(Parser, Debug)]
#[command(name = "rcar", version)]
struct Cli {
    /// JSON run configuration; defaults apply to missing fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma-separated suites (car, spinor, modes, oscillator, large_n, symmetries).
    #[arg(long, value_delimiter = ',')]
    suite: Option<Vec<String>>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut config = match &cli.config {
        Some(path) => match RunConfig::load(path) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("rcar: {e}");
                return ExitCode::from(2);
            }
        },
        None => RunConfig::default(),
    };
    if let Some(suites) = cli.suite {
        config.suites = suites.into_iter().map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
    }
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if cli.out.is_some() {
        config.output = cli.out.clone();
    }

    let report = match run(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("rcar: {e}");
            return ExitCode::from(2);
        }
    };
    for w in &report.warnings {
        eprintln!("rcar: warning: {w}");
    }
    let text = emit(&report, cli.format);
    match &config.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("rcar: {}: {e}", path.display());
                return ExitCode::from(2);
            }
            eprint!("{}", report::to_text(&report));
        }
        None => print!("{text}"),
    }
    if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
