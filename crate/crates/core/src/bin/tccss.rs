use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use tccss::io::{
    export_grid, load_config, run_figure, run_scatter, run_verify, FigureId, IoError, LambdaRange, VerifyReport,
};

const EXIT_VERIFY: u8 = 1;
const EXIT_USAGE: u8 = 2;

/// Multi-soliton fields of the three-component coupled Sasa-Satsuma equation.
///
/// TCCSS_THREADS caps the worker pool (0 = one per core).
#[derive(Debug, Parser)]
#[command(name = "tccss", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample the configured spectrum on its grid and write CSV or JSON.
    Generate {
        #[arg(long)]
        config: PathBuf,
        /// Output file; defaults to the config's output.path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the configured checks; exit 1 if any exceeds its threshold.
    Verify {
        #[arg(long)]
        config: PathBuf,
        /// Also write the full report as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Reproduce one of the four embedded figure parameter sets.
    Figure {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
        id: u8,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Sweep real lambda and write |Omega_77|, max |Omega_k7| and |det - 1|.
    Scatter {
        #[arg(long)]
        config: PathBuf,
        /// a:b:n, n points from a to b inclusive.
        #[arg(long, allow_hyphen_values = true)]
        lambda_re: String,
        #[arg(long)]
        out: PathBuf,
    },
}

enum Failure {
    Usage(String),
    Verify(String),
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn threads_from_env() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("TCCSS_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| Failure::Usage(format!("TCCSS_THREADS must be a non-negative integer, got `{raw}`")))?;
    tccss::set_threads(n).map_err(Failure::Usage)
}

fn print_summary(report: &VerifyReport) {
    for o in &report.outcomes {
        println!(
            "{} {:<22} max_abs={:.3e} rms={:.3e} threshold={:.0e} grid={}",
            if o.passed { "PASS" } else { "FAIL" },
            o.check,
            o.report.max_abs,
            o.report.rms,
            o.threshold,
            o.report.grid
        );
        for n in &o.report.notes {
            println!("     {n}");
        }
    }
    println!("{}", if report.passed { "verification passed" } else { "verification FAILED" });
}

fn write_json(path: &Path, report: &VerifyReport) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(report).map_err(|e| Failure::Usage(e.to_string()))?;
    std::fs::write(path, text + "\n")
        .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<(), Failure> {
    threads_from_env()?;
    match cli.command {
        Command::Generate { config, out } => {
            let cfg = load_config(&config)?;
            let path = out
                .or_else(|| cfg.output().map(|o| o.path.clone()))
                .ok_or_else(|| Failure::Usage("no --out given and the config has no output.path".into()))?;
            let fg = export_grid(&cfg, &path)?;
            eprintln!("wrote {} samples to {}", fg.samples().len(), path.display());
        }
        Command::Verify { config, json } => {
            let cfg = load_config(&config)?;
            let report = run_verify(&cfg).map_err(|e| Failure::Verify(e.to_string()))?;
            print_summary(&report);
            if let Some(path) = json {
                write_json(&path, &report)?;
            }
            if !report.passed {
                return Err(Failure::Verify("one or more checks exceeded their threshold".into()));
            }
        }
        Command::Figure { id, out_dir } => {
            let out = run_figure(FigureId::new(id)?, &out_dir)?;
            let s = &out.sidecar;
            println!("figure {}: {}", s.figure, s.caption);
            println!("pde max_abs={:.3e} on {}", s.pde.max_abs, s.pde.grid);
            for (k, v) in &s.derived {
                println!("{k} = {v:.17e}");
            }
            println!("wrote {} and {}", out.csv_path.display(), out.sidecar_path.display());
        }
        Command::Scatter { config, lambda_re, out } => {
            let cfg = load_config(&config)?;
            let range: LambdaRange = lambda_re.parse()?;
            let rows = run_scatter(&cfg, range, &out)?;
            eprintln!("wrote {} rows to {}", rows.len(), out.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            // a closed stdout on --help is not worth a panic
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Verify(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_VERIFY)
        }
    }
}
