use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use pseudohyp_cli::{
    centralizer_table, conjugation_table, resolve_seed, run_suite, sample_csv, SampleObject,
    TolOverrides,
};

#[derive(Parser)]
#[command(name = "pseudohyp", about = "verification, sampling and table tool")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    All,
    Fuchsian,
    Hitchin,
    Orbifold,
    Forms,
    Metric,
}

impl SuiteArg {
    fn as_str(self) -> &'static str {
        match self {
            SuiteArg::All => "all",
            SuiteArg::Fuchsian => "fuchsian",
            SuiteArg::Hitchin => "hitchin",
            SuiteArg::Orbifold => "orbifold",
            SuiteArg::Forms => "forms",
            SuiteArg::Metric => "metric",
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a verification suite and emit a JSON report.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteArg,
        /// Write the JSON report to this path (stdout summary is always printed).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Per-check tolerance override, `name=value`; repeatable.
        #[arg(long = "tol", value_parser = parse_tol)]
        tol: Vec<(String, f64)>,
    },
    /// Sample an object on a grid and emit CSV.
    #[command(allow_negative_numbers = true)]
    Sample {
        /// One of: f, F, iota_fuchsian, iota_hitchin, g_integrand_block, g_integrand_irr.
        object: String,
        x0: f64,
        x1: f64,
        y0: f64,
        y1: f64,
        nx: usize,
        ny: usize,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print a conjugation sign table or a centralizer enumeration.
    Table {
        /// One of: conjugation-A, conjugation-B, conjugation-C, conjugation-Q, centralizer.
        kind: String,
        /// Centralizer shape: so22xso1, so21xso2, so21xso1so1, so23xso1k.
        #[arg(long, default_value = "so22xso1")]
        shape: String,
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Write the JSON form here (human-readable text goes to stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_tol(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| "expected name=value".to_string())?;
    let v: f64 = value.parse().map_err(|e| format!("bad tolerance value: {e}"))?;
    Ok((name.to_string(), v))
}

fn run() -> Result<ExitCode, String> {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Verify { suite, out, tol } => {
            let tols: TolOverrides = tol.into_iter().collect();
            let seed = resolve_seed();
            let report = run_suite(suite.as_str(), &tols, seed)?;
            for c in &report.checks {
                println!(
                    "[{}] {} residual {:.3e} (tol {:.1e})",
                    c.status, c.name, c.max_residual, c.tolerance
                );
            }
            let json = serde_json::to_string_pretty(&report)
                .map_err(|e| format!("serialization failed: {e}"))?;
            if let Some(path) = &out {
                std::fs::write(path, &json).map_err(|e| format!("write failed: {e}"))?;
            }
            Ok(if report.failed() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            })
        }
        Cmd::Sample { object, x0, x1, y0, y1, nx, ny, out } => {
            let obj = SampleObject::parse(&object)
                .ok_or_else(|| format!("unknown sample object: {object}"))?;
            let csv = sample_csv(obj, (x0, x1, y0, y1), nx, ny)?;
            match &out {
                Some(path) => {
                    std::fs::write(path, &csv).map_err(|e| format!("write failed: {e}"))?
                }
                None => print!("{csv}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Table { kind, shape, n, out } => {
            let (text, json) = if kind == "centralizer" {
                let (text, data) = centralizer_table(&shape, n)?;
                (
                    text,
                    serde_json::to_string_pretty(&data)
                        .map_err(|e| format!("serialization failed: {e}"))?,
                )
            } else {
                let (text, data) = conjugation_table(&kind, n)?;
                (
                    text,
                    serde_json::to_string_pretty(&data)
                        .map_err(|e| format!("serialization failed: {e}"))?,
                )
            };
            print!("{text}");
            if let Some(path) = &out {
                std::fs::write(path, &json).map_err(|e| format!("write failed: {e}"))?;
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
