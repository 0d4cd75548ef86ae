//! Command-line surface of the `eqg` binary.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use super::{
    parse_complex, run_scan, run_table, run_verify, ScanArgs, SuiteConfig, SuiteName, TableKind, EXIT_CONFIG,
    EXIT_FAIL, EXIT_PASS,
};
use crate::elliptic_core::EllipticParams;
use crate::error::{EqgError, Result};

#[derive(Debug, Parser)]
#[command(name = "eqg", version, about = "Numerical checks for the elliptic quantum group E(tau, eta)(sl2)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the verification suites and write a JSON report.
    Verify(VerifyArgs),
    /// Print a CSV table.
    Table {
        #[command(flatten)]
        params: ParamArgs,
        #[command(subcommand)]
        kind: TableKind,
    },
    /// Parameter scans.
    Scan {
        #[command(subcommand)]
        kind: ScanKind,
    },
}

#[derive(Debug, Subcommand)]
pub enum ScanKind {
    /// Where L_n1(z1) ⊗ L_n2(z2) is reducible, against the predicted lattice.
    Reducibility {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        scan: ScanArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Overrides of τ and η, written like "0.3+1.1i".
#[derive(Debug, Clone, Default, Args)]
pub struct ParamArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub tau: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub eta: Option<String>,
    #[arg(long)]
    pub tol: Option<f64>,
}

impl ParamArgs {
    fn apply(&self, mut p: EllipticParams) -> Result<EllipticParams> {
        if let Some(t) = &self.tau {
            p.tau = parse_complex(t)?;
        }
        if let Some(e) = &self.eta {
            p.eta = parse_complex(e)?;
        }
        if let Some(t) = self.tol {
            p.tol = t;
        }
        p.validated().map_err(|e| EqgError::Config(e.to_string()))
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct VerifyArgs {
    /// JSON configuration; fields left out keep their defaults.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Run only these suites (repeatable).
    #[arg(long = "suite")]
    pub suites: Vec<String>,
    /// Where to write the JSON report; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl VerifyArgs {
    /// The configuration file, if any, with command-line overrides applied.
    pub fn config(&self) -> Result<SuiteConfig> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| EqgError::Config(format!("{}: {e}", path.display())))?;
                SuiteConfig::from_json(&text)?
            }
            None => SuiteConfig::default(),
        };
        cfg.params = self.params.apply(cfg.params)?;
        if let Some(n) = self.samples {
            cfg.plan.count = n;
        }
        if let Some(s) = self.seed {
            cfg.plan.seed = s;
        }
        if !self.suites.is_empty() {
            cfg.suites = self.suites.iter().map(|s| s.parse::<SuiteName>()).collect::<Result<_>>()?;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn write_output(out: Option<&PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| EqgError::Config(format!("{}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(|e| EqgError::Config(e.to_string()))
}

/// Executes a parsed command and returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    let outcome = match &cli.command {
        Command::Verify(args) => verify(args),
        Command::Table { params, kind } => params
            .apply(EllipticParams::default())
            .and_then(|p| run_table(kind, &p))
            .map(|csv| {
                print!("{csv}");
                EXIT_PASS
            }),
        Command::Scan { kind: ScanKind::Reducibility { params, scan, out } } => (|| {
            let p = params.apply(EllipticParams::default())?;
            let report = run_scan(scan, &p)?;
            write_output(out.as_ref(), &to_json(&report)?)?;
            eprintln!(
                "{} points, {} with detections, {}",
                report.points.len(),
                report.detections,
                if report.all_consistent { "all consistent with the lattice" } else { "MISMATCH with the lattice" }
            );
            Ok(if report.all_consistent { EXIT_PASS } else { EXIT_FAIL })
        })(),
    };
    outcome.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        match e {
            EqgError::Config(_) | EqgError::InvalidParams(_) => EXIT_CONFIG,
            _ => EXIT_FAIL,
        }
    })
}

fn verify(args: &VerifyArgs) -> Result<i32> {
    let cfg = args.config()?;
    let report = run_verify(&cfg)?;
    eprint!("{}", report.summary());
    write_output(args.out.as_ref(), &to_json(&report)?)?;
    Ok(report.exit_code())
}
