//! Reducibility scan of L_n1(z1) ⊗ L_n2(z1 − δ) along a line of δ values.

use clap::Args;
use serde::Serialize;

use super::parse_complex;
use crate::elliptic_core::{EllipticParams, C64};
use crate::error::{EqgError, Result};
use crate::morphisms::{scan_reducibility, ScanPoint};

#[derive(Debug, Clone, Args)]
pub struct ScanArgs {
    #[arg(long, default_value_t = 2)]
    pub l1: usize,
    #[arg(long, default_value_t = 2)]
    pub l2: usize,
    #[arg(long, default_value = "0.13+0.02i", allow_hyphen_values = true)]
    pub z1: String,
    /// Start of the δ = z1 − z2 line.
    #[arg(long, default_value = "-1.2+0.03i", allow_hyphen_values = true)]
    pub from: String,
    #[arg(long, default_value = "1.2+0.03i", allow_hyphen_values = true)]
    pub to: String,
    #[arg(long, default_value_t = 9)]
    pub steps: usize,
    /// Extra δ values to test.
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Vec<String>,
    /// Also test every predicted resonance ±((n1+n2−2j+2)η + m) with |m| ≤ 1.
    #[arg(long)]
    pub include_lattice: bool,
    /// Relative singular value below which a detector fires.
    #[arg(long, default_value_t = 1e-6)]
    pub detect_tol: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanReport {
    pub schema: u32,
    pub n1: usize,
    pub n2: usize,
    pub z1: C64,
    pub params: EllipticParams,
    pub points: Vec<ScanPoint>,
    pub detections: usize,
    pub all_consistent: bool,
}

pub fn run_scan(args: &ScanArgs, p: &EllipticParams) -> Result<ScanReport> {
    if args.l1 == 0 || args.l2 == 0 {
        return Err(EqgError::Config("l1 and l2 must be positive".into()));
    }
    let z1 = parse_complex(&args.z1)?;
    let (a, b) = (parse_complex(&args.from)?, parse_complex(&args.to)?);
    let mut deltas: Vec<C64> = match args.steps {
        0 => Vec::new(),
        1 => vec![a],
        n => (0..n).map(|k| a + (b - a) * (k as f64 / (n - 1) as f64)).collect(),
    };
    for d in &args.delta {
        deltas.push(parse_complex(d)?);
    }
    if args.include_lattice {
        for j in 1..=args.l1.min(args.l2) {
            let shift = ((args.l1 + args.l2) as f64 - 2.0 * j as f64 + 2.0) * p.eta;
            for m in -1..=1 {
                deltas.push(shift + m as f64);
                deltas.push(-shift + m as f64);
            }
        }
    }
    if deltas.is_empty() {
        return Err(EqgError::Config("no scan points".into()));
    }
    let points = scan_reducibility(args.l1, args.l2, z1, &deltas, args.detect_tol, p);
    let detections = points.iter().filter(|x| !x.detected.is_empty()).count();
    let all_consistent = points.iter().all(|x| x.consistent);
    Ok(ScanReport { schema: 1, n1: args.l1, n2: args.l2, z1, params: *p, points, detections, all_consistent })
}
