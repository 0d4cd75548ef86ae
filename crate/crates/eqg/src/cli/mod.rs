//! Batch verification: configuration, suites, JSON reports, tables and scans.

mod args;
mod roster;
mod scan;
mod suites;
mod table;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::elliptic_core::{EllipticParams, SamplePlan, C64};
use crate::error::{EqgError, Result};
use crate::morphisms::ShiftConstants;

pub use args::{run, Cli, Command};
pub use roster::{default_roster, ModuleSpec};
pub use scan::{run_scan, ScanArgs, ScanReport};
pub use suites::run_suite;
pub use table::{run_table, TableKind};

/// Exit status: every suite passed.
pub const EXIT_PASS: i32 = 0;
/// Exit status: some suite failed.
pub const EXIT_FAIL: i32 = 1;
/// Exit status: the configuration could not be used.
pub const EXIT_CONFIG: i32 = 2;

/// Minimum fraction of trusted columns for a residual to count.
pub const MIN_COVERAGE: f64 = 0.8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteName {
    Theta,
    Rmatrix,
    Rll,
    Degenerate,
    Determinant,
    Transfer,
    Fusion,
    Singular,
    Iso,
    Rvee,
    YbeModules,
    Dual,
    Weyl,
    SpecialEta,
    Universal,
    Modular,
}

impl SuiteName {
    pub const ALL: [SuiteName; 16] = [
        SuiteName::Theta,
        SuiteName::Rmatrix,
        SuiteName::Rll,
        SuiteName::Degenerate,
        SuiteName::Determinant,
        SuiteName::Transfer,
        SuiteName::Fusion,
        SuiteName::Singular,
        SuiteName::Iso,
        SuiteName::Rvee,
        SuiteName::YbeModules,
        SuiteName::Dual,
        SuiteName::Weyl,
        SuiteName::SpecialEta,
        SuiteName::Universal,
        SuiteName::Modular,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SuiteName::Theta => "theta",
            SuiteName::Rmatrix => "rmatrix",
            SuiteName::Rll => "rll",
            SuiteName::Degenerate => "degenerate",
            SuiteName::Determinant => "determinant",
            SuiteName::Transfer => "transfer",
            SuiteName::Fusion => "fusion",
            SuiteName::Singular => "singular",
            SuiteName::Iso => "iso",
            SuiteName::Rvee => "rvee",
            SuiteName::YbeModules => "ybe-modules",
            SuiteName::Dual => "dual",
            SuiteName::Weyl => "weyl",
            SuiteName::SpecialEta => "special-eta",
            SuiteName::Universal => "universal",
            SuiteName::Modular => "modular",
        }
    }

    /// Suites that act on the module roster.
    pub fn uses_roster(self) -> bool {
        matches!(self, SuiteName::Rll | SuiteName::Degenerate | SuiteName::Determinant)
    }

    /// Stable per-suite offset so each suite draws its own sample stream.
    fn seed_offset(self) -> u64 {
        SuiteName::ALL.iter().position(|s| *s == self).expect("listed") as u64
    }
}

impl fmt::Display for SuiteName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SuiteName {
    type Err = EqgError;
    fn from_str(s: &str) -> Result<Self> {
        SuiteName::ALL
            .iter()
            .copied()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| EqgError::Config(format!("unknown suite '{s}'")))
    }
}

/// Everything a verification run depends on; echoed into the report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    pub params: EllipticParams,
    pub plan: SamplePlan,
    pub suites: Vec<SuiteName>,
    pub roster: Vec<ModuleSpec>,
    /// Constants for the ℓτ shift isomorphism in the `iso` suite.
    pub shift_constants: ShiftConstants,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            params: EllipticParams::default(),
            plan: SamplePlan::default(),
            suites: SuiteName::ALL.to_vec(),
            roster: default_roster(),
            shift_constants: ShiftConstants::default(),
        }
    }
}

impl SuiteConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| EqgError::Config(e.to_string()))
    }

    /// Checks parameter ranges and that roster suites have modules to act on.
    pub fn validate(&self) -> Result<()> {
        self.params.validated().map_err(|e| EqgError::Config(e.to_string()))?;
        if self.plan.count == 0 {
            return Err(EqgError::Config("samples must be positive".into()));
        }
        if self.suites.is_empty() {
            return Err(EqgError::Config("no suites selected".into()));
        }
        if self.roster.is_empty() && self.suites.iter().any(|s| s.uses_roster()) {
            return Err(EqgError::Config("module roster is empty".into()));
        }
        for spec in &self.roster {
            spec.build(&self.params).map_err(|e| EqgError::Config(format!("roster entry {spec:?}: {e}")))?;
        }
        Ok(())
    }
}

/// How a record's residual is judged.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expect {
    /// An identity: residual must stay below the bound.
    Below(f64),
    /// A negative control: residual must exceed the bound.
    Above(f64),
    /// Reported for information; does not affect the verdict.
    Info,
}

impl Expect {
    fn holds(self, residual: f64) -> bool {
        match self {
            Expect::Below(t) => residual < t,
            Expect::Above(t) => residual > t,
            Expect::Info => true,
        }
    }
}

/// One residual evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub id: String,
    pub inputs: Vec<C64>,
    pub residual: f64,
    /// Fraction of basis columns on which the residual was measured.
    pub coverage: f64,
    pub expect: Expect,
    pub pass: bool,
}

impl Record {
    pub fn new(id: impl Into<String>, inputs: &[C64], residual: f64, coverage: f64, expect: Expect) -> Self {
        let counted = !matches!(expect, Expect::Info);
        let pass = expect.holds(residual) && (!counted || coverage >= MIN_COVERAGE);
        Self { id: id.into(), inputs: inputs.to_vec(), residual, coverage, expect, pass }
    }

    pub fn below(id: impl Into<String>, inputs: &[C64], residual: f64, bound: f64) -> Self {
        Self::new(id, inputs, residual, 1.0, Expect::Below(bound))
    }

    /// A library error counts as a failed record.
    pub fn error(id: impl Into<String>, inputs: &[C64], err: &EqgError) -> Self {
        let mut r = Self::new(format!("{} [error: {err}]", id.into()), inputs, f64::INFINITY, 0.0, Expect::Below(0.0));
        r.pass = false;
        r
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub name: SuiteName,
    pub seed: u64,
    pub records: Vec<Record>,
    /// Largest residual among identity records.
    pub max_residual: f64,
    pub min_coverage: f64,
    pub pass: bool,
    /// Arbitration outcomes and other remarks.
    pub notes: Vec<String>,
}

impl SuiteReport {
    pub fn assemble(name: SuiteName, seed: u64, records: Vec<Record>, notes: Vec<String>) -> Self {
        let identities = records.iter().filter(|r| matches!(r.expect, Expect::Below(_)));
        let max_residual = identities.clone().map(|r| r.residual).fold(0.0, f64::max);
        let min_coverage = identities.map(|r| r.coverage).fold(1.0, f64::min);
        let pass = !records.is_empty() && records.iter().all(|r| r.pass);
        Self { name, seed, records, max_residual, min_coverage, pass, notes }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| !r.pass)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub crate_version: String,
    pub threads: usize,
    pub target: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub config: SuiteConfig,
    pub suites: Vec<SuiteReport>,
    pub all_pass: bool,
    pub environment: Environment,
    pub wall_time_s: f64,
}

impl VerificationReport {
    pub fn exit_code(&self) -> i32 {
        if self.all_pass {
            EXIT_PASS
        } else {
            EXIT_FAIL
        }
    }

    /// One line per suite.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        for r in &self.suites {
            s.push_str(&format!(
                "{:<12} {}  max residual {:.2e}  coverage {:.2}  records {}\n",
                r.name.as_str(),
                if r.pass { "PASS" } else { "FAIL" },
                r.max_residual,
                r.min_coverage,
                r.records.len()
            ));
            for n in &r.notes {
                s.push_str(&format!("             note: {n}\n"));
            }
            for f in r.failures().take(5) {
                s.push_str(&format!("             failed: {} residual {:.3e}\n", f.id, f.residual));
            }
        }
        s.push_str(&format!("overall: {}  ({:.1} s)\n", if self.all_pass { "PASS" } else { "FAIL" }, self.wall_time_s));
        s
    }
}

/// Thread cap from EQG_THREADS, if set.
pub fn thread_cap() -> Result<Option<usize>> {
    match std::env::var("EQG_THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(EqgError::Config(format!("EQG_THREADS must be a positive integer, got '{v}'"))),
        },
        Err(_) => Ok(None),
    }
}

/// Runs every configured suite; suites run in parallel on a pool capped by EQG_THREADS.
pub fn run_verify(config: &SuiteConfig) -> Result<VerificationReport> {
    config.validate()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_cap()? {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| EqgError::Config(e.to_string()))?;
    let start = Instant::now();
    let suites: Vec<SuiteReport> = pool.install(|| config.suites.par_iter().map(|&s| run_suite(s, config)).collect());
    let all_pass = suites.iter().all(|s| s.pass);
    Ok(VerificationReport {
        schema: 1,
        config: config.clone(),
        suites,
        all_pass,
        environment: Environment {
            crate_version: env!("CARGO_PKG_VERSION").into(),
            threads: pool.current_num_threads(),
            target: format!("{}-{}", std::env::consts::ARCH, std::env::consts::OS),
        },
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}

/// Parses "0.3+1.1i", "-2i", "0.23", "1e-3-2.5e-1i" and the like.
pub fn parse_complex(s: &str) -> Result<C64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || EqgError::Config(format!("cannot parse complex number '{s}'"));
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i').or_else(|| t.strip_suffix('j')) else {
        return t.parse::<f64>().map(|re| C64::new(re, 0.0)).map_err(|_| bad());
    };
    // Split at the last sign that is not part of an exponent or the leading sign.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let imag = |x: &str| -> Result<f64> {
        match x {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => x.parse::<f64>().map_err(|_| bad()),
        }
    };
    match split {
        Some(k) => {
            let re = body[..k].parse::<f64>().map_err(|_| bad())?;
            Ok(C64::new(re, imag(&body[k..])?))
        }
        None => Ok(C64::new(0.0, imag(body)?)),
    }
}

/// A real number with 12 significant digits.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    if (-5..12).contains(&mag) {
        let decimals = (11 - mag).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.11e}")
    }
}

/// "re+imi" with 12 significant digits per part.
pub fn fmt_complex(z: C64) -> String {
    let im = fmt_sig(z.im);
    if im.starts_with('-') {
        format!("{}{}i", fmt_sig(z.re), im)
    } else {
        format!("{}+{}i", fmt_sig(z.re), im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_round_trip() {
        assert_eq!(parse_complex("0.3+1.1i").unwrap(), C64::new(0.3, 1.1));
        assert_eq!(parse_complex("-2i").unwrap(), C64::new(0.0, -2.0));
        assert_eq!(parse_complex("i").unwrap(), C64::new(0.0, 1.0));
        assert_eq!(parse_complex("0.23").unwrap(), C64::new(0.23, 0.0));
        assert_eq!(parse_complex("1e-3-2.5e-1i").unwrap(), C64::new(1e-3, -0.25));
        assert!(parse_complex("abc").is_err());
        assert_eq!(fmt_complex(C64::new(0.25, -1.0)), "0.250000000000-1.00000000000i");
    }

    #[test]
    fn suite_names_parse() {
        for s in SuiteName::ALL {
            assert_eq!(s.as_str().parse::<SuiteName>().unwrap(), s);
        }
        assert!("nope".parse::<SuiteName>().is_err());
    }
}
