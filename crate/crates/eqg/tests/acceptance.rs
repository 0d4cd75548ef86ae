//! The fifteen acceptance criteria, one PASS/FAIL line each.
//!
//! Runs the default configuration (τ = 0.3+1.1i, η = 0.23, 30 samples, seed 42,
//! tol 1e-8) and judges each criterion from the suite records it covers, plus a
//! few checks against independent oracles computed here.
//!
//! The process exits nonzero when a criterion fails, except for those listed in
//! `BLOCKED`: criteria whose literal statement cannot hold, which still print
//! FAIL. A blocked criterion that starts passing is reported too.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use eqg::cli::{run_suite, run_verify, Record, SuiteConfig, SuiteName, SuiteReport};
use eqg::morphisms::{elliptic_binomial, ShiftConstants};
use eqg::{c, EllipticParams, C64};

/// Criterion 10 asks the ℓτ shift map to intertwine with the displayed j_L, j_R;
/// it does not (residual ≈ 1), while the corrected constants pass.
const BLOCKED: &[usize] = &[10];

/// θ(z,τ) from the Jacobi triple product, an evaluation independent of the series code:
/// θ(z) = 2 q^{1/4} sin(πz) Π (1−q^{2n})(1−2q^{2n}cos(2πz)+q^{4n}) with q = e^{πiτ}.
fn theta_product(z: C64, tau: C64) -> C64 {
    let i = C64::new(0.0, 1.0);
    let q = (i * PI * tau).exp();
    let cos = (2.0 * PI * z).cos();
    let mut prod = C64::new(1.0, 0.0);
    let mut q2n = C64::new(1.0, 0.0);
    for _ in 0..200 {
        q2n *= q * q;
        prod *= (1.0 - q2n) * (1.0 - 2.0 * q2n * cos + q2n * q2n);
        if q2n.norm() < 1e-20 {
            break;
        }
    }
    2.0 * (i * PI * tau / 4.0).exp() * (PI * z).sin() * prod
}

struct Verdict {
    pass: bool,
    detail: String,
}

fn select<'a>(suites: &'a [SuiteReport], name: SuiteName, prefixes: &[&str]) -> Vec<&'a Record> {
    suites
        .iter()
        .filter(|s| s.name == name)
        .flat_map(|s| s.records.iter())
        .filter(|r| prefixes.is_empty() || prefixes.iter().any(|p| r.id.starts_with(p)))
        .collect()
}

/// All selected records must pass; the detail names the worst residual or the failures.
fn judge(records: &[&Record]) -> Verdict {
    if records.is_empty() {
        return Verdict { pass: false, detail: "no records".into() };
    }
    let failed: Vec<&str> = records.iter().filter(|r| !r.pass).map(|r| r.id.as_str()).collect();
    let worst = records
        .iter()
        .filter(|r| matches!(r.expect, eqg::cli::Expect::Below(_)))
        .map(|r| r.residual)
        .fold(0.0, f64::max);
    if failed.is_empty() {
        Verdict { pass: true, detail: format!("{} checks, max residual {worst:.2e}", records.len()) }
    } else {
        Verdict { pass: false, detail: format!("failed: {}", failed.join(", ")) }
    }
}

fn both(a: Verdict, b: Verdict) -> Verdict {
    Verdict { pass: a.pass && b.pass, detail: format!("{}; {}", a.detail, b.detail) }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let cfg = SuiteConfig::default();
    let p: EllipticParams = cfg.params;
    let report = run_verify(&cfg).expect("default configuration is valid");
    let s = &report.suites;
    use SuiteName::*;

    // Independent oracles.
    let product_theta = {
        let mut worst: f64 = 0.0;
        for z in [c(0.25, 0.0), c(0.37, 0.21), c(-0.41, -0.13), c(0.05, 0.3)] {
            let a = p.th(z);
            let b = theta_product(z, p.tau);
            worst = worst.max((a - b).norm() / b.norm());
        }
        Verdict { pass: worst < 1e-12, detail: format!("series vs triple product {worst:.1e}") }
    };
    let binomial_oracle = {
        let (t2, t4) = (theta_product(2.0 * p.eta, p.tau), theta_product(4.0 * p.eta, p.tau));
        let expected = [c(1.0, 0.0), t4 / t2, c(1.0, 0.0)];
        let worst = (0..=2)
            .map(|l| {
                let v = elliptic_binomial(2, l, &p).expect("generic eta");
                (v - expected[l]).norm() / expected[l].norm()
            })
            .fold(0.0, f64::max);
        Verdict { pass: worst < 1e-10, detail: format!("j=2 coefficients vs triple product {worst:.1e}") }
    };
    let derived_iso = {
        let cfg2 = SuiteConfig { shift_constants: ShiftConstants::Derived, ..SuiteConfig::default() };
        let r = run_suite(Iso, &cfg2);
        format!("corrected constants: {} ({:.1e})", if r.pass { "pass" } else { "fail" }, r.max_residual)
    };

    let criteria: Vec<(&str, Verdict)> = vec![
        ("theta identities and oracle", both(judge(&select(s, Theta, &[])), product_theta)),
        ("R-matrix: permutation, dynamical YBE, symmetries", judge(&select(s, Rmatrix, &[]))),
        (
            "relations and block form on the module roster, degenerate relations",
            both(judge(&select(s, Rll, &["rll/"])), judge(&select(s, Degenerate, &[]))),
        ),
        (
            "dimensions of L and T, N-periodic coefficients",
            both(
                judge(&select(s, Rll, &["rll/dim"])),
                judge(&select(s, SpecialEta, &["special-eta/dim(T)=N (N=2)", "special-eta/dim(T)=N (N=3)", "special-eta/coefficient-periodicity (N=2)", "special-eta/coefficient-periodicity (N=3)"])),
            ),
        ),
        (
            "fusion embedding and binomial coefficients",
            both(judge(&select(s, Fusion, &["fusion/embedding", "fusion/binomials"])), binomial_oracle),
        ),
        (
            "singular vectors against the nullspace oracle",
            judge(&select(s, Singular, &["singular/annihilated", "singular/matches-nullspace", "singular/nullspace-dim", "singular/off-resonance-dim"])),
        ),
        ("determinant: forms, centrality, group-like, scalar", judge(&select(s, Determinant, &[]))),
        ("transfer matrices commute on weight zero", judge(&select(s, Transfer, &[]))),
        (
            "special eta: commutativity, central powers, rank and residue kernel",
            judge(&select(s, SpecialEta, &["special-eta/commutative", "special-eta/central-powers", "special-eta/rank", "special-eta/residue-kernel"])),
        ),
        ("shift isomorphisms with the displayed constants", {
            let mut v = judge(&select(s, Iso, &["iso/m=1", "iso/m=0,l=1 (Displayed)"]));
            v.detail = format!("{}; {derived_iso}", v.detail);
            v
        }),
        (
            "R-check: intertwiner, inversion, module YBE, highest component",
            both(judge(&select(s, Rvee, &[])), judge(&select(s, YbeModules, &[]))),
        ),
        ("duals: pairing, double dual, Det on the dual", judge(&select(s, Dual, &[]))),
        ("modularity, tau+1 invariance, S-transform", judge(&select(s, Modular, &[]))),
        ("universal module relations", judge(&select(s, Universal, &[]))),
        (
            "negative controls",
            judge(&[
                select(s, Fusion, &["fusion/perturbed"]),
                select(s, Singular, &["singular/scan-off-resonance"]),
                select(s, SpecialEta, &["special-eta/wrong-eta"]),
            ]
            .concat()),
        ),
    ];

    let mut unexpected = Vec::new();
    for (k, (name, v)) in criteria.iter().enumerate() {
        let n = k + 1;
        println!("criterion {n:>2} {}  {name}: {}", if v.pass { "PASS" } else { "FAIL" }, v.detail);
        if !v.pass && !BLOCKED.contains(&n) {
            unexpected.push(n);
        }
        if v.pass && BLOCKED.contains(&n) {
            println!("             criterion {n} is listed as blocked but passes");
        }
    }
    println!("acceptance wall time {:.1} s", start.elapsed().as_secs_f64());
    if unexpected.is_empty() {
        let blocked: Vec<String> = BLOCKED.iter().map(|n| n.to_string()).collect();
        println!("no unexpected failures (blocked: {})", blocked.join(", "));
        ExitCode::SUCCESS
    } else {
        println!("unexpected failures: {unexpected:?}");
        ExitCode::FAILURE
    }
}
