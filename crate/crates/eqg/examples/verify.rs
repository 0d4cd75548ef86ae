//! Running a few suites from code with a custom configuration.

use eqg::cli::{run_verify, SuiteConfig, SuiteName};

fn main() -> eqg::Result<()> {
    let mut cfg = SuiteConfig::default();
    cfg.suites = vec![SuiteName::Theta, SuiteName::Rmatrix, SuiteName::Fusion];
    cfg.plan.count = 10;
    let report = run_verify(&cfg)?;
    print!("{}", report.summary());
    Ok(())
}
