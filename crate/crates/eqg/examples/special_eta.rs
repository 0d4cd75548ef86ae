//! At 2N eta = 1: N-dimensional modules and central N-th powers.

use eqg::emodules::{special_t, SignTwist};
use eqg::relations::power_central_residual;
use eqg::rmatrix::degeneracy_report;
use eqg::{c, EllipticParams};

fn main() -> eqg::Result<()> {
    for n in [2usize, 3] {
        let p = EllipticParams::default().with_eta(c(0.5 / n as f64, 0.0));
        let t = special_t(c(0.37, 0.1), Some(c(0.61, 0.17)), c(0.1, 0.05), n, SignTwist::Printed, &p)?;
        let r = power_central_residual(&t, n, c(0.2, 0.1), c(-0.15, 0.04), c(0.31, 0.12))?;
        let d = degeneracy_report(c(0.31, 0.12), n, &p)?;
        println!(
            "N={n}: dim {}, worst power commutator {:.1e}, residue kills ++ and --: {} {}",
            t.dim(),
            r.max(),
            d.kernel_contains_pp,
            d.kernel_contains_mm
        );
    }
    let wrong = special_t(c(0.37, 0.1), None, c(0.1, 0.05), 3, SignTwist::Printed, &EllipticParams::default());
    println!("at eta = 0.23: {}", wrong.unwrap_err());
    Ok(())
}
