//! Building modules and checking the exchange relations on them.

use eqg::emodules::{cyclic, evaluation_verma, finite_evaluation, one_dimensional, OneDimData};
use eqg::relations::{degenerate_residual, rll_residual};
use eqg::{c, EModule, EllipticParams};

fn report(name: &str, m: &EModule) {
    let (l, w1, w2) = (c(0.31, 0.12), c(0.17, 0.05), c(-0.3, 0.02));
    let out = rll_residual(m, l, w1, w2);
    let deg = degenerate_residual(m, l, w1);
    println!(
        "{name:<10} dim {:>2}  relations {:.1e}  block form {:.1e}  degenerate {:.1e}  coverage {:.2}",
        m.dim(),
        out.max,
        out.block_form,
        deg.residual,
        out.coverage
    );
}

fn main() -> eqg::Result<()> {
    let p = EllipticParams::default();
    let z = c(0.13, 0.2);
    for n in 0..=3 {
        report(&format!("L{n}"), &finite_evaluation(n, 0, 0, z, &p));
    }
    // Truncated windows: only columns far enough from the edge are compared.
    report("verma", &evaluation_verma(c(0.37, 0.41), z, 12, &p)?);
    report("cyclic", &cyclic(c(0.29, -0.33), c(0.61, 0.17), z, 14, &p)?);
    report("U(l=1)", &one_dimensional(&OneDimData::constant(1, c(0.7, 0.2)), &p));
    Ok(())
}
