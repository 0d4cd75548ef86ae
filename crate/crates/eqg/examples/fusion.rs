//! Fusion: a Verma module inside a product of two at resonant evaluation points.

use eqg::morphisms::{elliptic_binomial, fusion_embedding, morphism_residual};
use eqg::{c, EllipticParams};

fn main() -> eqg::Result<()> {
    let p = EllipticParams::default();
    for j in 0..=3 {
        let row: Vec<String> = (0..=j).map(|l| format!("{:.6}", elliptic_binomial(j, l, &p).unwrap())).collect();
        println!("j={j}: {}", row.join("  "));
    }
    let m = fusion_embedding(c(1.0, 0.0), c(2.0, 0.0), c(0.13, 0.2), 8, &p)?;
    let r = morphism_residual(&m, c(0.31, 0.12), c(0.17, 0.05));
    println!("embedding residual {:.1e} on {:.0}% of columns", r.residual, 100.0 * r.coverage);
    let bad = m.perturbed(1, 0, c(1e-2, 0.0));
    println!("perturbed map residual {:.1e}", morphism_residual(&bad, c(0.31, 0.12), c(0.17, 0.05)).residual);
    Ok(())
}
