//! The intertwiner between L_n1(z1) x L_n2(z2) and the swapped product.

use eqg::morphisms::{module_dybe_residual, morphism_residual, r_vee, r_vee_inversion_residual, BStep};
use eqg::{c, EllipticParams};

fn main() -> eqg::Result<()> {
    let p = EllipticParams::default();
    let (z1, z2, z3) = (c(0.13, 0.2), c(-0.21, 0.07), c(0.4, -0.1));
    let lambda = c(0.31, 0.12);
    for step in [BStep::TwoEta, BStep::Printed4Eta] {
        let m = r_vee(1, z1, 2, z2, step, &p)?;
        println!("{step:?}: intertwining residual {:.1e}", morphism_residual(&m, lambda, c(0.17, 0.05)).residual);
    }
    println!("inversion {:.1e}", r_vee_inversion_residual(1, z1, 2, z2, lambda, &p)?);
    println!("dynamical YBE on L1 x L1 x L2 {:.1e}", module_dybe_residual([(1, z1), (1, z2), (2, z3)], lambda, &p)?);
    Ok(())
}
