//! Shifting the highest weight by m/eta or l tau/eta.

use eqg::morphisms::{morphism_residual, shift_isomorphism, ShiftConstants};
use eqg::{c, EllipticParams};

fn main() -> eqg::Result<()> {
    let p = EllipticParams::default();
    let (big, z) = (c(0.37, 0.1), c(0.1, 0.05));
    let pt = (c(0.31, 0.12), c(0.17, 0.05));
    let m = shift_isomorphism(big, z, 1, 0, 8, ShiftConstants::Displayed, &p)?;
    println!("m = 1: residual {:.1e}", morphism_residual(&m, pt.0, pt.1).residual);
    for k in [ShiftConstants::Displayed, ShiftConstants::Derived] {
        let m = shift_isomorphism(big, z, 0, 1, 8, k, &p)?;
        println!("l = 1 with {k:?} constants: residual {:.1e}", morphism_residual(&m, pt.0, pt.1).residual);
    }
    Ok(())
}
