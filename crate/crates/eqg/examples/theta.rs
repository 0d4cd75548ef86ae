//! Theta function values and its quasi-periodicity.

use eqg::elliptic_core::{theta, theta_quasiperiods, EllipticParams, I};
use eqg::c;

fn main() -> eqg::Result<()> {
    let p = EllipticParams::default();
    for z in [c(0.25, 0.0), c(0.1, 0.3), c(-0.4, 0.05)] {
        let (r1, rt) = theta_quasiperiods(z, &p);
        println!("theta({z}) = {:.12}   period-1 residual {r1:.1e}, period-tau residual {rt:.1e}", theta(z, &p)?);
    }
    // The reference value at tau = i.
    let v = theta(c(0.25, 0.0), &p.with_tau(I))?;
    println!("theta(0.25, i) = {:.15}", v.re);
    Ok(())
}
