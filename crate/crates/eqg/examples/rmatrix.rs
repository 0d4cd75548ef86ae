//! The dynamical R-matrix and the dynamical Yang-Baxter equation.

use eqg::rmatrix::{dybe_residual, r_matrix, rank_at_minus_2eta};
use eqg::{c, EllipticParams};

fn main() -> eqg::Result<()> {
    let p = EllipticParams::default();
    let (lambda, w) = (c(0.31, 0.12), c(0.17, 0.05));
    let r = r_matrix(lambda, w, &p)?;
    println!("R(lambda, w) in the basis (++, +-, -+, --):{}", r.entries);
    println!("commutes with h(1)+h(2): {:.1e}", r.weight_commutator());
    let res = dybe_residual(lambda, w, c(-0.2, 0.1), c(0.4, -0.03), &p)?;
    println!("dynamical YBE residual {res:.2e}");
    println!("rank of R(lambda, -2 eta) = {}", rank_at_minus_2eta(lambda, &p));
    Ok(())
}
