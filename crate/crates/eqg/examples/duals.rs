//! Dual modules: which weight enters the antipode, and the double dual.

use eqg::emodules::{finite_evaluation, HConvention};
use eqg::morphisms::{dual_pairing_check, double_dual_residual};
use eqg::{c, EllipticParams};

fn main() {
    let p = EllipticParams::default();
    let v = finite_evaluation(2, 0, 0, c(0.13, 0.2), &p);
    let (lambda, w) = (c(0.31, 0.12), c(0.17, 0.05));
    let check = dual_pairing_check(&v, lambda, w);
    for (conv, r) in &check.per_convention {
        println!("{conv:?}: pairing residual {r:.1e}");
    }
    println!("winner {:?}", check.winner);
    println!("double dual {:.1e}", double_dual_residual(&v, lambda, w, HConvention::Positional));
}
