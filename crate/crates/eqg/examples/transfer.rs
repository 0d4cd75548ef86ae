//! Commuting transfer matrices on the weight-zero subspace.

use eqg::emodules::{finite_evaluation, tensor_all};
use eqg::relations::transfer_commutator;
use eqg::{c, EllipticParams};

fn main() -> eqg::Result<()> {
    let p = EllipticParams::default();
    let chain = tensor_all(&[
        finite_evaluation(1, 0, 0, c(0.13, 0.2), &p),
        finite_evaluation(1, 0, 0, c(-0.21, 0.07), &p),
        finite_evaluation(2, 0, 0, c(0.4, -0.1), &p),
    ]);
    for (w1, w2) in [(c(0.17, 0.05), c(-0.3, 0.02)), (c(0.45, -0.1), c(0.02, 0.2))] {
        let r = transfer_commutator(&chain, c(0.31, 0.12), w1, w2)?;
        println!("[t({w1}), t({w2})] on weight 0: aa {:.1e}, dd {:.1e}, ad {:.1e}", r.aa, r.dd, r.ad_symmetry);
    }
    Ok(())
}
