//! Tensor products and the determinant element: central and group-like.

use eqg::emodules::{finite_evaluation, tensor};
use eqg::relations::{determinant, determinant_centrality, determinant_grouplike, determinant_grouplike3};
use eqg::{c, EllipticParams};

fn main() {
    let p = EllipticParams::default();
    let l1 = finite_evaluation(1, 0, 0, c(0.13, 0.2), &p);
    let l2 = finite_evaluation(2, 0, 0, c(-0.21, 0.07), &p);
    let (lambda, w) = (c(0.31, 0.12), c(0.17, 0.05));

    let det = determinant(&l2, lambda, w);
    println!("Det on L2 is scalar:{det}");
    let t = tensor(&l1, &l2);
    println!("centrality on L1xL2 {:.1e}", determinant_centrality(&t, lambda, w, c(-0.3, 0.02)).residual);
    println!("group-like, two factors {:.1e}", determinant_grouplike(&l1, &l2, lambda, w));
    println!("group-like, three factors {:.1e}", determinant_grouplike3(&l1, &l1, &l2, lambda, w));
}
