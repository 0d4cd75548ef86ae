//! The relations as scalar identities between universal coefficients.

use eqg::relations::universal_relation_residual;
use eqg::{c, EllipticParams};

fn main() {
    let p = EllipticParams::default();
    let out = universal_relation_residual(c(0.31, 0.12), c(0.7, -0.2), c(0.1, 0.05), c(0.37, 0.1), c(0.17, 0.05), c(-0.3, 0.02), &p);
    for (id, r) in &out.per_relation {
        println!("{id:<6} {r:.1e}");
    }
}
