//! Where does L2(z1) x L2(z2) become reducible?

use eqg::morphisms::scan_reducibility;
use eqg::{c, EllipticParams};

fn main() {
    let p = EllipticParams::default();
    let e = p.eta.re;
    let deltas = [c(4.0 * e, 0.0), c(2.0 * e, 0.0), c(-2.0 * e, 0.0), c(0.31, 0.07), c(6.0 * e + 1.0, 0.0)];
    for pt in scan_reducibility(2, 2, c(0.13, 0.02), &deltas, 1e-6, &p) {
        println!("z1-z2 = {:.4}: detected {:?}, predicted {:?}, consistent {}", pt.delta, pt.detected, pt.labels, pt.consistent);
    }
}
