//! Singular vectors at resonance, against a brute-force nullspace.

use eqg::morphisms::{c_nullspace, projective_distance, singular_vector, CoefficientForm};
use eqg::{c, EllipticParams};

fn main() -> eqg::Result<()> {
    let p = EllipticParams::default();
    let ws: Vec<_> = (0..6).map(|k| c(0.17 + 0.113 * k as f64, 0.05 - 0.037 * k as f64)).collect();
    let lambda = c(0.31, 0.12);
    // (n1, n2, j, m, tau label)
    for (n1, n2, j, m, l) in [(2, 2, 1, 0, 0), (2, 2, 2, 1, 0), (3, 2, 2, 0, 1)] {
        let sv = singular_vector(n1, n2, c(0.13, 0.02), j, m, l, &p)?;
        let ns = c_nullspace(&sv.module, sv.weight, lambda, &ws);
        let v = sv.vector(lambda, CoefficientForm::PhaseCorrected)?;
        println!(
            "L{n1} x L{n2}, j={j}, m={m}, l={l}: annihilation {:.1e}, nullspace dim {}, distance {:.1e}",
            sv.annihilation_residual(lambda, c(0.17, 0.05))?,
            ns.dimension(1e-8),
            projective_distance(&v, &ns.kernel_vector)
        );
    }
    Ok(())
}
