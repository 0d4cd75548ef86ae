use eqg::elliptic_core::is_admissible;
use eqg::legs::{rel_diff, swap};
use eqg::rmatrix::{coeffs, coeffs_unchecked, degeneracy_report, dybe_residual, r_matrix, r_unchecked, rank_at_minus_2eta};
use eqg::{c, EllipticParams, EqgError, C64};
use proptest::prelude::*;

fn point() -> impl Strategy<Value = C64> {
    (-0.5f64..0.5, -0.25f64..0.25).prop_map(|(a, b)| c(a, b))
}

fn generic(p: &EllipticParams, xs: &[C64]) -> bool {
    xs.iter().all(|&x| [-2.0, 0.0, 2.0].iter().all(|k| is_admissible(x + *k * p.eta, p)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn dynamical_yang_baxter(l in point(), w1 in point(), w2 in point(), w3 in point()) {
        let p = EllipticParams::default();
        prop_assume!(generic(&p, &[l, w1 - w2, w1 - w3, w2 - w3]));
        prop_assert!(dybe_residual(l, w1, w2, w3, &p).unwrap() < 1e-8);
    }

    #[test]
    fn coefficients_are_one_periodic_in_lambda(l in point(), w in point()) {
        let p = EllipticParams::default();
        prop_assume!(generic(&p, &[l, w]));
        let (a, b) = (coeffs_unchecked(w, l, &p).as_array(), coeffs_unchecked(w, l + 1.0, &p).as_array());
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).norm() <= 1e-10 * x.norm().max(1.0));
        }
    }

    #[test]
    fn weyl_symmetry_of_coefficients(l in point(), w in point()) {
        let p = EllipticParams::default();
        prop_assume!(generic(&p, &[l, w]));
        let (m, q) = (coeffs_unchecked(w, -l, &p), coeffs_unchecked(w, l, &p));
        prop_assert!((m.alpha - q.delta).norm() <= 1e-10 * q.delta.norm());
        prop_assert!((m.beta - q.gamma).norm() <= 1e-10 * q.gamma.norm());
    }
}

#[test]
fn zero_spectral_parameter_gives_the_flip() {
    let p = EllipticParams::default();
    for l in [c(0.31, 0.12), c(-0.2, 0.05)] {
        assert!(rel_diff(&r_unchecked(l, c(0.0, 0.0), &p), &swap(2, 2)) < 1e-10);
    }
}

#[test]
fn conserves_total_weight() {
    let p = EllipticParams::default();
    let r = r_matrix(c(0.31, 0.12), c(0.17, 0.05), &p).unwrap();
    assert_eq!(r.weight_commutator(), 0.0);
}

#[test]
fn poles_are_reported() {
    let p = EllipticParams::default();
    assert!(matches!(coeffs(c(0.17, 0.05), c(0.0, 0.0), &p), Err(EqgError::Pole { .. })));
}

#[test]
fn degenerate_point_and_residue() {
    let p = EllipticParams::default();
    assert_eq!(rank_at_minus_2eta(c(0.31, 0.12), &p), 3);
    let q = p.with_eta(c(0.25, 0.0));
    let d = degeneracy_report(c(0.31, 0.12), 2, &q).unwrap();
    assert!(d.kernel_contains_pp && d.kernel_contains_mm && d.residue_norm > 1e-3);
    assert!(matches!(degeneracy_report(c(0.31, 0.12), 2, &p), Err(EqgError::WrongEta { .. })));
}
