use eqg::elliptic_core::is_admissible;
use eqg::emodules::{evaluation_verma, finite_evaluation, special_t, tensor};
use eqg::relations::{
    degenerate_residual, degenerate_residual_offset, determinant_centrality, determinant_forms, power_central_residual,
    relation_table, rll_residual, transfer_commutator, universal_relation_residual,
};
use eqg::{c, EllipticParams, EqgError, C64};
use proptest::prelude::*;

fn point() -> impl Strategy<Value = C64> {
    (-0.5f64..0.5, -0.25f64..0.25).prop_map(|(a, b)| c(a, b))
}

/// Away from the poles of every coefficient that the relations touch.
fn generic(p: &EllipticParams, l: C64, ws: &[C64]) -> bool {
    let mut args = vec![l];
    for (i, a) in ws.iter().enumerate() {
        for b in &ws[i + 1..] {
            args.push(a - b);
        }
        args.push(*a);
    }
    args.iter().all(|&x| (-4..=4).all(|k| is_admissible(x + k as f64 * p.eta, p)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn relations_hold_on_small_modules(l in point(), w1 in point(), w2 in point()) {
        let p = EllipticParams::default();
        prop_assume!(generic(&p, l, &[w1, w2]));
        for n in 1..=2 {
            let m = finite_evaluation(n, 0, 0, c(0.13, 0.2), &p);
            let out = rll_residual(&m, l, w1, w2);
            prop_assert!(out.worst() < 1e-8, "n={n}: {:?}", out.per_relation);
            prop_assert!((out.coverage - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn universal_relations(l in point(), h in point(), z in point(), w1 in point(), w2 in point()) {
        let p = EllipticParams::default();
        prop_assume!(generic(&p, l, &[w1, w2, z]));
        prop_assume!(generic(&p, h, &[w1 - z, w2 - z]));
        let out = universal_relation_residual(l, h, z, c(0.37, 0.1), w1, w2, &p);
        prop_assert!(out.max < 1e-8, "{:?}", out.per_relation);
    }
}

#[test]
fn sixteen_relations() {
    assert_eq!(relation_table().len(), 16);
}

#[test]
fn degenerate_relations_and_their_offset() {
    let p = EllipticParams::default();
    let m = tensor(&finite_evaluation(1, 0, 0, c(0.13, 0.2), &p), &finite_evaluation(2, 0, 0, c(0.4, -0.1), &p));
    let (l, w) = (c(0.31, 0.12), c(0.17, 0.05));
    assert!(degenerate_residual(&m, l, w).residual < 1e-9);
    // Moving the second spectral parameter away from w − 2η breaks the relation linearly.
    let r1 = degenerate_residual_offset(&m, l, w, c(1e-3, 0.0)).residual;
    let r2 = degenerate_residual_offset(&m, l, w, c(2e-3, 0.0)).residual;
    assert!(r1 > 1e-6 && (r2 / r1 - 2.0).abs() < 0.05, "{r1} {r2}");
}

#[test]
fn determinant_on_a_verma_window() {
    let p = EllipticParams::default();
    let m = evaluation_verma(c(0.37, 0.41), c(0.13, 0.2), 14, &p).unwrap();
    let (l, w) = (c(0.31, 0.12), c(0.17, 0.05));
    let f = determinant_forms(&m, l, w);
    assert!(f.residual < 1e-8 && f.coverage >= 0.8, "{f:?}");
    let cen = determinant_centrality(&m, l, w, c(-0.08, 0.11));
    assert!(cen.residual < 1e-8 && cen.coverage >= 0.8, "{cen:?}");
}

#[test]
fn transfer_matrices() {
    let p = EllipticParams::default();
    let l1 = finite_evaluation(1, 0, 0, c(0.13, 0.2), &p);
    let m = tensor(&l1, &finite_evaluation(1, 0, 0, c(-0.21, 0.07), &p));
    let r = transfer_commutator(&m, c(0.31, 0.12), c(0.17, 0.05), c(-0.08, 0.11)).unwrap();
    assert!(r.worst() < 1e-9, "{r:?}");
    // L1 has weights ±1 only.
    assert!(matches!(transfer_commutator(&l1, c(0.31, 0.12), c(0.17, 0.05), c(-0.08, 0.11)), Err(EqgError::EmptyWeightZero)));
}

#[test]
fn central_powers_need_the_matching_eta() {
    let q = EllipticParams::default().with_eta(c(0.25, 0.0));
    let t = special_t(c(0.37, 0.1), None, c(0.1, 0.05), 2, Default::default(), &q).unwrap();
    let r = power_central_residual(&t, 2, c(0.1, 0.05), c(0.17, 0.05), c(0.31, 0.12)).unwrap();
    assert!(r.max() < 1e-8 && r.coverage() >= 0.8);
    assert!(matches!(
        power_central_residual(&t, 3, c(0.1, 0.05), c(0.17, 0.05), c(0.31, 0.12)),
        Err(EqgError::WrongEta { .. })
    ));
}
