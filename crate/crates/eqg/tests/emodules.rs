use std::f64::consts::PI;
use std::sync::Arc;

use eqg::elliptic_core::I;
use eqg::emodules::{
    counit, cyclic, dual, evaluation_verma, finite_evaluation, one_dimensional, operator_distance, special_t, tensor,
    tensor_all, twist_auto, weyl_twist, HConvention, OneDimData, ScalarFn, TwistKind, ZSpec,
};
use eqg::relations::{determinant, rll_residual};
use eqg::legs::rel_diff;
use eqg::{c, EllipticParams, EqgError, Gen};

const L: eqg::C64 = eqg::C64::new(0.31, 0.12);
const W: eqg::C64 = eqg::C64::new(0.17, 0.05);

#[test]
fn dimensions_multiply_under_tensor() {
    let p = EllipticParams::default();
    for n in 0..5 {
        assert_eq!(finite_evaluation(n, 0, 0, c(0.1, 0.0), &p).dim(), n + 1);
    }
    let l1 = finite_evaluation(1, 0, 0, c(0.13, 0.2), &p);
    let l2 = finite_evaluation(2, 0, 0, c(-0.21, 0.07), &p);
    assert_eq!(tensor(&l1, &l2).dim(), 6);
    assert_eq!(tensor_all(&[l1.clone(), l1.clone(), l2]).dim(), 12);
    assert_eq!(evaluation_verma(c(0.37, 0.41), c(0.1, 0.0), 7, &p).unwrap().dim(), 8);
    assert_eq!(counit(&p).dim(), 1);
}

#[test]
fn counit_is_a_tensor_unit() {
    let p = EllipticParams::default();
    let l2 = finite_evaluation(2, 0, 0, c(-0.21, 0.07), &p);
    let e = counit(&p);
    assert!(operator_distance(&tensor(&e, &l2), &l2, L, W) < 1e-12);
    assert!(operator_distance(&tensor(&l2, &e), &l2, L, W) < 1e-12);
}

#[test]
fn one_dimensional_modules_compose_like_tensors() {
    let p = EllipticParams::default();
    let a = OneDimData::constant(1, c(0.7, 0.2));
    let b = OneDimData::constant(-2, c(0.3, -0.4));
    let composed = one_dimensional(&a.compose(&b, &p), &p);
    let product = tensor(&one_dimensional(&a, &p), &one_dimensional(&b, &p));
    assert!(operator_distance(&composed, &product, L, W) < 1e-10);
    let unit = one_dimensional(&OneDimData::unit(), &p);
    assert!(operator_distance(&unit, &counit(&p), L, W) < 1e-12);
}

#[test]
fn weyl_twist_is_an_involution() {
    let p = EllipticParams::default();
    let v = tensor(&finite_evaluation(1, 0, 0, c(0.13, 0.2), &p), &finite_evaluation(2, 0, 0, c(0.4, -0.1), &p));
    assert!(operator_distance(&weyl_twist(&weyl_twist(&v)), &v, L, W) < 1e-10);
    assert!(operator_distance(&weyl_twist(&v), &v, L, W) > 1e-3);
}

#[test]
fn twists_preserve_relations_and_determinant() {
    let p = EllipticParams::default();
    let g: ScalarFn = Arc::new(|l| 1.3 + 0.4 * (2.0 * PI * I * l).exp());
    let base = finite_evaluation(2, 0, 0, c(-0.21, 0.07), &p);
    for kind in [TwistKind::I, TwistKind::J] {
        let t = twist_auto(&base, g.clone(), kind);
        assert!(rll_residual(&t, L, W, c(-0.08, 0.11)).worst() < 1e-10, "{kind:?}");
        assert!(rel_diff(&determinant(&t, L, W), &determinant(&base, L, W)) < 1e-10, "{kind:?}");
    }
}

#[test]
fn callable_evaluation_parameter() {
    // z must be periodic under λ → λ+1 and λ → λ+2η; with 2η = 1/5 both hold.
    let p = EllipticParams::default().with_eta(c(0.1, 0.0));
    let z = ZSpec::Func(Arc::new(|l| c(0.1, 0.03) + 0.05 * (10.0 * PI * I * l).exp()));
    assert!(z.periodicity_residual(p.eta, &[L, W]) < 1e-12);
    let m = finite_evaluation(2, 0, 0, z, &p);
    assert!(rll_residual(&m, L, W, c(-0.08, 0.11)).worst() < 1e-9);
}

#[test]
fn dual_has_same_dimension_and_differs_from_original() {
    let p = EllipticParams::default();
    let v = finite_evaluation(2, 0, 0, c(-0.21, 0.07), &p);
    let d = dual(&v, HConvention::Positional);
    assert_eq!(d.dim(), 3);
    assert!(d.op(Gen::A, L, W).iter().all(|x| x.is_finite()));
}

#[test]
fn special_modules_require_special_eta() {
    let p = EllipticParams::default();
    assert!(matches!(special_t(c(0.37, 0.1), None, c(0.1, 0.05), 3, Default::default(), &p), Err(EqgError::WrongEta { .. })));
    let q = p.with_eta(c(1.0 / 6.0, 0.0));
    assert_eq!(special_t(c(0.37, 0.1), None, c(0.1, 0.05), 3, Default::default(), &q).unwrap().dim(), 3);
}

#[test]
fn cyclic_window_must_be_positive() {
    let p = EllipticParams::default();
    assert!(cyclic(c(0.29, -0.33), c(0.61, 0.17), c(0.1, 0.0), 0, &p).is_err());
    assert!(evaluation_verma(c(0.37, 0.41), c(0.1, 0.0), 1, &p).is_err());
}
