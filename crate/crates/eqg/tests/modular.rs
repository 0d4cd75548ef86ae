use eqg::emodules::{counit, evaluation_verma, finite_evaluation, tensor};
use eqg::modular::{modularity_residual, s_dual_params, s_transform, tau_shift_invariance, ExponentForm};
use eqg::relations::rll_residual;
use eqg::{c, EllipticParams, EqgError, C64};

const BIG: C64 = C64::new(0.37, 0.1);
const L: C64 = C64::new(0.31, 0.12);
const W: C64 = C64::new(0.17, 0.05);

#[test]
fn modules_are_quasi_periodic_with_their_parameter() {
    let p = EllipticParams::default();
    let v = evaluation_verma(BIG, c(0.13, 0.2), 10, &p).unwrap();
    assert!(modularity_residual(&v, BIG, L, W) < 1e-9);
    assert!(modularity_residual(&v, BIG + 0.3, L, W) > 1e-3);
    let big2 = c(-0.2, 0.3);
    let vv = tensor(&evaluation_verma(BIG, c(0.13, 0.2), 4, &p).unwrap(), &evaluation_verma(big2, c(0.4, -0.1), 4, &p).unwrap());
    assert!(modularity_residual(&vv, BIG + big2, L, W) < 1e-9);
    assert!(modularity_residual(&counit(&p), c(0.0, 0.0), L, W) < 1e-12);
}

#[test]
fn shifting_tau_by_one_changes_nothing_but_theta() {
    let p = EllipticParams::default();
    let r = tau_shift_invariance(&p, &[(L, W), (c(-0.2, 0.05), c(0.3, -0.1))]).unwrap();
    assert!(r.module < 1e-10 && r.rmatrix < 1e-10, "{r:?}");
    assert!(r.theta_control > 0.1);
}

#[test]
fn s_transform_with_the_derived_exponents() {
    let target = EllipticParams::default().with_tau(c(0.0, 1.1));
    let src = s_dual_params(&target).unwrap();
    let v = finite_evaluation(2, 0, 0, c(-0.21, 0.07), &src);
    let s = s_transform(&v, c(2.0, 0.0), ExponentForm::Derived, &target).unwrap();
    assert!(rll_residual(&s, L, W, c(-0.08, 0.11)).worst() < 1e-7);
    assert!(modularity_residual(&s, c(2.0, 0.0), L, W) < 1e-7);
    let printed = s_transform(&v, c(2.0, 0.0), ExponentForm::Printed, &target).unwrap();
    assert!(rll_residual(&printed, L, W, c(-0.08, 0.11)).worst() > 1e-3);
}

#[test]
fn s_transform_rejects_modules_at_the_wrong_parameters() {
    let target = EllipticParams::default().with_tau(c(0.0, 1.1));
    let v = finite_evaluation(1, 0, 0, c(0.13, 0.2), &target);
    assert!(matches!(s_transform(&v, c(1.0, 0.0), ExponentForm::Derived, &target), Err(EqgError::InvalidParams(_))));
}
