use std::f64::consts::PI;

use eqg::elliptic_core::I;
use eqg::emodules::{finite_evaluation, tensor, HConvention};
use eqg::morphisms::{
    c_nullspace, det_on_dual_residual, double_dual_residual, dual_pairing_check, elliptic_binomial, fusion_embedding,
    highest_weight_data, module_dybe_residual, morphism_residual, product_formula_d, projective_distance, r_vee,
    r_vee_inversion_residual, shift_isomorphism, singular_vector, BStep, CoefficientForm, DualDetWeight,
    ShiftConstants,
};
use eqg::{c, EllipticParams, EqgError, C64};

const L: C64 = C64::new(0.31, 0.12);
const W: C64 = C64::new(0.17, 0.05);
const Z1: C64 = C64::new(0.13, 0.2);
const Z2: C64 = C64::new(-0.21, 0.07);

/// Jacobi triple product with q = e^{πiτ}.
fn theta_product(z: C64, tau: C64) -> C64 {
    let q = (I * PI * tau).exp();
    let mut acc = C64::new(1.0, 0.0);
    let mut q2n = C64::new(1.0, 0.0);
    for _ in 0..100 {
        q2n *= q * q;
        acc *= (1.0 - q2n) * (1.0 - 2.0 * q2n * (2.0 * PI * z).cos() + q2n * q2n);
    }
    2.0 * (I * PI * tau / 4.0).exp() * (PI * z).sin() * acc
}

#[test]
fn binomials_against_the_triple_product() {
    let p = EllipticParams::default();
    let t = |k: f64| theta_product(k * p.eta, p.tau);
    let b31 = elliptic_binomial(3, 1, &p).unwrap();
    assert!((b31 - t(6.0) / t(2.0)).norm() / b31.norm() < 1e-12);
    for j in 0..6 {
        for l in 0..=j {
            let (a, b) = (elliptic_binomial(j, l, &p).unwrap(), elliptic_binomial(j, j - l, &p).unwrap());
            assert!((a - b).norm() <= 1e-12 * a.norm());
        }
    }
    assert!(matches!(elliptic_binomial(2, 3, &p), Err(EqgError::InvalidParams(_))));
}

#[test]
fn fusion_is_a_morphism_and_perturbations_are_caught() {
    let p = EllipticParams::default();
    let m = fusion_embedding(c(1.0, 0.0), c(2.0, 0.0), Z1, 8, &p).unwrap();
    let r = morphism_residual(&m, L, W);
    assert!(r.residual < 1e-9 && r.coverage >= 0.8, "{r:?}");
    assert!(morphism_residual(&m.perturbed(1, 0, c(1e-2, 0.0)), L, W).residual > 1e-4);
}

#[test]
fn singular_vector_matches_the_kernel_of_c() {
    let p = EllipticParams::default();
    let sv = singular_vector(2, 2, c(0.13, 0.02), 1, 0, 0, &p).unwrap();
    assert!(sv.annihilation_residual(L, W).unwrap() < 1e-9);
    let ws: Vec<C64> = (0..6).map(|k| c(0.17 + 0.113 * k as f64, 0.05 - 0.037 * k as f64)).collect();
    let ns = c_nullspace(&sv.module, sv.weight, L, &ws);
    assert_eq!(ns.dimension(1e-8), 1);
    let v = sv.vector(L, CoefficientForm::PhaseCorrected).unwrap();
    assert!(projective_distance(&v, &ns.kernel_vector) < 1e-6);
    assert!(matches!(singular_vector(2, 2, Z1, 0, 0, 0, &p), Err(EqgError::InvalidParams(_))));
    assert!(matches!(singular_vector(1, 2, Z1, 2, 0, 0, &p), Err(EqgError::InvalidParams(_))));
}

#[test]
fn tau_shifted_resonance_needs_the_phase() {
    let p = EllipticParams::default();
    let sv = singular_vector(3, 2, c(0.13, 0.02), 2, 0, 1, &p).unwrap();
    assert!(sv.annihilation_residual(L, W).unwrap() < 1e-8);
    assert!(sv.residual_with(CoefficientForm::Displayed, true, L, W).unwrap() > 1e-4);
}

#[test]
fn m_shift_is_an_isomorphism() {
    let p = EllipticParams::default();
    let m = shift_isomorphism(c(0.37, 0.1), Z1, 1, 0, 8, ShiftConstants::Displayed, &p).unwrap();
    assert!(morphism_residual(&m, L, W).residual < 1e-9);
    let d = shift_isomorphism(c(0.37, 0.1), Z1, 0, 1, 8, ShiftConstants::Derived, &p).unwrap();
    assert!(morphism_residual(&d, L, W).residual < 1e-9);
    assert!(shift_isomorphism(c(0.37, 0.1), Z1, 1, 1, 8, ShiftConstants::Derived, &p).is_err());
}

#[test]
fn r_check_intertwines_with_the_two_eta_step() {
    let p = EllipticParams::default();
    let m = r_vee(1, Z1, 2, Z2, BStep::TwoEta, &p).unwrap();
    assert!(morphism_residual(&m, L, W).residual < 1e-7);
    assert!(r_vee_inversion_residual(1, Z1, 2, Z2, L, &p).unwrap() < 1e-7);
    assert!(module_dybe_residual([(1, Z1), (1, Z2), (2, c(0.4, -0.1))], L, &p).unwrap() < 1e-7);
}

#[test]
fn highest_weight_functions_follow_the_product_formula() {
    let p = EllipticParams::default();
    let m = tensor(&finite_evaluation(1, 0, 0, Z1, &p), &finite_evaluation(2, 0, 0, Z2, &p));
    let hw = highest_weight_data(&m, 0, &[(L, W), (c(-0.2, 0.05), c(0.3, -0.1))]).unwrap();
    assert_eq!(hw.weight, c(3.0, 0.0));
    for s in &hw.samples {
        let d = product_formula_d(&[(c(1.0, 0.0), Z1), (c(2.0, 0.0), Z2)], s.lambda, s.w, &p);
        assert!((s.d - d).norm() / d.norm() < 1e-10);
    }
    // The lowest vector is not annihilated by c.
    assert!(matches!(highest_weight_data(&m, 5, &[(L, W)]), Err(EqgError::NotSingular { .. })));
}

#[test]
fn duals_under_the_positional_convention() {
    let p = EllipticParams::default();
    let v = finite_evaluation(2, 0, 0, Z2, &p);
    let check = dual_pairing_check(&v, L, W);
    assert_eq!(check.winner, HConvention::Positional);
    assert!(check.residual < 1e-9);
    assert!(double_dual_residual(&v, L, W, HConvention::Positional) < 1e-9);
    for which in [DualDetWeight::Original, DualDetWeight::Dual] {
        assert!(det_on_dual_residual(&v, L, W, HConvention::Positional, which) < 1e-9);
    }
}
