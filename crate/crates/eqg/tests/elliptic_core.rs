use std::f64::consts::PI;

use eqg::elliptic_core::{
    is_admissible, near_lattice_zero, nearest_lattice_point, resonant_multiples, sample_generic, theta, theta_quasiperiods,
    theta_scale, I,
};
use eqg::{c, EllipticParams, EqgError, SamplePlan, C64};
use proptest::prelude::*;

fn point() -> impl Strategy<Value = C64> {
    (-0.6f64..0.6, -0.4f64..0.4).prop_map(|(a, b)| c(a, b))
}

/// Jacobi triple product with q = e^{πiτ}.
fn product(z: C64, tau: C64) -> C64 {
    let q = (I * PI * tau).exp();
    let mut acc = C64::new(1.0, 0.0);
    let mut q2n = C64::new(1.0, 0.0);
    for _ in 0..100 {
        q2n *= q * q;
        acc *= (1.0 - q2n) * (1.0 - 2.0 * q2n * (2.0 * PI * z).cos() + q2n * q2n);
    }
    2.0 * (I * PI * tau / 4.0).exp() * (PI * z).sin() * acc
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn odd_and_quasi_periodic(z in point()) {
        let p = EllipticParams::default();
        let s = theta_scale(z, &p);
        prop_assert!((p.th(-z) + p.th(z)).norm() / s < 1e-12);
        let (r1, rt) = theta_quasiperiods(z, &p);
        prop_assert!(r1 < 1e-12 && rt < 1e-12);
    }

    #[test]
    fn agrees_with_triple_product(z in point(), re in -0.5f64..0.5, im in 0.6f64..2.0) {
        let tau = c(re, im);
        let p = EllipticParams::default().with_tau(tau);
        let (a, b) = (p.th(z), product(z, tau));
        prop_assert!((a - b).norm() <= 1e-12 * b.norm().max(theta_scale(z, &p)));
    }

    #[test]
    fn tau_plus_one_is_a_phase(z in point()) {
        let p = EllipticParams::default();
        let q = p.with_tau(p.tau + 1.0);
        let ph = (I * PI / 4.0).exp();
        prop_assert!((q.th(z) - ph * p.th(z)).norm() / theta_scale(z, &p) < 1e-12);
    }
}

#[test]
fn reference_value_at_tau_i() {
    let p = EllipticParams::default().with_tau(I);
    let v = theta(c(0.25, 0.0), &p).unwrap();
    let oracle = 0.643_589_764_038_585_884_090_326_842_448_897_197_198_876_321_979_09;
    assert!((v - oracle).norm() / oracle < 1e-12, "{v}");
}

#[test]
fn zeros_sit_on_the_lattice() {
    let p = EllipticParams::default();
    for (m, n) in [(0, 0), (1, 0), (-2, 1), (3, -1)] {
        let z = m as f64 + n as f64 * p.tau;
        assert!(p.th(z).norm() < 1e-12 * theta_scale(z, &p).max(1.0));
        assert!(!is_admissible(z, &p));
        let (a, b, d) = nearest_lattice_point(z + c(1e-3, 0.0), &p);
        assert_eq!((a, b), (m, n));
        assert!((d - 1e-3).abs() < 1e-12);
    }
    assert!((near_lattice_zero(c(0.5, 0.0), &p) - 0.5).abs() < 1e-12);
}

#[test]
fn parameters_are_validated() {
    assert!(matches!(EllipticParams::new(c(0.3, -1.0), c(0.23, 0.0)), Err(EqgError::InvalidParams(_))));
    assert!(matches!(EllipticParams::new(c(0.3, 1.1), c(0.0, 0.0)), Err(EqgError::InvalidParams(_))));
    let p = EllipticParams { max_terms: 1, ..EllipticParams::default() };
    assert!(matches!(theta(c(0.1, 3.0), &p), Err(EqgError::TruncationOverflow { .. })));
}

#[test]
fn sampling_is_reproducible_and_respects_forbidden_zeros() {
    let p = EllipticParams::default();
    let plan = SamplePlan::default().with_count(20);
    let f = |x: &[C64]| vec![x[0], x[0] - x[1]];
    let a = sample_generic(&plan, &p, 2, f).unwrap();
    let b = sample_generic(&plan, &p, 2, f).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, sample_generic(&plan.with_seed(7), &p, 2, f).unwrap());
    assert!(a.iter().all(|x| is_admissible(x[0], &p) && is_admissible(x[0] - x[1], &p)));
    // A forbidden argument that is always a zero cannot be satisfied.
    let r = sample_generic(&plan, &p, 1, |_| vec![c(0.0, 0.0)]);
    assert!(matches!(r, Err(EqgError::SamplingExhausted { index: 0, .. })));
}

#[test]
fn resonant_eta_is_flagged() {
    let p = EllipticParams::default().with_eta(c(0.25, 0.0));
    assert_eq!(resonant_multiples(&p, 4), vec![2, 4]);
    assert!(resonant_multiples(&EllipticParams::default(), 6).is_empty());
}
