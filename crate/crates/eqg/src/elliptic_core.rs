//! Jacobi theta function, lattice geometry and generic-point sampling.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{EqgError, Result};

pub type C64 = Complex64;

pub const I: C64 = C64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Ratio below which the next series term is considered negligible.
const SERIES_CUTOFF: f64 = 1e-18;

/// The modulus and step parameter together with numerical policy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EllipticParams {
    pub tau: C64,
    pub eta: C64,
    pub max_terms: usize,
    pub tol: f64,
    pub pole_margin: f64,
}

impl Default for EllipticParams {
    fn default() -> Self {
        Self {
            tau: c(0.3, 1.1),
            eta: c(0.23, 0.0),
            max_terms: 60,
            tol: 1e-8,
            pole_margin: 1e-6,
        }
    }
}

impl EllipticParams {
    pub fn new(tau: C64, eta: C64) -> Result<Self> {
        Self { tau, eta, ..Self::default() }.validated()
    }

    pub fn validated(self) -> Result<Self> {
        if !(self.tau.im > 0.0) {
            return Err(EqgError::InvalidParams(format!("Im tau must be positive, got {}", self.tau)));
        }
        if self.eta.norm() == 0.0 || !self.eta.is_finite() {
            return Err(EqgError::InvalidParams("eta must be a nonzero finite number".into()));
        }
        if !(self.tol > 0.0) || !(self.pole_margin > 0.0) || self.max_terms < 1 {
            return Err(EqgError::InvalidParams(
                "tol, pole_margin and max_terms must be positive".into(),
            ));
        }
        Ok(self)
    }

    pub fn with_eta(self, eta: C64) -> Self {
        Self { eta, ..self }
    }

    pub fn with_tau(self, tau: C64) -> Self {
        Self { tau, ..self }
    }

    pub fn with_tol(self, tol: f64) -> Self {
        Self { tol, ..self }
    }

    /// θ(z) at these parameters; truncated at the cap rather than failing.
    ///
    /// Hot-path evaluators use this after the sampler has vetted the inputs;
    /// [`theta`] is the checked entry point.
    #[inline]
    pub fn th(&self, z: C64) -> C64 {
        theta_series(z, self.tau, self.max_terms).sum
    }
}

/// Result of summing the theta series.
#[derive(Debug, Clone, Copy)]
pub struct ThetaSeries {
    pub sum: C64,
    /// Magnitude of the largest included term.
    pub scale: f64,
    pub half_width: usize,
    pub converged: bool,
}

/// θ(z,τ) = −Σ_j exp(πi(j+½)²τ + 2πi(j+½)(z+½)), summed outward from the origin.
pub fn theta_series(z: C64, tau: C64, max_terms: usize) -> ThetaSeries {
    let t = tau.im;
    let y = z.im;
    let log_mag = |x: f64| -PI * x * x * t - 2.0 * PI * x * y;
    let term = |x: f64| (I * PI * (x * x * tau + 2.0 * x * (z + 0.5))).exp();
    let peak = if t > 0.0 { (y / t).abs() } else { f64::INFINITY };
    let cut = SERIES_CUTOFF.ln();

    let mut sum = C64::new(0.0, 0.0);
    let mut max_log = f64::NEG_INFINITY;
    for n in 0..max_terms {
        let x = n as f64 + 0.5;
        let (lp, lm) = (log_mag(x), log_mag(-x));
        if n > 0 && x > peak && lp - max_log < cut && lm - max_log < cut {
            return ThetaSeries { sum: -sum, scale: max_log.exp(), half_width: n, converged: true };
        }
        sum += term(x) + term(-x);
        max_log = max_log.max(lp).max(lm);
    }
    ThetaSeries { sum: -sum, scale: max_log.exp(), half_width: max_terms, converged: false }
}

/// Checked theta evaluation.
pub fn theta(z: C64, params: &EllipticParams) -> Result<C64> {
    if !(params.tau.im > 0.0) {
        return Err(EqgError::InvalidParams("Im tau must be positive".into()));
    }
    let s = theta_series(z, params.tau, params.max_terms);
    if s.converged {
        Ok(s.sum)
    } else {
        Err(EqgError::TruncationOverflow { z, terms: params.max_terms })
    }
}

/// Largest term magnitude of the series at z; the natural size of θ(z).
pub fn theta_scale(z: C64, params: &EllipticParams) -> f64 {
    theta_series(z, params.tau, params.max_terms).scale
}

/// |θ(z+1)+θ(z)| and |θ(z+τ)+e^{−πiτ−2πiz}θ(z)|, relative to the series scale.
pub fn theta_quasiperiods(z: C64, params: &EllipticParams) -> (f64, f64) {
    let tau = params.tau;
    let t0 = params.th(z);
    let scale = theta_scale(z, params).max(theta_scale(z + tau, params));
    let r1 = (params.th(z + 1.0) + t0).norm() / theta_scale(z, params);
    let phase = (-I * PI * tau - 2.0 * I * PI * z).exp();
    let r2 = (params.th(z + tau) + phase * t0).norm() / scale.max((phase * t0).norm());
    (r1, r2)
}

/// Distance from z to the period lattice ℤ + τℤ.
pub fn near_lattice_zero(z: C64, params: &EllipticParams) -> f64 {
    let tau = params.tau;
    let b = z.im / tau.im;
    let a = z.re - b * tau.re;
    let (a0, b0) = (a.round() as i64, b.round() as i64);
    let mut best = f64::INFINITY;
    for m in a0 - 2..=a0 + 2 {
        for n in b0 - 2..=b0 + 2 {
            best = best.min((z - m as f64 - tau * n as f64).norm());
        }
    }
    best
}

/// Lattice coordinates (m, n) of the lattice point nearest to z, with the distance.
pub fn nearest_lattice_point(z: C64, params: &EllipticParams) -> (i64, i64, f64) {
    let tau = params.tau;
    let b = z.im / tau.im;
    let a = z.re - b * tau.re;
    let (a0, b0) = (a.round() as i64, b.round() as i64);
    let mut best = (a0, b0, f64::INFINITY);
    for m in a0 - 2..=a0 + 2 {
        for n in b0 - 2..=b0 + 2 {
            let d = (z - m as f64 - tau * n as f64).norm();
            if d < best.2 {
                best = (m, n, d);
            }
        }
    }
    best
}

/// How sample coordinates are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SamplePlan {
    pub seed: u64,
    pub count: usize,
    pub re_range: (f64, f64),
    pub im_range: (f64, f64),
    pub retry_limit: usize,
}

impl Default for SamplePlan {
    fn default() -> Self {
        Self { seed: 42, count: 30, re_range: (-0.5, 0.5), im_range: (-0.25, 0.25), retry_limit: 200 }
    }
}

impl SamplePlan {
    pub fn with_count(self, count: usize) -> Self {
        Self { count, ..self }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }
}

/// True when |θ(arg)| clears the pole margin relative to the theta scale.
pub fn is_admissible(arg: C64, params: &EllipticParams) -> bool {
    let s = theta_series(arg, params.tau, params.max_terms);
    s.sum.norm() >= params.pole_margin * s.scale
}

/// Draws `plan.count` points of `arity` coordinates each, rejecting any point for
/// which one of the theta arguments produced by `forbidden` is too close to a zero.
pub fn sample_generic<F>(
    plan: &SamplePlan,
    params: &EllipticParams,
    arity: usize,
    forbidden: F,
) -> Result<Vec<Vec<C64>>>
where
    F: Fn(&[C64]) -> Vec<C64>,
{
    if plan.count == 0 || plan.retry_limit == 0 {
        return Err(EqgError::InvalidParams("count and retry_limit must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
    let mut out = Vec::with_capacity(plan.count);
    for index in 0..plan.count {
        let mut accepted = None;
        for _ in 0..plan.retry_limit {
            let pt: Vec<C64> = (0..arity)
                .map(|_| {
                    c(
                        rng.gen_range(plan.re_range.0..=plan.re_range.1),
                        rng.gen_range(plan.im_range.0..=plan.im_range.1),
                    )
                })
                .collect();
            if forbidden(&pt).into_iter().all(|a| is_admissible(a, params)) {
                accepted = Some(pt);
                break;
            }
        }
        match accepted {
            Some(p) => out.push(p),
            None => return Err(EqgError::SamplingExhausted { index, retries: plan.retry_limit }),
        }
    }
    Ok(out)
}

/// Multiples k with θ(2kη) numerically zero for 1 ≤ |k| ≤ kmax.
///
/// Module coefficients divide by such thetas, so a nonempty answer means η is
/// resonant for modules of dimension up to kmax/2.
pub fn resonant_multiples(params: &EllipticParams, kmax: usize) -> Vec<i64> {
    (1..=kmax as i64)
        .filter(|&k| !is_admissible(2.0 * k as f64 * params.eta, params))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_vanishes_at_origin() {
        let p = EllipticParams::default();
        assert!(theta(c(0.0, 0.0), &p).unwrap().norm() < 1e-12);
    }

    #[test]
    fn oddness_at_fixed_point() {
        let p = EllipticParams::default();
        let z = c(0.37, 0.21);
        assert!((p.th(-z) + p.th(z)).norm() < 1e-14);
    }

    #[test]
    fn truncation_overflow_for_tiny_im_tau() {
        let p = EllipticParams { tau: c(0.0, 1e-4), max_terms: 60, ..EllipticParams::default() };
        assert!(matches!(theta(c(0.1, 0.0), &p), Err(EqgError::TruncationOverflow { .. })));
    }

    #[test]
    fn quasiperiods_small() {
        let p = EllipticParams::default();
        for z in [c(0.1, 0.2), c(0.0, 0.0), 0.5 * p.tau] {
            let (r1, r2) = theta_quasiperiods(z, &p);
            assert!(r1 < 1e-10 && r2 < 1e-10, "{z}: {r1} {r2}");
        }
    }

    #[test]
    fn lattice_distance_examples() {
        let p = EllipticParams::new(c(0.0, 1.0), c(0.23, 0.0)).unwrap();
        assert!(near_lattice_zero(3.0 + 2.0 * p.tau, &p) < 1e-12);
        assert!((near_lattice_zero(c(0.5, 0.0), &p) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn invalid_params_rejected() {
        assert!(EllipticParams::new(c(0.3, -1.0), c(0.2, 0.0)).is_err());
        assert!(EllipticParams::new(c(0.3, 1.0), c(0.0, 0.0)).is_err());
    }

    #[test]
    fn default_eta_not_resonant() {
        assert!(resonant_multiples(&EllipticParams::default(), 16).is_empty());
        let p = EllipticParams::default().with_eta(c(0.25, 0.0));
        assert_eq!(resonant_multiples(&p, 4), vec![2, 4]);
    }
}
