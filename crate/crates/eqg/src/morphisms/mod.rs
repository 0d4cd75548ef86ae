//! Morphisms between modules and the maps built from them: fusion, shift
//! isomorphisms, highest-weight data, singular vectors, R∨ and duality checks.

mod duality;
mod rvee;
mod singular;

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::elliptic_core::{theta_scale, EllipticParams, C64, I};
use crate::emodules::{evaluation_verma, one_dimensional, tensor, tensor_all, EModule, Gen, OneDimData};
use crate::error::{EqgError, Result};
use crate::legs::max_abs;
use crate::relations::{masked_comparison_floor, Comparison, CANCELLATION_FLOOR};

pub use duality::*;
pub use rvee::*;
pub use singular::*;

pub type PhiFn = Arc<dyn Fn(C64) -> DMatrix<C64> + Send + Sync>;

/// A λ-dependent linear map φ(λ): V → W meant to intertwine the actions.
#[derive(Clone)]
pub struct Morphism {
    pub domain: EModule,
    pub codomain: EModule,
    pub phi: PhiFn,
    pub label: String,
}

impl fmt::Debug for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Morphism")
            .field("label", &self.label)
            .field("domain", &self.domain.descriptor)
            .field("codomain", &self.codomain.descriptor)
            .finish()
    }
}

impl Morphism {
    pub fn new(label: impl Into<String>, domain: EModule, codomain: EModule, phi: PhiFn) -> Self {
        Self { domain, codomain, phi, label: label.into() }
    }

    /// A λ-independent map.
    pub fn constant(label: impl Into<String>, domain: EModule, codomain: EModule, m: DMatrix<C64>) -> Self {
        Self::new(label, domain, codomain, Arc::new(move |_| m.clone()))
    }

    pub fn identity(module: &EModule) -> Self {
        let n = module.dim();
        Self::constant("identity", module.clone(), module.clone(), DMatrix::identity(n, n))
    }

    pub fn at(&self, lambda: C64) -> DMatrix<C64> {
        (self.phi)(lambda)
    }

    /// The same map with `delta` added to entry (i, j); a negative control.
    pub fn perturbed(&self, i: usize, j: usize, delta: C64) -> Self {
        let inner = self.phi.clone();
        let phi: PhiFn = Arc::new(move |l| {
            let mut m = inner(l);
            m[(i, j)] += delta;
            m
        });
        Self::new(format!("{} (perturbed)", self.label), self.domain.clone(), self.codomain.clone(), phi)
    }

    /// |φ(λ+1) − φ(λ)| relative to |φ(λ)|.
    pub fn periodicity_residual(&self, lambda: C64) -> f64 {
        let (a, b) = (self.at(lambda), self.at(lambda + 1.0));
        max_abs(&(&b - &a)) / max_abs(&a).max(1e-300)
    }

    /// Largest entry of φ(λ) connecting different weights.
    pub fn weight_leak(&self, lambda: C64) -> f64 {
        let m = self.at(lambda);
        let mut worst: f64 = 0.0;
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                if !self.codomain.weights_match(self.codomain.weights[i], self.domain.weights[j]) {
                    worst = worst.max(m[(i, j)].norm());
                }
            }
        }
        worst
    }
}

/// Intertwining residual: φ(λ)X_V(λ,w) against X_W(λ,w)φ(λ+σ_X), worst over the four generators.
///
/// A domain column is compared only when it and every codomain vector that φ
/// sends it to lie inside their windows.
pub fn morphism_residual(m: &Morphism, lambda: C64, w: C64) -> Comparison {
    let eta = m.domain.eta();
    let mut worst = Comparison { residual: 0.0, coverage: 1.0 };
    for g in Gen::ALL {
        let p0 = m.at(lambda);
        let p1 = m.at(lambda + g.sigma() * eta);
        let xv = m.domain.op(g, lambda, w);
        let xw = m.codomain.op(g, lambda, w);
        let left = &p0 * &xv;
        let right = &xw * &p1;
        let mask: Vec<bool> = (0..m.domain.dim())
            .map(|j| {
                m.domain.margins[j] >= 1
                    && (0..m.codomain.dim())
                        .all(|i| (p0[(i, j)].norm() == 0.0 && p1[(i, j)].norm() == 0.0) || m.codomain.margins[i] >= 1)
            })
            .collect();
        let floor = CANCELLATION_FLOOR * (p0.norm() * xv.norm()).max(xw.norm() * p1.norm());
        let c = masked_comparison_floor(&left, &right, &mask, floor);
        worst = Comparison { residual: worst.residual.max(c.residual), coverage: worst.coverage.min(c.coverage) };
    }
    worst
}

fn require_theta_nonzero(x: C64, what: &str, p: &EllipticParams) -> Result<C64> {
    let t = p.th(x);
    if t.norm() < p.pole_margin * theta_scale(x, p) {
        return Err(EqgError::Resonance(format!("theta({what}) vanishes")));
    }
    Ok(t)
}

/// θ(2jη)⋯θ(2(ℓ+1)η) / (θ(2η)⋯θ(2(j−ℓ)η)); empty products are 1.
pub fn elliptic_binomial(j: usize, ell: usize, p: &EllipticParams) -> Result<C64> {
    if ell > j {
        return Err(EqgError::InvalidParams(format!("binomial index {ell} exceeds {j}")));
    }
    let mut v = C64::new(1.0, 0.0);
    for i in ell + 1..=j {
        v *= p.th(2.0 * i as f64 * p.eta);
    }
    for i in 1..=j - ell {
        v /= require_theta_nonzero(2.0 * i as f64 * p.eta, &format!("{}eta", 2 * i), p)?;
    }
    Ok(v)
}

/// The embedding V_{Λ₁+Λ₂}(z₂−Λ₁η) → V_{Λ₁}(z₁) ⊗ V_{Λ₂}(z₂), z₂ = z₁+(Λ₁+Λ₂)η,
/// e_j ↦ Σ_ℓ [j, ℓ] e_ℓ⊗e_{j−ℓ}, on Verma windows of size `window`+1.
pub fn fusion_embedding(l1: C64, l2: C64, z1: C64, window: usize, p: &EllipticParams) -> Result<Morphism> {
    let z2 = z1 + (l1 + l2) * p.eta;
    let domain = evaluation_verma(l1 + l2, z2 - l1 * p.eta, window, p)?;
    let codomain = tensor(&evaluation_verma(l1, z1, window, p)?, &evaluation_verma(l2, z2, window, p)?);
    let n = window + 1;
    let mut phi = DMatrix::zeros(n * n, n);
    for j in 0..n {
        for ell in 0..=j {
            phi[(ell * n + (j - ell), j)] = elliptic_binomial(j, ell, p)?;
        }
    }
    Ok(Morphism::constant(format!("fusion({l1}, {l2})"), domain, codomain, phi))
}

/// Which j_L, j_R to use in the ℓτ shift isomorphism.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum ShiftConstants {
    /// j_L = e^{2πi(z+(Λ+1)η)ℓ}, j_R = e^{2πi(z+3(Λ−1)η)ℓ+4πiℓ²τ}
    #[default]
    Displayed,
    /// j_L = e^{2πi(ℓ(z+(1−Λ)η) − ℓ²τ)}, j_R = e^{2πiℓ(z+(Λ+1)η)}, which make the map intertwine.
    Derived,
}

impl ShiftConstants {
    pub fn values(self, big_lambda: C64, z: C64, ell: i64, p: &EllipticParams) -> (C64, C64) {
        let (e, t, l) = (p.eta, p.tau, ell as f64);
        match self {
            ShiftConstants::Displayed => (
                (2.0 * PI * I * (z + (big_lambda + 1.0) * e) * l).exp(),
                (2.0 * PI * I * (z + 3.0 * (big_lambda - 1.0) * e) * l + 4.0 * PI * I * l * l * t).exp(),
            ),
            ShiftConstants::Derived => (
                (2.0 * PI * I * (l * (z + (1.0 - big_lambda) * e) - l * l * t)).exp(),
                (2.0 * PI * I * l * (z + (big_lambda + 1.0) * e)).exp(),
            ),
        }
    }
}

/// V_{Λ+m/η}(z) → V_Λ(z) (m ≠ 0) or V_{Λ+ℓτ/η}(z) → U_{ℓτ,j_L} ⊗ V_Λ(z) ⊗ U_{ℓτ,j_R}
/// (ℓ ≠ 0), both e_k ↦ e_k, on Verma windows.
pub fn shift_isomorphism(
    big_lambda: C64,
    z: C64,
    m: i64,
    ell: i64,
    window: usize,
    constants: ShiftConstants,
    p: &EllipticParams,
) -> Result<Morphism> {
    if m != 0 && ell != 0 {
        return Err(EqgError::InvalidParams("shift one of m, ell at a time and chain the results".into()));
    }
    let n = window + 1;
    let target = evaluation_verma(big_lambda, z, window, p)?;
    if ell == 0 {
        let source = evaluation_verma(big_lambda + m as f64 / p.eta, z, window, p)?;
        return Ok(Morphism::constant(format!("shift m={m}"), source, target, DMatrix::identity(n, n)));
    }
    let source = evaluation_verma(big_lambda + ell as f64 * p.tau / p.eta, z, window, p)?;
    let (jl, jr) = constants.values(big_lambda, z, ell, p);
    let ul = one_dimensional(&OneDimData::constant(ell, jl), p);
    let ur = one_dimensional(&OneDimData::constant(ell, jr), p);
    let codomain = tensor_all(&[ul, target, ur]);
    Ok(Morphism::constant(format!("shift ell={ell} ({constants:?})"), source, codomain, DMatrix::identity(n, n)))
}

/// One sample of the highest-weight functions.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct HwSample {
    pub lambda: C64,
    pub w: C64,
    pub a: C64,
    pub d: C64,
}

/// (Λ, A(λ,w), D(λ,w)) of a highest-weight vector.
#[derive(Debug, Clone, Serialize)]
pub struct HighestWeightData {
    pub weight: C64,
    pub samples: Vec<HwSample>,
    /// Largest c-image and off-diagonal a, d entry relative to the diagonal.
    pub singular_residual: f64,
}

/// Reads off (Λ, A, D) for basis vector `index` at each (λ, w) in `points`.
pub fn highest_weight_data(module: &EModule, index: usize, points: &[(C64, C64)]) -> Result<HighestWeightData> {
    let mut samples = Vec::with_capacity(points.len());
    let mut worst: f64 = 0.0;
    for &(lambda, w) in points {
        let a = module.op(Gen::A, lambda, w);
        let d = module.op(Gen::D, lambda, w);
        let c = module.op(Gen::C, lambda, w);
        let (av, dv) = (a[(index, index)], d[(index, index)]);
        let scale = av.norm().max(dv.norm()).max(1e-300);
        for i in 0..module.dim() {
            worst = worst.max(c[(i, index)].norm() / scale);
            if i != index {
                worst = worst.max(a[(i, index)].norm() / scale).max(d[(i, index)].norm() / scale);
            }
        }
        samples.push(HwSample { lambda, w, a: av, d: dv });
    }
    if !(worst < module.params.tol) {
        return Err(EqgError::NotSingular { residual: worst });
    }
    Ok(HighestWeightData { weight: module.weights[index], samples, singular_residual: worst })
}

/// D of a tensor product of evaluation modules with parameters (Λ_k, z_k):
/// θ(λ−2(ΣΛ_k)η)/θ(λ) · Π_k θ(z_k−w+(−Λ_k+1)η)/θ(z_k−w+(Λ_k+1)η).
pub fn product_formula_d(factors: &[(C64, C64)], lambda: C64, w: C64, p: &EllipticParams) -> C64 {
    let e = p.eta;
    let total: C64 = factors.iter().map(|f| f.0).sum();
    factors.iter().fold(p.th(lambda - 2.0 * total * e) / p.th(lambda), |acc, &(l, z)| {
        acc * p.th(z - w + (1.0 - l) * e) / p.th(z - w + (l + 1.0) * e)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic_core::c;
    use crate::emodules::finite_evaluation;

    #[test]
    fn binomial_edges() {
        let p = EllipticParams::default();
        assert_eq!(elliptic_binomial(3, 3, &p).unwrap(), C64::new(1.0, 0.0));
        assert!((elliptic_binomial(1, 0, &p).unwrap() - 1.0).norm() < 1e-14);
        let e = p.eta;
        let v = elliptic_binomial(3, 1, &p).unwrap();
        assert!((v - p.th(6.0 * e) / p.th(2.0 * e)).norm() < 1e-12);
        assert!(elliptic_binomial(1, 2, &p).is_err());
    }

    #[test]
    fn identity_has_zero_residual() {
        let p = EllipticParams::default();
        let v = finite_evaluation(2, 0, 0, c(0.1, 0.0), &p);
        assert_eq!(morphism_residual(&Morphism::identity(&v), c(0.3, 0.1), c(0.2, 0.05)).residual, 0.0);
    }

    #[test]
    fn fusion_intertwines() {
        let p = EllipticParams::default();
        let m = fusion_embedding(c(1.0, 0.0), c(2.0, 0.0), c(0.12, 0.03), 7, &p).unwrap();
        let r = morphism_residual(&m, c(0.31, 0.12), c(0.17, 0.05));
        assert!(r.residual < 1e-10, "{r:?}");
        assert!(m.weight_leak(c(0.3, 0.0)) == 0.0);
    }

    #[test]
    fn perturbation_detected() {
        let p = EllipticParams::default();
        let m = fusion_embedding(c(1.0, 0.0), c(1.0, 0.0), c(0.12, 0.03), 6, &p).unwrap();
        let bad = m.perturbed(1, 1, C64::new(1e-3, 0.0));
        assert!(morphism_residual(&bad, c(0.31, 0.12), c(0.17, 0.05)).residual > 1e-4);
    }

    #[test]
    fn hw_of_tensor_matches_product_formula() {
        let p = EllipticParams::default();
        let (z1, z2) = (c(0.13, 0.02), c(-0.3, 0.1));
        let t = tensor(&finite_evaluation(1, 0, 0, z1, &p), &finite_evaluation(2, 0, 0, z2, &p));
        let pts = [(c(0.31, 0.12), c(0.17, 0.05)), (c(-0.2, 0.05), c(0.4, -0.1))];
        let hw = highest_weight_data(&t, 0, &pts).unwrap();
        for s in &hw.samples {
            assert!((s.a - 1.0).norm() < 1e-12);
            let d = product_formula_d(&[(c(1.0, 0.0), z1), (c(2.0, 0.0), z2)], s.lambda, s.w, &p);
            assert!((s.d - d).norm() < 1e-10 * d.norm());
        }
    }
}
