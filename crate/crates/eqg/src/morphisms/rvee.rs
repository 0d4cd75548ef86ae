//! The intertwiner R∨: L_{n₁}(z₁)⊗L_{n₂}(z₂) → L_{n₂}(z₂)⊗L_{n₁}(z₁).
//!
//! The tensor product is generated by e₀⊗e₀ under b, so R∨ is fixed by
//! R∨(e₀⊗e₀) = e₀⊗e₀. For each basis vector e_k⊗e_p we pick a b-word that sends
//! e₀⊗e₀ to f·e_k⊗e_p, then the column of R∨ is that word applied in the
//! swapped product, divided by f.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{Morphism, PhiFn};
use crate::elliptic_core::{EllipticParams, C64};
use crate::emodules::{dynamical_kron, evaluation_normalized, finite_evaluation, tensor, EModule, Gen};
use crate::error::{EqgError, Result};
use crate::legs::{embed, max_abs, swap, Spectator};
use crate::relations::{word_evaluate, OperatorWord};

/// Spacing of the spectral arguments inside each run of b's.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum BStep {
    /// Arguments spaced by 4η, as displayed. Does not give an intertwiner.
    Printed4Eta,
    /// Arguments spaced by 2η: b(w−2η(k−1))⋯b(w−2η)b(w) kills all but one component.
    #[default]
    TwoEta,
}

impl BStep {
    fn units(self) -> f64 {
        match self {
            BStep::Printed4Eta => 4.0,
            BStep::TwoEta => 2.0,
        }
    }
}

/// Spectral arguments of the word reaching e_k⊗e_p, leftmost first.
fn b_arguments(n1: usize, z1: C64, n2: usize, z2: C64, k: usize, q: usize, step: C64, eta: C64) -> Vec<C64> {
    let wa = z1 + (n1 as f64 + 1.0) * eta;
    let wb = z2 + (1.0 - n2 as f64) * eta;
    let upper = (0..k).rev().map(|i| wa - step * i as f64);
    let lower = (0..q).rev().map(|i| wb + step * i as f64);
    upper.chain(lower).collect()
}

fn b_word(args: &[C64]) -> OperatorWord {
    args.iter().fold(OperatorWord::new(), |w, &x| w.gen(Gen::B, x))
}

fn e00(dim: usize) -> DVector<C64> {
    let mut v = DVector::zeros(dim);
    v[0] = C64::new(1.0, 0.0);
    v
}

struct RveeData {
    t12: EModule,
    t21: EModule,
    words: Vec<OperatorWord>,
    d2: usize,
}

impl RveeData {
    /// (f, leakage into other components) for column k·d₂+p.
    fn pivot(&self, idx: usize, lambda: C64) -> (C64, f64) {
        let v = word_evaluate(&self.words[idx], &self.t12, lambda).matrix * e00(self.t12.dim());
        let f = v[idx];
        let other = v.iter().enumerate().filter(|(i, _)| *i != idx).map(|(_, x)| x.norm()).fold(0.0, f64::max);
        (f, other)
    }

    fn matrix(&self, lambda: C64) -> DMatrix<C64> {
        let n = self.t12.dim();
        let mut phi = DMatrix::zeros(n, n);
        let start = e00(n);
        for idx in 0..n {
            let (f, _) = self.pivot(idx, lambda);
            let col = word_evaluate(&self.words[idx], &self.t21, lambda).matrix * &start / f;
            phi.set_column(idx, &col);
        }
        phi
    }
}

/// R∨ as a morphism L_{n₁}(z₁)⊗L_{n₂}(z₂) → L_{n₂}(z₂)⊗L_{n₁}(z₁).
///
/// Fails with [`EqgError::VanishingF`] when some pivot f vanishes at the
/// reference point, which happens on the resonance lattice.
pub fn r_vee(n1: usize, z1: C64, n2: usize, z2: C64, step: BStep, p: &EllipticParams) -> Result<Morphism> {
    let (d1, d2) = (n1 + 1, n2 + 1);
    let v1 = evaluation_normalized(n1 as f64 * C64::new(1.0, 0.0), z1, d1, true, p);
    let v2 = evaluation_normalized(n2 as f64 * C64::new(1.0, 0.0), z2, d2, true, p);
    let st = step.units() * p.eta;
    let mut words = Vec::with_capacity(d1 * d2);
    for k in 0..d1 {
        for q in 0..d2 {
            words.push(b_word(&b_arguments(n1, z1, n2, z2, k, q, st, p.eta)));
        }
    }
    let data = Arc::new(RveeData { t12: tensor(&v1, &v2), t21: tensor(&v2, &v1), words, d2 });
    let probe = C64::new(0.31, 0.12);
    for idx in 0..d1 * d2 {
        let (f, other) = data.pivot(idx, probe);
        if !(f.norm() > p.pole_margin * other.max(1.0)) {
            return Err(EqgError::VanishingF { k: idx / data.d2, p: idx % data.d2 });
        }
    }
    let domain = tensor(&finite_evaluation(n1, 0, 0, z1, p), &finite_evaluation(n2, 0, 0, z2, p));
    let codomain = tensor(&finite_evaluation(n2, 0, 0, z2, p), &finite_evaluation(n1, 0, 0, z1, p));
    let d = data.clone();
    let phi: PhiFn = Arc::new(move |l| d.matrix(l));
    Ok(Morphism::new(format!("Rvee({n1}, {n2}; {step:?})"), domain, codomain, phi))
}

/// Largest relative component of b-word images outside their pivot: zero when
/// every word lands on a single basis vector.
pub fn r_vee_leakage(n1: usize, z1: C64, n2: usize, z2: C64, step: BStep, lambda: C64, p: &EllipticParams) -> f64 {
    let (d1, d2) = (n1 + 1, n2 + 1);
    let v1 = evaluation_normalized(C64::new(n1 as f64, 0.0), z1, d1, true, p);
    let v2 = evaluation_normalized(C64::new(n2 as f64, 0.0), z2, d2, true, p);
    let t12 = tensor(&v1, &v2);
    let st = step.units() * p.eta;
    let mut worst: f64 = 0.0;
    for k in 0..d1 {
        for q in 0..d2 {
            let v = word_evaluate(&b_word(&b_arguments(n1, z1, n2, z2, k, q, st, p.eta)), &t12, lambda).matrix * e00(d1 * d2);
            let idx = k * d2 + q;
            let other = v.iter().enumerate().filter(|(i, _)| *i != idx).map(|(_, x)| x.norm()).fold(0.0, f64::max);
            worst = worst.max(other / v[idx].norm().max(1e-300));
        }
    }
    worst
}

/// |R∨₂₁(λ)R∨₁₂(λ) − Id|.
pub fn r_vee_inversion_residual(n1: usize, z1: C64, n2: usize, z2: C64, lambda: C64, p: &EllipticParams) -> Result<f64> {
    let a = r_vee(n1, z1, n2, z2, BStep::TwoEta, p)?.at(lambda);
    let b = r_vee(n2, z2, n1, z1, BStep::TwoEta, p)?.at(lambda);
    let n = a.nrows();
    Ok(max_abs(&(b * a - DMatrix::identity(n, n))))
}

/// R∨ on the first two of three legs: φ(λ−2ηh₃) ⊗ 1.
fn on_left(m: &Morphism, third: &EModule, lambda: C64) -> DMatrix<C64> {
    let n3 = third.dim();
    dynamical_kron(|l| m.at(l), &DMatrix::identity(n3, n3), &third.weights, lambda, m.domain.eta())
}

/// R∨ on the last two of three legs: 1 ⊗ φ(λ).
fn on_right(first: &EModule, m: &Morphism, lambda: C64) -> DMatrix<C64> {
    let n1 = first.dim();
    DMatrix::<C64>::identity(n1, n1).kronecker(&m.at(lambda))
}

/// Braid relation for R∨ on V₁⊗V₂⊗V₃ → V₃⊗V₂⊗V₁, with V_i = L_{n_i}(z_i):
/// (R∨₂₃⊗1)(1⊗R∨₁₃)(R∨₁₂⊗1) = (1⊗R∨₁₂)(R∨₁₃⊗1)(1⊗R∨₂₃).
/// Equivalent to the Yang–Baxter equation for R = P·R∨.
pub fn module_ybe_residual(factors: [(usize, C64); 3], lambda: C64, p: &EllipticParams) -> Result<f64> {
    let [(n1, z1), (n2, z2), (n3, z3)] = factors;
    let l = |n: usize, z: C64| finite_evaluation(n, 0, 0, z, p);
    let (v1, v2, v3) = (l(n1, z1), l(n2, z2), l(n3, z3));
    let r = |a: (usize, C64), b: (usize, C64)| r_vee(a.0, a.1, b.0, b.1, BStep::TwoEta, p);
    let (f1, f2, f3) = ((n1, z1), (n2, z2), (n3, z3));
    let r12 = r(f1, f2)?;
    let r13 = r(f1, f3)?;
    let r23 = r(f2, f3)?;
    let lhs = on_left(&r23, &v1, lambda) * on_right(&v2, &r13, lambda) * on_left(&r12, &v3, lambda);
    let rhs = on_right(&v3, &r12, lambda) * on_left(&r13, &v2, lambda) * on_right(&v1, &r23, lambda);
    Ok(max_abs(&(&lhs - &rhs)) / max_abs(&lhs).max(max_abs(&rhs)).max(1e-300))
}

/// Dynamical Yang–Baxter equation on V₁⊗V₂⊗V₃ for R_{V_iV_j}(λ) = R∨_{V_jV_i}(λ)·P,
/// which for two spin-½ factors is the fundamental R(λ, z_i−z_j) up to a scalar:
/// R₁₂(λ−2ηh⁽³⁾)R₁₃(λ)R₂₃(λ−2ηh⁽¹⁾) = R₂₃(λ)R₁₃(λ−2ηh⁽²⁾)R₁₂(λ).
pub fn module_dybe_residual(factors: [(usize, C64); 3], lambda: C64, p: &EllipticParams) -> Result<f64> {
    let dims: Vec<usize> = factors.iter().map(|f| f.0 + 1).collect();
    let weights: Vec<Vec<C64>> =
        factors.iter().map(|&(n, _)| (0..=n).map(|k| C64::new(n as f64 - 2.0 * k as f64, 0.0)).collect()).collect();
    let mut rs = Vec::with_capacity(3);
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let (fi, fj) = (factors[i], factors[j]);
        rs.push(((i, j), r_vee(fj.0, fj.1, fi.0, fi.1, BStep::TwoEta, p)?));
    }
    let e2 = 2.0 * p.eta;
    let place = |i: usize, j: usize, spectator: Option<usize>| {
        let m = &rs.iter().find(|(k, _)| *k == (i, j)).expect("all pairs built").1;
        let perm = swap(dims[i], dims[j]);
        let s = spectator.map(|leg| Spectator { leg, weights: &weights[leg] });
        embed(&dims, &[i, j], s, |h| m.at(lambda - e2 * h.unwrap_or_default()) * &perm)
    };
    let lhs = place(0, 1, Some(2)) * place(0, 2, None) * place(1, 2, Some(0));
    let rhs = place(1, 2, None) * place(0, 2, Some(1)) * place(0, 1, None);
    Ok(max_abs(&(&lhs - &rhs)) / max_abs(&lhs).max(max_abs(&rhs)).max(1e-300))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic_core::c;
    use crate::morphisms::morphism_residual;

    #[test]
    fn two_eta_step_intertwines() {
        let p = EllipticParams::default();
        let m = r_vee(1, c(0.13, 0.02), 2, c(-0.29, 0.11), BStep::TwoEta, &p).unwrap();
        assert!(morphism_residual(&m, c(0.31, 0.12), c(0.17, 0.05)).residual < 1e-10);
        let bad = r_vee(1, c(0.13, 0.02), 2, c(-0.29, 0.11), BStep::Printed4Eta, &p).unwrap();
        assert!(morphism_residual(&bad, c(0.31, 0.12), c(0.17, 0.05)).residual > 1e-4);
    }

    #[test]
    fn inverse_and_braid() {
        let p = EllipticParams::default();
        assert!(r_vee_inversion_residual(2, c(0.13, 0.02), 1, c(-0.29, 0.11), c(0.31, 0.12), &p).unwrap() < 1e-10);
        let f = [(1, c(0.13, 0.02)), (1, c(-0.29, 0.11)), (2, c(0.05, -0.2))];
        assert!(module_ybe_residual(f, c(0.31, 0.12), &p).unwrap() < 1e-9);
        assert!(module_dybe_residual(f, c(0.31, 0.12), &p).unwrap() < 1e-9);
    }
}
