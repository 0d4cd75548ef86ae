//! Natural maps ℂ → V⊗V* and V*⊗V → ℂ, the double dual and Det on V*.

use nalgebra::DMatrix;
use serde::Serialize;

use super::{morphism_residual, Morphism};
use crate::elliptic_core::C64;
use crate::emodules::{counit, double_dual_prediction, dual, tensor, EModule, Gen, HConvention};
use crate::legs::rel_diff;
use crate::relations::determinant;

/// Σ_i e_i⊗e_i* as a column in a product of two n-dimensional factors.
fn canonical_element(n: usize) -> DMatrix<C64> {
    let mut u = DMatrix::zeros(n * n, 1);
    for i in 0..n {
        u[(i * n + i, 0)] = C64::new(1.0, 0.0);
    }
    u
}

/// ℂ → V⊗V*, 1 ↦ Σ e_i⊗e_i*.
pub fn coevaluation(v: &EModule, conv: HConvention) -> Morphism {
    let vd = dual(v, conv);
    Morphism::constant("coevaluation", counit(&v.params), tensor(v, &vd), canonical_element(v.dim()))
}

/// V*⊗V → ℂ, e_i*⊗e_j ↦ δ_ij.
pub fn evaluation(v: &EModule, conv: HConvention) -> Morphism {
    let vd = dual(v, conv);
    Morphism::constant("evaluation", tensor(&vd, v), counit(&v.params), canonical_element(v.dim()).transpose())
}

/// Worst intertwining residual of the two natural maps for one convention.
pub fn dual_pairing_residual(v: &EModule, lambda: C64, w: C64, conv: HConvention) -> f64 {
    let a = morphism_residual(&coevaluation(v, conv), lambda, w).residual;
    let b = morphism_residual(&evaluation(v, conv), lambda, w).residual;
    // NaN from a singular determinant must read as failure.
    if a.is_nan() || b.is_nan() {
        f64::INFINITY
    } else {
        a.max(b)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PairingCheck {
    pub per_convention: Vec<(HConvention, f64)>,
    /// Convention with the smallest residual.
    pub winner: HConvention,
    pub residual: f64,
}

/// Runs the pairing check under every h-substitution convention and records the best.
pub fn dual_pairing_check(v: &EModule, lambda: C64, w: C64) -> PairingCheck {
    let per_convention: Vec<(HConvention, f64)> =
        HConvention::ALL.iter().map(|&c| (c, dual_pairing_residual(v, lambda, w, c))).collect();
    let &(winner, residual) = per_convention.iter().min_by(|a, b| a.1.total_cmp(&b.1)).expect("three conventions");
    PairingCheck { per_convention, winner, residual }
}

/// dual(dual(V)) against the closed-form double-dual action, worst generator.
pub fn double_dual_residual(v: &EModule, lambda: C64, w: C64, conv: HConvention) -> f64 {
    let dd = dual(&dual(v, conv), conv);
    Gen::ALL
        .iter()
        .map(|&g| rel_diff(&dd.op(g, lambda, w), &double_dual_prediction(v, g, lambda, w)))
        .fold(0.0, |a, b| if b.is_nan() { f64::INFINITY } else { a.max(b) })
}

/// Which weight enters Det⁻¹(λ+2ηh, w) in the action of Det on V*.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DualDetWeight {
    /// h is the weight μ of e_j in V.
    Original,
    /// h is the weight −μ of e_j* in V*.
    Dual,
}

/// Det_{V*}(λ,w) against the transpose of e_j ↦ Det_V⁻¹(λ+2ηh_j, w)e_j.
pub fn det_on_dual_residual(v: &EModule, lambda: C64, w: C64, conv: HConvention, which: DualDetWeight) -> f64 {
    let vd = dual(v, conv);
    let direct = determinant(&vd, lambda, w);
    let n = v.dim();
    let mut m = DMatrix::zeros(n, n);
    for j in 0..n {
        let mu = match which {
            DualDetWeight::Original => v.weights[j],
            DualDetWeight::Dual => -v.weights[j],
        };
        let inv = determinant(v, lambda + 2.0 * v.eta() * mu, w)
            .try_inverse()
            .unwrap_or_else(|| DMatrix::from_element(n, n, C64::new(f64::NAN, f64::NAN)));
        m.set_column(j, &inv.column(j));
    }
    let r = rel_diff(&direct, &m.transpose());
    if r.is_nan() {
        f64::INFINITY
    } else {
        r
    }
}
