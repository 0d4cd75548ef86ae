//! The quantum determinant: two closed forms, centrality, group-likeness, and
//! commutativity of the transfer operators.

use nalgebra::DMatrix;
use serde::Serialize;

use super::{combine, compare_sums, word_evaluate, Comparison, OperatorWord};

use crate::elliptic_core::C64;
use crate::emodules::{dynamical_kron, tensor, EModule, Gen};
use crate::error::{EqgError, Result};
use crate::legs::{max_abs, rel_diff};

fn det_prefactor(module: &EModule) -> impl Fn(C64, C64) -> C64 + Send + Sync + 'static {
    let p = module.params;
    move |l, h| p.th(l) / p.th(l - 2.0 * p.eta * h)
}

fn det_words(module: &EModule, w: C64, first: [Gen; 2], second: [Gen; 2]) -> [OperatorWord; 2] {
    let e2 = 2.0 * module.eta();
    let word = |gs: [Gen; 2], sign: f64| {
        let pre = det_prefactor(module);
        OperatorWord::new().diag(move |l, h| sign * pre(l, h)).gen(gs[0], w + e2).gen(gs[1], w)
    };
    [word(first, 1.0), word(second, -1.0)]
}

/// Words of θ(λ)/θ(λ−2ηh) [d(w+2η)a(w) − b(w+2η)c(w)].
pub fn determinant_words(module: &EModule, w: C64) -> [OperatorWord; 2] {
    det_words(module, w, [Gen::D, Gen::A], [Gen::B, Gen::C])
}

/// Words of θ(λ)/θ(λ−2ηh) [a(w+2η)d(w) − c(w+2η)b(w)].
pub fn determinant_words_second(module: &EModule, w: C64) -> [OperatorWord; 2] {
    det_words(module, w, [Gen::A, Gen::D], [Gen::C, Gen::B])
}

fn sum_matrix(words: &[OperatorWord], module: &EModule, lambda: C64) -> DMatrix<C64> {
    words.iter().map(|w| word_evaluate(w, module, lambda).matrix).fold(DMatrix::zeros(module.dim(), module.dim()), |a, b| a + b)
}

/// θ(λ)/θ(λ−2ηh) [d(w+2η)a(w) − b(w+2η)c(w)].
pub fn determinant(module: &EModule, lambda: C64, w: C64) -> DMatrix<C64> {
    sum_matrix(&determinant_words(module, w), module, lambda)
}

/// θ(λ)/θ(λ−2ηh) [a(w+2η)d(w) − c(w+2η)b(w)].
pub fn determinant_second_form(module: &EModule, lambda: C64, w: C64) -> DMatrix<C64> {
    sum_matrix(&determinant_words_second(module, w), module, lambda)
}

/// Agreement of the two forms on trusted columns.
pub fn determinant_forms(module: &EModule, lambda: C64, w: C64) -> Comparison {
    compare_sums(&determinant_words(module, w), &determinant_words_second(module, w), module, lambda)
        .expect("both forms have zero net shift")
}

/// The determinant, refused when it is numerically singular.
pub fn determinant_checked(module: &EModule, lambda: C64, w: C64) -> Result<DMatrix<C64>> {
    let d = determinant(module, lambda, w);
    let scale = max_abs(&d);
    let smallest = d.diagonal().iter().map(|x| x.norm()).fold(f64::INFINITY, f64::min);
    if !scale.is_finite() || smallest <= 1e-12 * scale.max(1e-300) {
        return Err(EqgError::DeterminantSingular);
    }
    Ok(d)
}

/// Worst of the four relations Det(λ,w)X(λ,w′) = X(λ,w′)Det(λ+σ_X, w), on trusted columns.
pub fn determinant_centrality(module: &EModule, lambda: C64, w: C64, w_prime: C64) -> Comparison {
    let det = determinant_words(module, w);
    combine(Gen::ALL.iter().map(|&g| {
        let x = OperatorWord::new().gen(g, w_prime);
        let left: Vec<_> = det.iter().map(|d| d.clone().then(&x)).collect();
        let right: Vec<_> = det.iter().map(|d| x.clone().then(d)).collect();
        compare_sums(&left, &right, module, lambda).expect("equal net shifts")
    }))
}

/// Det on V⊗W against Det_V(λ−2ηh⁽²⁾) ⊗ Det_W(λ).
pub fn determinant_grouplike(v: &EModule, w_mod: &EModule, lambda: C64, w: C64) -> f64 {
    let vw = tensor(v, w_mod);
    let direct = determinant(&vw, lambda, w);
    let dw = determinant(w_mod, lambda, w);
    let predicted = dynamical_kron(|l| determinant(v, l, w), &dw, &w_mod.weights, lambda, v.eta());
    rel_diff(&direct, &predicted)
}

/// Group-likeness on three factors, bracketed both ways.
pub fn determinant_grouplike3(u: &EModule, v: &EModule, w_mod: &EModule, lambda: C64, w: C64) -> f64 {
    let left = determinant_grouplike(&tensor(u, v), w_mod, lambda, w);
    let right = determinant_grouplike(u, &tensor(v, w_mod), lambda, w);
    left.max(right)
}

/// Commutators of the transfer operators a(w)+d(w) on the weight-zero block,
/// each relative to the size of its terms.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TransferReport {
    /// a(w₁)a(w₂) against a(w₂)a(w₁)
    pub aa: f64,
    pub dd: f64,
    /// Asymmetry of a(w₁)d(w₂) + d(w₁)a(w₂) under w₁ ↔ w₂.
    pub ad_symmetry: f64,
}

impl TransferReport {
    pub fn worst(&self) -> f64 {
        self.aa.max(self.dd).max(self.ad_symmetry)
    }
}

/// Transfer-operator commutation restricted to the weight-zero subspace.
pub fn transfer_commutator(module: &EModule, lambda: C64, w1: C64, w2: C64) -> Result<TransferReport> {
    let zero = module.weight_block(C64::new(0.0, 0.0));
    if zero.is_empty() {
        return Err(EqgError::EmptyWeightZero);
    }
    let pair = |a: Gen, x: C64, b: Gen, y: C64| OperatorWord::new().gen(a, x).gen(b, y);
    let on_block = |l: &[OperatorWord], r: &[OperatorWord]| -> f64 {
        let lv = super::sum_evaluate(l, module, lambda).expect("equal shifts");
        let rv = super::sum_evaluate(r, module, lambda).expect("equal shifts");
        let block = |m: &DMatrix<C64>| m.select_rows(zero.iter()).select_columns(zero.iter());
        let mask: Vec<bool> = zero.iter().map(|&j| lv.trusted[j] && rv.trusted[j]).collect();
        let floor = super::CANCELLATION_FLOOR * lv.bound.max(rv.bound);
        super::masked_comparison_floor(&block(&lv.matrix), &block(&rv.matrix), &mask, floor).residual
    };
    use Gen::{A, D};
    let aa = on_block(&[pair(A, w1, A, w2)], &[pair(A, w2, A, w1)]);
    let dd = on_block(&[pair(D, w1, D, w2)], &[pair(D, w2, D, w1)]);
    let sym = on_block(
        &[pair(A, w1, D, w2), pair(D, w1, A, w2)],
        &[pair(A, w2, D, w1), pair(D, w2, A, w1)],
    );
    Ok(TransferReport { aa, dd, ad_symmetry: sym })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic_core::{c, EllipticParams};
    use crate::emodules::finite_evaluation;

    #[test]
    fn forms_agree_on_evaluation_modules() {
        let p = EllipticParams::default();
        for n in 1..4 {
            let v = finite_evaluation(n, 0, 0, c(0.13, 0.2), &p);
            assert!(determinant_forms(&v, c(0.31, 0.12), c(0.17, 0.05)).residual < 1e-10);
        }
    }

    #[test]
    fn determinant_is_diagonal_and_central() {
        let p = EllipticParams::default();
        let v = finite_evaluation(2, 0, 0, c(0.13, 0.2), &p);
        let d = determinant(&v, c(0.31, 0.12), c(0.17, 0.05));
        let mut off = d.clone();
        off.fill_diagonal(C64::new(0.0, 0.0));
        assert!(max_abs(&off) < 1e-12 * max_abs(&d));
        assert!(determinant_centrality(&v, c(0.31, 0.12), c(0.17, 0.05), c(-0.3, 0.02)).residual < 1e-10);
    }

    #[test]
    fn transfer_needs_weight_zero() {
        let p = EllipticParams::default();
        let v = finite_evaluation(1, 0, 0, c(0.1, 0.0), &p);
        assert!(matches!(
            transfer_commutator(&v, c(0.3, 0.1), c(0.2, 0.0), c(-0.1, 0.0)),
            Err(EqgError::EmptyWeightZero)
        ));
    }
}
