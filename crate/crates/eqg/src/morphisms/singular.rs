//! Singular vectors in L_{Λ₁}(z₁)⊗L_{Λ₂}(z₂) and the reducibility scan.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::elliptic_binomial;
use crate::elliptic_core::{nearest_lattice_point, EllipticParams, C64, I};
use crate::emodules::{finite_evaluation, tensor, EModule, Gen};
use crate::error::{EqgError, Result};
use crate::relations::{word_evaluate, OperatorWord};

/// The displayed coefficient A_ℓ(λ) for Λ₁ = n₁, Λ₂ = n₂.
pub fn singular_coefficient(ell: usize, lambda: C64, n1: usize, n2: usize, j: usize, p: &EllipticParams) -> Result<C64> {
    let e = p.eta;
    let (l1, l2, jf) = (n1 as f64, n2 as f64, j as f64);
    let mut v = elliptic_binomial(j, ell, p)?;
    for i in 0..ell {
        let (i, lf) = (i as f64, ell as f64);
        v *= p.th(-lambda + 2.0 * e * (l1 + l2 - 2.0 * jf + lf - i + 1.0)) / p.th(-lambda + 2.0 * e * (-jf + lf - i));
    }
    let mut den = C64::new(1.0, 0.0);
    for i in 0..ell {
        den *= p.th(2.0 * (l1 - i as f64) * e);
    }
    for i in 0..j - ell {
        den *= p.th(2.0 * (l2 - i as f64) * e);
    }
    if den.norm() < p.pole_margin {
        return Err(EqgError::Resonance("singular-vector denominator vanishes".into()));
    }
    Ok(v / den)
}

/// Which coefficients to put on e_ℓ⊗e_{j−ℓ}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CoefficientForm {
    /// (−1)^ℓ A_ℓ(λ) exactly as displayed.
    Displayed,
    /// The displayed coefficients times e^{2πiL(ℓλ + 2η(ℓ(2j−n₂−1) − ℓ²))}, L the τ-label
    /// of the resonance. Identical to `Displayed` when L = 0.
    PhaseCorrected,
}

/// The vector Σ_ℓ (−1)^ℓ A_ℓ e_ℓ⊗e_{j−ℓ} in L_{n₁}(z₁)⊗L_{n₂}(z₂) with
/// z₁−z₂ = (n₁+n₂−2j+2)η + m + Lτ.
#[derive(Debug, Clone)]
pub struct SingularVector {
    pub module: EModule,
    pub n1: usize,
    pub n2: usize,
    pub j: usize,
    pub m: i64,
    pub tau_label: i64,
    pub z1: C64,
    pub z2: C64,
    pub weight: C64,
    params: EllipticParams,
}

impl SingularVector {
    /// Basis indices of e_ℓ⊗e_{j−ℓ}, ℓ = 0..=j.
    pub fn support(&self) -> Vec<usize> {
        (0..=self.j).map(|l| l * (self.n2 + 1) + (self.j - l)).collect()
    }

    /// Σ(−1)^ℓ A_ℓ(λ) e_ℓ⊗e_{j−ℓ} in the chosen form; spans ker c(λ, ·) on its weight block.
    pub fn vector(&self, lambda: C64, form: CoefficientForm) -> Result<DVector<C64>> {
        let p = &self.params;
        let big_l = self.tau_label as f64;
        let a = 2.0 * self.j as f64 - self.n2 as f64 - 1.0;
        let mut v = DVector::zeros(self.module.dim());
        for (l, idx) in self.support().into_iter().enumerate() {
            let lf = l as f64;
            let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
            let mut x = sign * singular_coefficient(l, lambda, self.n1, self.n2, self.j, p)?;
            if form == CoefficientForm::PhaseCorrected && self.tau_label != 0 {
                x *= (2.0 * PI * I * big_l * (lf * lambda + 2.0 * p.eta * (lf * a - lf * lf))).exp();
            }
            v[idx] = x;
        }
        Ok(v)
    }

    /// The displayed vector.
    pub fn displayed(&self, lambda: C64) -> Result<DVector<C64>> {
        self.vector(lambda, CoefficientForm::Displayed)
    }

    /// The element v of Fun(V) with c̃(w)v = 0: v(λ) is the corrected vector at λ+2η.
    pub fn at(&self, lambda: C64) -> Result<DVector<C64>> {
        self.vector(lambda + 2.0 * self.params.eta, CoefficientForm::PhaseCorrected)
    }

    /// |(c̃(w)v)(λ)| = |c(λ,w) v(λ−2η)| relative to |c(λ,w)|·|v(λ−2η)|.
    pub fn annihilation_residual(&self, lambda: C64, w: C64) -> Result<f64> {
        self.residual_with(CoefficientForm::PhaseCorrected, true, lambda, w)
    }

    /// Annihilation residual for a given coefficient form, with or without the
    /// λ+2η argument shift. Without the shift this reads the display literally.
    pub fn residual_with(&self, form: CoefficientForm, shifted: bool, lambda: C64, w: C64) -> Result<f64> {
        let arg = if shifted { lambda } else { lambda - 2.0 * self.params.eta };
        let v = self.vector(arg, form)?;
        let c = self.module.op(Gen::C, lambda, w);
        Ok((&c * &v).norm() / (c.norm() * v.norm()).max(1e-300))
    }
}

/// Builds the resonant tensor product and its singular vector.
pub fn singular_vector(n1: usize, n2: usize, z1: C64, j: usize, m: i64, tau_label: i64, p: &EllipticParams) -> Result<SingularVector> {
    if j == 0 || j > n1.min(n2) {
        return Err(EqgError::InvalidParams(format!("need 0 < j <= min(n1, n2), got j = {j}")));
    }
    let z2 = z1 - ((n1 + n2) as f64 - 2.0 * j as f64 + 2.0) * p.eta - m as f64 - tau_label as f64 * p.tau;
    let module = tensor(&finite_evaluation(n1, 0, 0, z1, p), &finite_evaluation(n2, 0, 0, z2, p));
    let weight = C64::new((n1 + n2) as f64 - 2.0 * j as f64, 0.0);
    Ok(SingularVector { module, n1, n2, j, m, tau_label, z1, z2, weight, params: *p })
}

/// Numerical kernel of c(λ, w_i), stacked over `ws`, on the weight-μ block.
#[derive(Debug, Clone)]
pub struct NullspaceOracle {
    pub block: Vec<usize>,
    /// Singular values divided by the largest, ascending.
    pub relative_singular_values: Vec<f64>,
    /// Right singular vector for the smallest singular value, embedded in the full space.
    pub kernel_vector: DVector<C64>,
}

impl NullspaceOracle {
    /// Number of relative singular values below `tol`.
    pub fn dimension(&self, tol: f64) -> usize {
        self.relative_singular_values.iter().filter(|&&s| s < tol).count()
    }
}

pub fn c_nullspace(module: &EModule, weight: C64, lambda: C64, ws: &[C64]) -> NullspaceOracle {
    let block = module.weight_block(weight);
    let up = module.weight_block(weight + 2.0);
    let rows = up.len().max(1) * ws.len();
    let mut stack = DMatrix::zeros(rows, block.len());
    if !up.is_empty() {
        for (k, &w) in ws.iter().enumerate() {
            let c = module.op(Gen::C, lambda, w);
            for (r, &i) in up.iter().enumerate() {
                for (s, &j) in block.iter().enumerate() {
                    stack[(k * up.len() + r, s)] = c[(i, j)];
                }
            }
        }
    }
    let n = block.len();
    // Pad to at least n rows so the SVD exposes all n singular values.
    let stack = if stack.nrows() < n {
        let mut padded = DMatrix::zeros(n, n);
        padded.view_mut((0, 0), (stack.nrows(), n)).copy_from(&stack);
        padded
    } else {
        stack
    };
    let svd = stack.svd(false, true);
    let sv = svd.singular_values.clone();
    let vt = svd.v_t.expect("requested");
    let top = sv.max().max(1e-300);
    let (imin, _) = sv.iter().enumerate().fold((0, f64::INFINITY), |acc, (i, &s)| if s < acc.1 { (i, s) } else { acc });
    let mut rel: Vec<f64> = sv.iter().map(|s| s / top).collect();
    rel.sort_by(|a, b| a.total_cmp(b));
    let mut kernel = DVector::zeros(module.dim());
    for (s, &j) in block.iter().enumerate() {
        kernel[j] = vt[(imin, s)].conj();
    }
    NullspaceOracle { block, relative_singular_values: rel, kernel_vector: kernel }
}

/// Relative deviation between two vectors after optimal complex rescaling of `b`.
pub fn projective_distance(a: &DVector<C64>, b: &DVector<C64>) -> f64 {
    let denom: C64 = b.dotc(b);
    if denom.norm() == 0.0 {
        return if a.norm() == 0.0 { 0.0 } else { 1.0 };
    }
    let s = b.dotc(a) / denom;
    (a - b * s).norm() / a.norm().max(1e-300)
}

/// Which of the two resonance families a point belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Branch {
    /// z₁−z₂ on the lattice: a singular vector below the top.
    Z1MinusZ2,
    /// z₂−z₁ on the lattice: e₀⊗e₀ generates a proper submodule.
    Z2MinusZ1,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResonanceLabel {
    pub j: usize,
    pub m: i64,
    pub ell: i64,
    pub branch: Branch,
}

/// Labels (j, m, ℓ, branch) with ±(z₁−z₂) − (n₁+n₂−2j+2)η within `tol` of m + ℓτ.
pub fn resonance_labels(n1: usize, n2: usize, delta: C64, tol: f64, p: &EllipticParams) -> Vec<ResonanceLabel> {
    let mut out = Vec::new();
    for j in 1..=n1.min(n2) {
        let shift = ((n1 + n2) as f64 - 2.0 * j as f64 + 2.0) * p.eta;
        for (branch, d) in [(Branch::Z1MinusZ2, delta), (Branch::Z2MinusZ1, -delta)] {
            let (m, ell, dist) = nearest_lattice_point(d - shift, p);
            if dist < tol {
                out.push(ResonanceLabel { j, m, ell, branch });
            }
        }
    }
    out
}

/// Smallest relative singular value of the span of b(w₁)⋯b(w_j)(e₀⊗e₀) over
/// several spectral tuples, on the weight block reached. Zero means e₀⊗e₀
/// generates a proper submodule.
pub fn generated_rank_gap(module: &EModule, depth: usize, lambda: C64, tuples: &[Vec<C64>]) -> f64 {
    let top_weight = module.weights[0];
    let block = module.weight_block(top_weight - 2.0 * depth as f64);
    if block.is_empty() {
        return 1.0;
    }
    let mut cols = DMatrix::zeros(block.len(), tuples.len());
    for (t, ws) in tuples.iter().enumerate() {
        let word = ws.iter().fold(OperatorWord::new(), |acc, &w| acc.gen(Gen::B, w));
        let m = word_evaluate(&word, module, lambda).matrix;
        for (r, &i) in block.iter().enumerate() {
            cols[(r, t)] = m[(i, 0)];
        }
    }
    let sv = cols.svd(false, false).singular_values;
    let top = sv.max();
    if top == 0.0 {
        return 0.0;
    }
    let rank_needed = block.len();
    let mut s: Vec<f64> = sv.iter().map(|x| x / top).collect();
    s.sort_by(|a, b| b.total_cmp(a));
    if s.len() < rank_needed {
        0.0
    } else {
        s[rank_needed - 1]
    }
}

/// Outcome at one grid point of the reducibility scan.
#[derive(Debug, Clone, Serialize)]
pub struct ScanPoint {
    /// z₁−z₂
    pub delta: C64,
    /// Per j: smallest relative singular value of the c-stack on weight n₁+n₂−2j.
    pub singular_gaps: Vec<f64>,
    /// Per j: rank gap of the span generated from e₀⊗e₀ at depth j; only the
    /// first vanishing depth counts as a detection.
    pub generated_gaps: Vec<f64>,
    pub detected: Vec<(usize, Branch)>,
    pub labels: Vec<ResonanceLabel>,
    /// Detections agree with the predicted labels.
    pub consistent: bool,
}

/// Fixed spectral samples for the detectors.
fn detector_ws(count: usize) -> Vec<C64> {
    (0..count).map(|k| C64::new(0.17 + 0.113 * k as f64, 0.05 - 0.037 * k as f64)).collect()
}

/// Scans z₁−z₂ over `deltas` for L_{n₁}(z₁)⊗L_{n₂}(z₁−δ) and compares the
/// detected reducibility against the predicted lattice.
pub fn scan_reducibility(n1: usize, n2: usize, z1: C64, deltas: &[C64], detect_tol: f64, p: &EllipticParams) -> Vec<ScanPoint> {
    let lambda = C64::new(0.31, 0.12);
    let ws = detector_ws(6);
    deltas
        .iter()
        .map(|&delta| {
            let module = tensor(&finite_evaluation(n1, 0, 0, z1, p), &finite_evaluation(n2, 0, 0, z1 - delta, p));
            let jmax = n1.min(n2);
            let mut singular_gaps = Vec::with_capacity(jmax);
            let mut generated_gaps = Vec::with_capacity(jmax);
            let mut detected = Vec::new();
            for j in 1..=jmax {
                let weight = C64::new((n1 + n2) as f64 - 2.0 * j as f64, 0.0);
                let ns = c_nullspace(&module, weight, lambda, &ws);
                let sg = ns.relative_singular_values.first().copied().unwrap_or(1.0);
                let block = module.weight_block(weight).len();
                let tuples: Vec<Vec<C64>> = (0..2 * block + 2)
                    .map(|t| (0..j).map(|i| ws[(t + 2 * i) % ws.len()] + C64::new(0.071 * t as f64, 0.0)).collect())
                    .collect();
                let gg = generated_rank_gap(&module, j, lambda, &tuples);
                if sg < detect_tol {
                    detected.push((j, Branch::Z1MinusZ2));
                }
                // Once e₀⊗e₀ fails to generate at depth j it fails at every greater depth.
                if gg < detect_tol && !detected.iter().any(|d| d.1 == Branch::Z2MinusZ1) {
                    detected.push((j, Branch::Z2MinusZ1));
                }
                singular_gaps.push(sg);
                generated_gaps.push(gg);
            }
            let labels = resonance_labels(n1, n2, delta, 1e-9, p);
            let mut predicted: Vec<(usize, Branch)> = labels.iter().map(|l| (l.j, l.branch)).collect();
            predicted.sort_by_key(|x| (x.0, x.1 as u8));
            let mut found = detected.clone();
            found.sort_by_key(|x| (x.0, x.1 as u8));
            ScanPoint { delta, singular_gaps, generated_gaps, consistent: found == predicted, detected, labels }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic_core::c;

    #[test]
    fn annihilated_with_shift() {
        let p = EllipticParams::default();
        let sv = singular_vector(2, 2, c(0.13, 0.02), 1, 0, 0, &p).unwrap();
        assert!(sv.annihilation_residual(c(0.31, 0.12), c(0.17, 0.05)).unwrap() < 1e-10);
        assert!(sv.residual_with(CoefficientForm::Displayed, false, c(0.31, 0.12), c(0.17, 0.05)).unwrap() > 1e-4);
    }

    #[test]
    fn tau_resonance_needs_phase() {
        let p = EllipticParams::default();
        let sv = singular_vector(3, 2, c(0.13, 0.02), 2, 0, 1, &p).unwrap();
        let (l, w) = (c(0.31, 0.12), c(0.17, 0.05));
        assert!(sv.annihilation_residual(l, w).unwrap() < 1e-10);
        assert!(sv.residual_with(CoefficientForm::Displayed, true, l, w).unwrap() > 1e-4);
    }

    #[test]
    fn labels_for_fusion_point() {
        let p = EllipticParams::default();
        let labels = resonance_labels(1, 1, -2.0 * p.eta, 1e-9, &p);
        assert_eq!(labels, vec![ResonanceLabel { j: 1, m: 0, ell: 0, branch: Branch::Z2MinusZ1 }]);
    }
}
