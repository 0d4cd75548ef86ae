//! Coefficient functions α, β, γ, δ and the dynamical R-matrix on ℂ²⊗ℂ².
//!
//! Basis order is (++, +−, −+, −−) throughout the crate.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::elliptic_core::{is_admissible, theta_scale, EllipticParams, C64, I};
use crate::error::{EqgError, Result};
use crate::legs::{embed, max_abs, rel_diff, Spectator};

/// h-eigenvalues of v₊, v₋.
pub const SPIN_HALF_WEIGHTS: [C64; 2] = [C64::new(1.0, 0.0), C64::new(-1.0, 0.0)];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Coeffs {
    pub alpha: C64,
    pub beta: C64,
    pub gamma: C64,
    pub delta: C64,
}

impl Coeffs {
    pub fn as_array(&self) -> [C64; 4] {
        [self.alpha, self.beta, self.gamma, self.delta]
    }
}

/// α, β, γ, δ at spectral difference `w` and dynamical parameter `lambda`.
///
/// Evaluated without pole checks; see [`coeffs`] for the checked version.
pub fn coeffs_unchecked(w: C64, lambda: C64, p: &EllipticParams) -> Coeffs {
    let e = p.eta;
    let den = p.th(w - 2.0 * e) * p.th(lambda);
    let t2e = p.th(2.0 * e);
    let tw = p.th(w);
    Coeffs {
        alpha: tw * p.th(lambda + 2.0 * e) / den,
        beta: p.th(-w - lambda) * t2e / den,
        gamma: p.th(w - lambda) * t2e / den,
        delta: tw * p.th(lambda - 2.0 * e) / den,
    }
}

pub fn coeffs(w: C64, lambda: C64, p: &EllipticParams) -> Result<Coeffs> {
    for (what, arg) in [("w-2eta", w - 2.0 * p.eta), ("lambda", lambda)] {
        if !is_admissible(arg, p) {
            return Err(EqgError::Pole {
                what: what.into(),
                magnitude: p.th(arg).norm() / theta_scale(arg, p),
            });
        }
    }
    Ok(coeffs_unchecked(w, lambda, p))
}

/// A sampled value of R(λ, w).
#[derive(Debug, Clone, PartialEq)]
pub struct RValue {
    pub entries: DMatrix<C64>,
    pub lambda: C64,
    pub w: C64,
}

impl RValue {
    /// ‖[h⊗1 + 1⊗h, R]‖, zero for a weight-zero operator.
    pub fn weight_commutator(&self) -> f64 {
        let h = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            C64::new(2.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(-2.0, 0.0),
        ]));
        max_abs(&(&h * &self.entries - &self.entries * &h))
    }
}

pub fn r_unchecked(lambda: C64, w: C64, p: &EllipticParams) -> DMatrix<C64> {
    let k = coeffs_unchecked(w, lambda, p);
    let one = C64::new(1.0, 0.0);
    let mut r = DMatrix::zeros(4, 4);
    r[(0, 0)] = one;
    r[(3, 3)] = one;
    r[(1, 1)] = k.alpha;
    r[(1, 2)] = k.beta;
    r[(2, 1)] = k.gamma;
    r[(2, 2)] = k.delta;
    r
}

pub fn r_matrix(lambda: C64, w: C64, p: &EllipticParams) -> Result<RValue> {
    coeffs(w, lambda, p)?;
    Ok(RValue { entries: r_unchecked(lambda, w, p), lambda, w })
}

/// Relative residual of the dynamical Yang-Baxter equation on (ℂ²)^{⊗3}.
pub fn dybe_residual(lambda: C64, w1: C64, w2: C64, w3: C64, p: &EllipticParams) -> Result<f64> {
    for w in [w1 - w2, w1 - w3, w2 - w3] {
        coeffs(w, lambda, p)?;
    }
    let e = p.eta;
    let dims = [2, 2, 2];
    let spect = |leg| Some(Spectator { leg, weights: &SPIN_HALF_WEIGHTS });
    let r = |legs: [usize; 2], s: Option<Spectator<'_>>, w: C64| {
        embed(&dims, &legs, s, |mu| r_unchecked(lambda - 2.0 * e * mu.unwrap_or_default(), w, p))
    };
    let lhs = r([0, 1], spect(2), w1 - w2) * r([0, 2], None, w1 - w3) * r([1, 2], spect(0), w2 - w3);
    let rhs = r([1, 2], None, w2 - w3) * r([0, 2], spect(1), w1 - w3) * r([0, 1], None, w1 - w2);
    Ok(rel_diff(&lhs, &rhs))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegeneracyReport {
    pub rank_at_minus_2eta: usize,
    /// Largest overlap of a column of R(λ,−2η) with v₊⊗v₋ − v₋⊗v₊, relative to the column.
    pub image_residual: f64,
    pub kernel_contains_pp: bool,
    pub kernel_contains_mm: bool,
    pub residue_point: C64,
    /// Size of the residue; nonzero means the kernel statement is not vacuous.
    pub residue_norm: f64,
}

/// Rank of R(λ,−2η) and, at η = 1/(2N), the kernel of Res_{w=−2(N−1)η} R(λ,w).
pub fn degeneracy_report(lambda: C64, n: usize, p: &EllipticParams) -> Result<DegeneracyReport> {
    if n == 0 {
        return Err(EqgError::InvalidParams("N must be positive".into()));
    }
    let e = p.eta;
    let r = r_unchecked(lambda, -2.0 * e, p);
    let sv = r.clone().svd(false, false).singular_values;
    let smax = sv.max();
    let rank = sv.iter().filter(|&&s| s > p.tol * smax).count();
    let anti = [C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(-1.0, 0.0), C64::new(0.0, 0.0)];
    let mut image_residual: f64 = 0.0;
    for j in 0..4 {
        let col = r.column(j);
        let n2 = col.norm();
        if n2 > 0.0 {
            let overlap: C64 = (0..4).map(|i| anti[i].conj() * col[i]).sum();
            image_residual = image_residual.max(overlap.norm() / (n2 * 2f64.sqrt()));
        }
    }

    let expected = 1.0 / (2.0 * n as f64);
    if (e - expected).norm() > 1e-14 {
        return Err(EqgError::WrongEta { expected, got: e });
    }
    let pole = -2.0 * (n as f64 - 1.0) * e;
    let eps = 1e-5;
    let mut res = DMatrix::zeros(4, 4);
    for k in 0..4 {
        let dz = eps * I.powu(k);
        res += r_unchecked(lambda, pole + dz, p) * (dz / 4.0);
    }
    let residue_norm = max_abs(&res);
    let thresh = p.tol * residue_norm.max(1.0);
    Ok(DegeneracyReport {
        rank_at_minus_2eta: rank,
        image_residual,
        kernel_contains_pp: res.column(0).iter().all(|x| x.norm() < thresh),
        kernel_contains_mm: res.column(3).iter().all(|x| x.norm() < thresh),
        residue_point: pole,
        residue_norm,
    })
}

/// Rank of R(λ,−2η) alone, valid for any η.
pub fn rank_at_minus_2eta(lambda: C64, p: &EllipticParams) -> usize {
    let sv = r_unchecked(lambda, -2.0 * p.eta, p).svd(false, false).singular_values;
    let smax = sv.max();
    sv.iter().filter(|&&s| s > p.tol * smax).count()
}
