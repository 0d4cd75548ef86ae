//! Modular modules: quasi-periodicity in w, invariance under τ → τ+1, and the
//! τ → −1/τ transformation of module operators.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::elliptic_core::{EllipticParams, C64, I};
use crate::emodules::{evaluation_verma, EModule, Evaluator, Gen};
use crate::error::{EqgError, Result};
use crate::legs::{max_abs, rel_diff};
use crate::rmatrix::coeffs_unchecked;

/// Polynomial in (λ, h, w) with complex coefficients, keyed by exponents.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Poly(pub BTreeMap<[u8; 3], C64>);

impl Poly {
    pub fn constant(c: C64) -> Self {
        let mut m = BTreeMap::new();
        m.insert([0, 0, 0], c);
        Poly(m).pruned()
    }

    pub fn lambda() -> Self {
        Self::monomial([1, 0, 0])
    }

    pub fn h() -> Self {
        Self::monomial([0, 1, 0])
    }

    pub fn w() -> Self {
        Self::monomial([0, 0, 1])
    }

    fn monomial(e: [u8; 3]) -> Self {
        Poly(BTreeMap::from([(e, C64::new(1.0, 0.0))]))
    }

    fn pruned(mut self) -> Self {
        self.0.retain(|_, c| c.norm() > 1e-15);
        self
    }

    pub fn eval(&self, lambda: C64, h: C64, w: C64) -> C64 {
        self.0.iter().map(|(e, c)| c * lambda.powu(e[0] as u32) * h.powu(e[1] as u32) * w.powu(e[2] as u32)).sum()
    }

    pub fn coefficient(&self, e: [u8; 3]) -> C64 {
        self.0.get(&e).copied().unwrap_or_default()
    }

    pub fn scale(&self, s: C64) -> Self {
        Poly(self.0.iter().map(|(e, c)| (*e, c * s)).collect()).pruned()
    }

    /// Largest coefficient difference.
    pub fn distance(&self, other: &Poly) -> f64 {
        (self - other).0.values().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let mut m = self.0.clone();
        for (e, c) in &o.0 {
            *m.entry(*e).or_default() += c;
        }
        Poly(m).pruned()
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        self + &(-o)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(C64::new(-1.0, 0.0))
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        let mut m: BTreeMap<[u8; 3], C64> = BTreeMap::new();
        for (a, x) in &self.0 {
            for (b, y) in &o.0 {
                *m.entry([a[0] + b[0], a[1] + b[1], a[2] + b[2]]).or_default() += x * y;
            }
        }
        Poly(m).pruned()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["lambda", "h", "w"];
        let mut first = true;
        for (e, c) in &self.0 {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({:.6}{:+.6}i)", c.re, c.im)?;
            for (k, &p) in e.iter().enumerate() {
                match p {
                    0 => {}
                    1 => write!(f, "*{}", names[k])?,
                    _ => write!(f, "*{}^{p}", names[k])?,
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Which reading of the exponent A to use; B, C, D are the same in all three.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum ExponentForm {
    /// A = (h−Λ)η(−w+h+3η), as displayed.
    Printed,
    /// A = (h−Λ)η(−w+ηh+3η), reading the middle h as ηh.
    EtaH,
    /// A = η(h−Λ)(−w−λ+ηh+η), which makes the transformed module satisfy the relations.
    #[default]
    Derived,
}

impl ExponentForm {
    pub const ALL: [ExponentForm; 3] = [ExponentForm::Printed, ExponentForm::EtaH, ExponentForm::Derived];
}

/// The four exponent polynomials of the S-transformation at parameter Λ.
#[derive(Debug, Clone, PartialEq)]
pub struct ModularExponents {
    pub a: Poly,
    pub b: Poly,
    pub c: Poly,
    pub d: Poly,
    pub big_lambda: C64,
    pub form: ExponentForm,
}

impl ModularExponents {
    pub fn new(big_lambda: C64, eta: C64, form: ExponentForm) -> Self {
        let k = |x: C64| Poly::constant(x);
        let (l, h, w) = (Poly::lambda(), Poly::h(), Poly::w());
        let e = k(eta);
        let lam = k(big_lambda);
        let one = k(C64::new(1.0, 0.0));
        let half = k(C64::new(0.5, 0.0));
        let e2 = &e * &e;
        let h_minus = &h - &lam;
        let a = match form {
            ExponentForm::Printed => &(&h_minus * &e) * &(&(&(-&w) + &h) + &k(3.0 * eta)),
            ExponentForm::EtaH => &(&h_minus * &e) * &(&(&(-&w) + &(&e * &h)) + &k(3.0 * eta)),
            ExponentForm::Derived => &(&e * &h_minus) * &(&(&(&(-&w) - &l) + &(&e * &h)) + &e),
        };
        let l2e = &l + &k(2.0 * eta);
        let h1 = &h + &one;
        let lam1 = &lam + &one;
        // B = w(λ+2η−ηh+ηΛ) − (λ+2η)(h−1)η + η²((h+1)²−(Λ+1)²)/2
        let b = &(&(&w * &(&(&l2e - &(&e * &h)) + &(&e * &lam))) - &(&(&l2e * &(&h - &one)) * &e))
            + &(&(&e2 * &(&(&h1 * &h1) - &(&lam1 * &lam1))) * &half);
        // C = w(−λ+(h+Λ+2)η) + (h+1)(−ηλ+η²(h+Λ+2)) + η²(Λ−h−2)(Λ−h+2)/2
        let hl2 = &(&h + &lam) + &k(C64::new(2.0, 0.0));
        let c = &(&(&w * &(&(-&l) + &(&hl2 * &e))) + &(&h1 * &(&(-&(&e * &l)) + &(&e2 * &hl2))))
            + &(&(&e2 * &(&(&(&lam - &h) - &k(C64::new(2.0, 0.0))) * &(&(&lam - &h) + &k(C64::new(2.0, 0.0))))) * &half);
        // D = η(h+Λ)(w+ηh−λ−η)
        let d = &(&e * &(&h + &lam)) * &(&(&(&w + &(&e * &h)) - &l) - &e);
        Self { a, b, c, d, big_lambda, form }
    }

    pub fn get(&self, g: Gen) -> &Poly {
        match g {
            Gen::A => &self.a,
            Gen::B => &self.b,
            Gen::C => &self.c,
            Gen::D => &self.d,
        }
    }
}

/// Phase picked up by generator g under w → w+τ in a modular module of parameter Λ.
pub fn quasi_period_phase(g: Gen, lambda: C64, h: C64, big_lambda: C64, eta: C64) -> C64 {
    let x = match g {
        Gen::A => eta * (h - big_lambda),
        Gen::B => -lambda + eta * (h - big_lambda - 2.0),
        Gen::C => lambda - eta * (h + big_lambda + 2.0),
        Gen::D => eta * (-h - big_lambda),
    };
    (2.0 * PI * I * x).exp()
}

/// Worst of the eight quasi-periodicity identities, h the input weight, each
/// relative to max|X(λ,w)|.
pub fn modularity_residual(module: &EModule, big_lambda: C64, lambda: C64, w: C64) -> f64 {
    let p = module.params;
    let mut worst: f64 = 0.0;
    for g in Gen::ALL {
        let x = module.op(g, lambda, w);
        let scale = max_abs(&x).max(1e-300);
        worst = worst.max(max_abs(&(module.op(g, lambda, w + 1.0) - &x)) / scale);
        let mut predicted = x.clone();
        for j in 0..module.dim() {
            let ph = quasi_period_phase(g, lambda, module.weights[j], big_lambda, p.eta);
            for i in 0..module.dim() {
                predicted[(i, j)] *= ph;
            }
        }
        worst = worst.max(max_abs(&(module.op(g, lambda, w + p.tau) - predicted)) / scale);
    }
    worst
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct TauShiftReport {
    /// Evaluation-module operators at τ+1 against τ.
    pub module: f64,
    /// R-matrix coefficients at τ+1 against τ.
    pub rmatrix: f64,
    /// |θ_{τ+1}/θ_τ − 1| at a sample point; stays near |e^{πi/4} − 1|.
    pub theta_control: f64,
}

/// Compares a window-6 evaluation module and the R-matrix at τ and τ+1 over `points`.
pub fn tau_shift_invariance(p: &EllipticParams, points: &[(C64, C64)]) -> Result<TauShiftReport> {
    let q = p.with_tau(p.tau + 1.0);
    let (big_lambda, z) = (C64::new(0.37, 0.1), C64::new(0.1, 0.05));
    let v0 = evaluation_verma(big_lambda, z, 6, p)?;
    let v1 = evaluation_verma(big_lambda, z, 6, &q)?;
    let mut module: f64 = 0.0;
    let mut rmatrix: f64 = 0.0;
    for &(lambda, w) in points {
        for g in Gen::ALL {
            module = module.max(rel_diff(&v0.op(g, lambda, w), &v1.op(g, lambda, w)));
        }
        let (r0, r1) = (coeffs_unchecked(w, lambda, p).as_array(), coeffs_unchecked(w, lambda, &q).as_array());
        for (a, b) in r0.iter().zip(&r1) {
            rmatrix = rmatrix.max((a - b).norm() / a.norm().max(b.norm()).max(1e-300));
        }
    }
    let zt = C64::new(0.25, 0.1);
    let theta_control = (q.th(zt) / p.th(zt) - 1.0).norm();
    Ok(TauShiftReport { module, rmatrix, theta_control })
}

/// The parameters (−1/τ, η·(−1/τ)) on which the input of [`s_transform`] must be built.
pub fn s_dual_params(target: &EllipticParams) -> Result<EllipticParams> {
    let tp = -1.0 / target.tau;
    if !(target.tau.im > 0.0) || !(tp.im > 0.0) {
        return Err(EqgError::InvalidParams(format!("need Im tau > 0 and Im(-1/tau) > 0, got tau = {}", target.tau)));
    }
    EllipticParams { tau: tp, eta: target.eta * tp, ..*target }.validated()
}

/// Pulls a module built at (τ′, ητ′), modular with parameter Λ, back to (τ, η):
/// X(λ,w) ↦ X(τ′λ, τ′w)e^{2πiτ′P_X(λ,h,w)}, h the input weight.
pub fn s_transform(module: &EModule, big_lambda: C64, form: ExponentForm, target: &EllipticParams) -> Result<EModule> {
    let source = s_dual_params(target)?;
    if (source.tau - module.params.tau).norm() > 1e-12 || (source.eta - module.params.eta).norm() > 1e-12 {
        return Err(EqgError::InvalidParams(format!(
            "module must be built at tau' = {}, eta' = {}",
            source.tau, source.eta
        )));
    }
    let tp = source.tau;
    let exps = Arc::new(ModularExponents::new(big_lambda, target.eta, form));
    let inner = module.evaluator();
    let weights = module.weights.clone();
    let eval: Evaluator = Arc::new(move |g, lambda, w| {
        let mut x: DMatrix<C64> = inner(g, tp * lambda, tp * w);
        let poly = exps.get(g);
        for j in 0..weights.len() {
            let ph = (2.0 * PI * I * tp * poly.eval(lambda, weights[j], w)).exp();
            for i in 0..weights.len() {
                x[(i, j)] *= ph;
            }
        }
        x
    });
    let mut out = module.with_evaluator("s-transform", format!("S[{form:?}]({})", module.descriptor.detail), eval);
    out.params = *target;
    Ok(out.with_modular_parameter(Some(big_lambda)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic_core::c;

    #[test]
    fn derived_a_expands_as_expected() {
        let (lam, e) = (c(0.7, 0.1), c(0.23, 0.0));
        let a = ModularExponents::new(lam, e, ExponentForm::Derived).a;
        assert!((a.coefficient([0, 0, 0]) + e * e * lam).norm() < 1e-14);
        assert!((a.coefficient([1, 0, 0]) - e * lam).norm() < 1e-14);
        assert!((a.coefficient([0, 1, 0]) - (e * e - e * e * lam)).norm() < 1e-14);
        assert!((a.coefficient([0, 0, 1]) - e * lam).norm() < 1e-14);
        assert!((a.coefficient([0, 2, 0]) - e * e).norm() < 1e-14);
        assert!((a.coefficient([1, 1, 0]) + e).norm() < 1e-14);
        assert!((a.coefficient([0, 1, 1]) + e).norm() < 1e-14);
        assert_eq!(a.0.len(), 7);
    }

    #[test]
    fn tables_match_factored_forms() {
        let (big, e) = (c(0.7, 0.1), c(0.23, 0.05));
        let x = ModularExponents::new(big, e, ExponentForm::Printed);
        let (l, h, w) = (c(0.3, -0.2), c(1.7, 0.4), c(-0.4, 0.9));
        let a = (h - big) * e * (-w + h + 3.0 * e);
        let b = w * (l + 2.0 * e - e * h + e * big) - (l + 2.0 * e) * (h - 1.0) * e
            + e * e * ((h + 1.0).powu(2) - (big + 1.0).powu(2)) / 2.0;
        let cc = w * (-l + (h + big + 2.0) * e) + (h + 1.0) * (-e * l + e * e * (h + big + 2.0))
            + e * e * (big - h - 2.0) * (big - h + 2.0) / 2.0;
        let d = e * (h + big) * (w + e * h - l - e);
        for (poly, v) in [(&x.a, a), (&x.b, b), (&x.c, cc), (&x.d, d)] {
            assert!((poly.eval(l, h, w) - v).norm() < 1e-13);
        }
    }

    #[test]
    fn verma_is_modular() {
        let p = EllipticParams::default();
        let big = c(0.37, 0.1);
        let v = evaluation_verma(big, c(0.1, 0.0), 4, &p).unwrap();
        assert!(modularity_residual(&v, big, c(0.31, 0.12), c(0.17, 0.05)) < 1e-10);
        assert!(modularity_residual(&v, big + 0.5, c(0.31, 0.12), c(0.17, 0.05)) > 1e-3);
    }
}
