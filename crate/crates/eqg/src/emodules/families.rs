use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DMatrix;

use super::{EModule, Evaluator, Gen, ScalarFn, ScalarFn2};
use crate::elliptic_core::{theta_scale, EllipticParams, C64, I};
use crate::error::{EqgError, Result};

const ZERO: C64 = C64::new(0.0, 0.0);

/// Evaluation point: a constant, or a function of λ doubly periodic with periods 1 and 2η.
#[derive(Clone)]
pub enum ZSpec {
    Const(C64),
    Func(ScalarFn),
}

impl ZSpec {
    pub fn at(&self, lambda: C64) -> C64 {
        match self {
            ZSpec::Const(z) => *z,
            ZSpec::Func(f) => f(lambda),
        }
    }

    /// max |z(λ+1)−z(λ)|, |z(λ+2η)−z(λ)| over the given points.
    pub fn periodicity_residual(&self, eta: C64, points: &[C64]) -> f64 {
        points
            .iter()
            .map(|&l| {
                let z = self.at(l);
                (self.at(l + 1.0) - z).norm().max((self.at(l + 2.0 * eta) - z).norm())
            })
            .fold(0.0, f64::max)
    }

    fn describe(&self) -> String {
        match self {
            ZSpec::Const(z) => format!("{z}"),
            ZSpec::Func(_) => "z(lambda)".into(),
        }
    }
}

impl From<C64> for ZSpec {
    fn from(z: C64) -> Self {
        ZSpec::Const(z)
    }
}

/// Coefficient of generator `g` on the weight-h line of the universal module,
/// together with the (λ, h) shift of the corresponding shift operator.
///
/// The h-shift is the change of the weight label (b lowers it by 2); when
/// operators are composed, each coefficient is evaluated at the label of the
/// vector it acts on.
pub fn universal_coeff(
    g: Gen,
    lambda: C64,
    h: C64,
    z: C64,
    big_lambda: C64,
    w: C64,
    p: &EllipticParams,
) -> (C64, (C64, f64)) {
    let e = p.eta;
    let den = p.th(z - w + (big_lambda + 1.0) * e);
    universal_coeff_with_den(g, lambda, h, z, big_lambda, w, den, p)
}

#[allow(clippy::too_many_arguments)]
fn universal_coeff_with_den(
    g: Gen,
    lambda: C64,
    h: C64,
    z: C64,
    big_lambda: C64,
    w: C64,
    den: C64,
    p: &EllipticParams,
) -> (C64, (C64, f64)) {
    let e = p.eta;
    let tl = p.th(lambda);
    let coeff = match g {
        Gen::A => p.th(z - w + (h + 1.0) * e) / den * p.th(lambda - (h - big_lambda) * e) / tl,
        Gen::B => -p.th(-lambda + z - w + (h - 1.0) * e) / den * p.th(2.0 * e) / tl,
        Gen::C => {
            -p.th(-lambda - z + w + (h + 1.0) * e) / den * p.th((h + big_lambda + 2.0) * e) / tl
                * p.th((big_lambda - h) * e)
                / p.th(2.0 * e)
        }
        Gen::D => p.th(z - w + (-h + 1.0) * e) / den * p.th(lambda - (h + big_lambda) * e) / tl,
    };
    (coeff, (g.sigma() * e, g.weight_shift()))
}

/// Matrix of an evaluation-type generator on indices k ∈ `ks`, weight h_k = Λ−2k.
/// `coef(k)` gives the coefficient from e_k; targets outside the range are dropped.
fn banded(g: Gen, ks: &[i64], coef: impl Fn(i64) -> C64, wrap: Option<usize>) -> DMatrix<C64> {
    let n = ks.len();
    let mut m = DMatrix::zeros(n, n);
    for (i, &k) in ks.iter().enumerate() {
        let target = match g {
            Gen::A | Gen::D => Some(i as i64),
            Gen::B => Some(i as i64 + 1),
            Gen::C => Some(i as i64 - 1),
        };
        let t = match (target, wrap) {
            (Some(t), Some(nn)) => Some(t.rem_euclid(nn as i64) as usize),
            (Some(t), None) if t >= 0 && (t as usize) < n => Some(t as usize),
            _ => None,
        };
        if let Some(t) = t {
            m[(t, i)] = coef(k);
        }
    }
    m
}

/// Evaluation coefficient on e_k, expressed through the universal formulas on the line h = Λ−2k.
fn eval_coeff(g: Gen, k: i64, lambda: C64, w: C64, big_lambda: C64, z: C64, normalized: bool, p: &EllipticParams) -> C64 {
    let den = if normalized { C64::new(1.0, 0.0) } else { p.th(z - w + (big_lambda + 1.0) * p.eta) };
    let h = big_lambda - 2.0 * k as f64;
    universal_coeff_with_den(g, lambda, h, z, big_lambda, w, den, p).0
}

fn evaluation_impl(
    big_lambda: C64,
    z: ZSpec,
    dim: usize,
    truncated: bool,
    normalized: bool,
    p: &EllipticParams,
) -> EModule {
    let ks: Vec<i64> = (0..dim as i64).collect();
    let zz = z.clone();
    let pp = *p;
    let eval: Evaluator = Arc::new(move |g, lambda, w| {
        let zv = zz.at(lambda);
        banded(g, &ks, |k| eval_coeff(g, k, lambda, w, big_lambda, zv, normalized, &pp), None)
    });
    let weights = (0..dim).map(|k| big_lambda - 2.0 * k as f64).collect();
    let margins = truncated.then(|| (0..dim).map(|k| dim - 1 - k).collect());
    let family = if truncated { "verma" } else { "evaluation" };
    let norm = if normalized { ", normalized" } else { "" };
    EModule::from_parts(
        family,
        format!("Lambda={big_lambda}, z={}, dim={dim}{norm}", z.describe()),
        weights,
        margins,
        *p,
        eval,
    )
    .with_modular_parameter((!normalized).then_some(big_lambda))
}

/// The evaluation Verma module on the window e₀..e_window.
pub fn evaluation_verma(big_lambda: C64, z: impl Into<ZSpec>, window: usize, p: &EllipticParams) -> Result<EModule> {
    if window < 2 {
        return Err(EqgError::InvalidParams("window must be at least 2".into()));
    }
    Ok(evaluation_impl(big_lambda, z.into(), window + 1, true, false, p))
}

/// Evaluation module with every operator multiplied by θ(z−w+(Λ+1)η), which
/// removes the pole at w = z+(Λ+1)η. `dim` basis vectors; exact when `exact`.
pub fn evaluation_normalized(big_lambda: C64, z: C64, dim: usize, exact: bool, p: &EllipticParams) -> EModule {
    evaluation_impl(big_lambda, ZSpec::Const(z), dim, !exact, true, p)
}

/// Highest weight Λ = n + (m+ℓτ)/(2η) of the finite quotient.
pub fn finite_lambda(n: usize, m: i64, ell: i64, p: &EllipticParams) -> C64 {
    n as f64 + (m as f64 + ell as f64 * p.tau) / (2.0 * p.eta)
}

/// The (n+1)-dimensional quotient L_Λ(z), Λ = n + (m+ℓτ)/(2η).
pub fn finite_evaluation(n: usize, m: i64, ell: i64, z: impl Into<ZSpec>, p: &EllipticParams) -> EModule {
    let lam = finite_lambda(n, m, ell, p);
    evaluation_impl(lam, z.into(), n + 1, false, false, p)
}

/// Evidence that span{e_k : k > n} is invariant, plus unexpected resonances.
#[derive(Debug, Clone, PartialEq)]
pub struct QuotientCertificate {
    /// |θ(2(Λ−n)η)| relative to its series scale; zero up to rounding.
    pub invariance: f64,
    /// Indices 0 < k ≤ n where θ(2(Λ+1−k)η) also vanishes.
    pub resonant: Vec<usize>,
}

pub fn quotient_certificate(n: usize, m: i64, ell: i64, p: &EllipticParams) -> QuotientCertificate {
    let lam = finite_lambda(n, m, ell, p);
    let rel = |x: C64| p.th(x).norm() / theta_scale(x, p);
    QuotientCertificate {
        invariance: rel(2.0 * (lam - n as f64) * p.eta),
        resonant: (1..=n).filter(|&k| rel(2.0 * (lam + 1.0 - k as f64) * p.eta) < p.pole_margin).collect(),
    }
}

/// Data (ℓ, f, g, j) of a one-dimensional module with nonzero A and D.
#[derive(Clone)]
pub struct OneDimData {
    pub ell: i64,
    pub f: ScalarFn2,
    pub g: ScalarFn,
    pub j: ScalarFn,
}

impl OneDimData {
    /// U_{0,1}, the unit for the tensor product.
    pub fn unit() -> Self {
        Self::constant(0, C64::new(1.0, 0.0))
    }

    /// U_{ℓτ,j} with f = g = 1 and constant j.
    pub fn constant(ell: i64, j: C64) -> Self {
        Self {
            ell,
            f: Arc::new(|_, _| C64::new(1.0, 0.0)),
            g: Arc::new(|_| C64::new(1.0, 0.0)),
            j: Arc::new(move |_| j),
        }
    }

    pub fn a(&self, lambda: C64, w: C64) -> C64 {
        (self.f)(lambda, w) * (self.g)(lambda)
    }

    pub fn d(&self, lambda: C64, w: C64, p: &EllipticParams) -> C64 {
        let ph = (2.0 * PI * I * self.ell as f64 * (lambda - w)).exp();
        ph * (self.f)(lambda, w) * (self.j)(lambda) / (self.g)(lambda + 2.0 * p.eta)
    }

    /// Closed form of the data of self ⊗ other.
    pub fn compose(&self, other: &OneDimData, p: &EllipticParams) -> OneDimData {
        let (l1, l2) = (self.ell, other.ell);
        let shift = l2 as f64 * p.tau;
        let (f1, f2, g1, g2, j1, j2) =
            (self.f.clone(), other.f.clone(), self.g.clone(), other.g.clone(), self.j.clone(), other.j.clone());
        let pre = (-2.0 * PI * I * (l1 * l2) as f64 * p.tau).exp();
        OneDimData {
            ell: l1 + l2,
            f: Arc::new(move |l, w| f1(l - shift, w) * f2(l, w)),
            g: Arc::new(move |l| g1(l - shift) * g2(l)),
            j: Arc::new(move |l| pre * j1(l - shift) * j2(l)),
        }
    }

    /// Largest deviation from 2η-periodicity of f, j and 1-periodicity of A, D.
    pub fn periodicity_residual(&self, p: &EllipticParams, points: &[(C64, C64)]) -> f64 {
        let e2 = 2.0 * p.eta;
        let rel = |a: C64, b: C64| (a - b).norm() / a.norm().max(b.norm()).max(1e-300);
        points
            .iter()
            .map(|&(l, w)| {
                rel((self.f)(l + e2, w), (self.f)(l, w))
                    .max(rel((self.j)(l + e2), (self.j)(l)))
                    .max(rel(self.a(l + 1.0, w), self.a(l, w)))
                    .max(rel(self.d(l + 1.0, w, p), self.d(l, w, p)))
            })
            .fold(0.0, f64::max)
    }
}

/// One-dimensional module with b = c = 0, weight ℓτ/(2η).
pub fn one_dimensional(data: &OneDimData, p: &EllipticParams) -> EModule {
    let d = data.clone();
    let pp = *p;
    let eval: Evaluator = Arc::new(move |g, lambda, w| {
        let v = match g {
            Gen::A => d.a(lambda, w),
            Gen::D => d.d(lambda, w, &pp),
            Gen::B | Gen::C => ZERO,
        };
        DMatrix::from_element(1, 1, v)
    });
    let weight = data.ell as f64 * p.tau / (2.0 * p.eta);
    EModule::from_parts("one-dimensional", format!("ell={}", data.ell), vec![weight], None, *p, eval)
}

/// The counit module: a = d = 1, b = c = 0, weight 0.
pub fn counit(p: &EllipticParams) -> EModule {
    let mut m = one_dimensional(&OneDimData::unit(), p);
    m.descriptor.family = "counit".into();
    m.modular_parameter = Some(ZERO);
    m
}

/// Cyclic module on the window e_{−window}..e_{window}, weight(e_k) = Ξ−2k.
pub fn cyclic(big_lambda: C64, xi: C64, z: C64, window: usize, p: &EllipticParams) -> Result<EModule> {
    if window < 3 {
        return Err(EqgError::InvalidParams("cyclic window must be at least 3".into()));
    }
    let w_i = window as i64;
    let ks: Vec<i64> = (-w_i..=w_i).collect();
    let pp = *p;
    let ks2 = ks.clone();
    let eval: Evaluator = Arc::new(move |g, lambda, w| {
        banded(
            g,
            &ks2,
            |k| universal_coeff(g, lambda, xi - 2.0 * k as f64, z, big_lambda, w, &pp).0,
            None,
        )
    });
    let weights = ks.iter().map(|&k| xi - 2.0 * k as f64).collect();
    let margins = ks.iter().map(|&k| (w_i - k).min(k + w_i) as usize).collect();
    let labels = ks.iter().map(|k| format!("e{k}")).collect();
    Ok(EModule::from_parts(
        "cyclic",
        format!("Lambda={big_lambda}, Xi={xi}, z={z}, window={window}"),
        weights,
        Some(margins),
        *p,
        eval,
    )
    .with_labels(labels)
    .with_modular_parameter(Some(big_lambda)))
}

/// Basis change v_k = s_k e_k that makes the cyclic action N-periodic at 2Nη = 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
pub enum SignTwist {
    /// (−1)^{k(k+1)/2} for odd N and i^{k(k+1)/2} for even N.
    #[default]
    Printed,
    /// e^{iπk(k+1)/(2N)}, which works for every N.
    Uniform,
}

fn sign(k: i64, n: usize, twist: SignTwist) -> C64 {
    let t = k * (k + 1) / 2;
    match twist {
        SignTwist::Uniform => (I * PI * t as f64 / n as f64).exp(),
        SignTwist::Printed if n % 2 == 1 => C64::new(if t.rem_euclid(2) == 0 { 1.0 } else { -1.0 }, 0.0),
        SignTwist::Printed => I.powi(t.rem_euclid(4) as i32),
    }
}

fn require_special_eta(n: usize, p: &EllipticParams) -> Result<()> {
    let expected = 1.0 / (2.0 * n as f64);
    if n == 0 || (p.eta - expected).norm() > 1e-14 {
        return Err(EqgError::WrongEta { expected, got: p.eta });
    }
    Ok(())
}

/// Relative residual between twisted cyclic coefficients at k and k+N.
pub fn twisted_periodicity_residual(
    big_lambda: C64,
    xi: C64,
    z: C64,
    n: usize,
    twist: SignTwist,
    p: &EllipticParams,
    points: &[(C64, C64)],
) -> f64 {
    let ni = n as i64;
    let mut worst: f64 = 0.0;
    for &(lambda, w) in points {
        for k in 0..ni {
            for (g, dk) in [(Gen::A, 0), (Gen::D, 0), (Gen::B, 1), (Gen::C, -1)] {
                let tw = |k: i64| {
                    universal_coeff(g, lambda, xi - 2.0 * k as f64, z, big_lambda, w, p).0 * sign(k, n, twist)
                        / sign(k + dk, n, twist)
                };
                let (c0, c1) = (tw(k), tw(k + ni));
                worst = worst.max((c0 - c1).norm() / c0.norm().max(c1.norm()).max(1e-300));
            }
        }
    }
    worst
}

const PROBE_POINTS: [(C64, C64); 2] =
    [(C64::new(0.31, 0.12), C64::new(0.17, 0.05)), (C64::new(-0.23, 0.07), C64::new(0.41, -0.11))];

/// T_Λ(z) (no Ξ) or T_{Λ,Ξ}(z) at 2Nη = 1, both N-dimensional and exact.
pub fn special_t(
    big_lambda: C64,
    xi: Option<C64>,
    z: C64,
    n: usize,
    twist: SignTwist,
    p: &EllipticParams,
) -> Result<EModule> {
    require_special_eta(n, p)?;
    let Some(xi) = xi else {
        let mut m = evaluation_impl(big_lambda, ZSpec::Const(z), n, false, false, p);
        m.descriptor.family = "special-T".into();
        return Ok(m);
    };
    let residual = twisted_periodicity_residual(big_lambda, xi, z, n, twist, p, &PROBE_POINTS);
    if !(residual < p.tol) {
        return Err(EqgError::Periodicity { residual });
    }
    let ks: Vec<i64> = (0..n as i64).collect();
    let pp = *p;
    let eval: Evaluator = Arc::new(move |g, lambda, w| {
        let dk = match g {
            Gen::A | Gen::D => 0,
            Gen::B => 1,
            Gen::C => -1,
        };
        banded(
            g,
            &ks,
            |k| {
                universal_coeff(g, lambda, xi - 2.0 * k as f64, z, big_lambda, w, &pp).0 * sign(k, n, twist)
                    / sign(k + dk, n, twist)
            },
            Some(n),
        )
    });
    let weights = (0..n).map(|k| xi - 2.0 * k as f64).collect();
    Ok(EModule::from_parts(
        "special-T-cyclic",
        format!("Lambda={big_lambda}, Xi={xi}, z={z}, N={n}"),
        weights,
        None,
        *p,
        eval,
    )
    .with_modular_parameter(Some(big_lambda)))
}

/// |coefficient of c from e_N into e_{N−1}| for the Verma module at 2Nη = 1,
/// relative to the size of the neighbouring coefficient; zero certifies the quotient.
pub fn special_t_quotient_residual(big_lambda: C64, z: C64, n: usize, p: &EllipticParams) -> Result<f64> {
    require_special_eta(n, p)?;
    let (lambda, w) = PROBE_POINTS[0];
    let at = |k: i64| eval_coeff(Gen::C, k, lambda, w, big_lambda, z, false, p).norm();
    let scale = if n > 1 { at(n as i64 - 1) } else { 1.0 };
    Ok(at(n as i64) / scale.max(1e-300))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic_core::c;

    #[test]
    fn verma_highest_weight_line() {
        let p = EllipticParams::default();
        let v = evaluation_verma(c(0.37, 0.1), c(0.1, 0.05), 5, &p).unwrap();
        let (l, w) = (c(0.31, 0.12), c(0.17, 0.05));
        assert!((v.op(Gen::A, l, w)[(0, 0)] - 1.0).norm() < 1e-12);
        assert!(v.op(Gen::C, l, w).column(0).iter().all(|x| x.norm() < 1e-12));
        assert_eq!(v.margins[0], 5);
        assert_eq!(v.interior().len(), 5);
    }

    #[test]
    fn finite_dims() {
        let p = EllipticParams::default();
        for n in 0..4 {
            assert_eq!(finite_evaluation(n, 0, 0, c(0.1, 0.0), &p).dim(), n + 1);
        }
        let cert = quotient_certificate(2, 1, 1, &p);
        assert!(cert.invariance < 1e-12 && cert.resonant.is_empty());
    }

    #[test]
    fn wrong_eta_rejected() {
        let p = EllipticParams::default();
        assert!(matches!(
            special_t(c(0.3, 0.0), None, c(0.1, 0.0), 2, SignTwist::Printed, &p),
            Err(EqgError::WrongEta { .. })
        ));
    }

    #[test]
    fn printed_twist_fails_for_n_divisible_by_four() {
        let p = EllipticParams::default().with_eta(c(0.125, 0.0));
        let r = special_t(c(0.37, 0.1), Some(c(0.61, -0.2)), c(0.1, 0.0), 4, SignTwist::Printed, &p);
        assert!(matches!(r, Err(EqgError::Periodicity { .. })));
        assert!(special_t(c(0.37, 0.1), Some(c(0.61, -0.2)), c(0.1, 0.0), 4, SignTwist::Uniform, &p).is_ok());
    }
}
