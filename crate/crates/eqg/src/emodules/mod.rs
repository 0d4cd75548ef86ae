//! Modules over the elliptic quantum group: a weight-graded basis and four
//! (λ, w)-dependent operator matrices.

mod dual;
mod families;

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::elliptic_core::{EllipticParams, C64};
use crate::legs::max_abs;

pub use dual::{double_dual_prediction, dual, HConvention};
pub use families::*;

/// The four generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Gen {
    A,
    B,
    C,
    D,
}

impl Gen {
    pub const ALL: [Gen; 4] = [Gen::A, Gen::B, Gen::C, Gen::D];

    /// λ-shift of the shift operator in units of η: ã, c̃ → −2, b̃, d̃ → +2.
    pub fn sigma(self) -> f64 {
        match self {
            Gen::A | Gen::C => -2.0,
            Gen::B | Gen::D => 2.0,
        }
    }

    /// Change of h-weight caused by the generator.
    pub fn weight_shift(self) -> f64 {
        match self {
            Gen::A | Gen::D => 0.0,
            Gen::B => -2.0,
            Gen::C => 2.0,
        }
    }

    pub fn name(self) -> char {
        match self {
            Gen::A => 'a',
            Gen::B => 'b',
            Gen::C => 'c',
            Gen::D => 'd',
        }
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

pub type Evaluator = Arc<dyn Fn(Gen, C64, C64) -> DMatrix<C64> + Send + Sync>;
pub type ScalarFn = Arc<dyn Fn(C64) -> C64 + Send + Sync>;
pub type ScalarFn2 = Arc<dyn Fn(C64, C64) -> C64 + Send + Sync>;

/// Margin value of exact basis vectors: every word is trusted on them.
pub const EXACT_MARGIN: usize = usize::MAX;

/// Serializable summary of a module, used in reports.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModuleDescriptor {
    pub family: String,
    pub detail: String,
    pub dim: usize,
    pub exact: bool,
}

/// A module over the operator algebra, realized by explicit matrices.
///
/// `margins[i]` counts how many generators may act starting from basis vector
/// `i` before a truncated window could lose a component; exact modules use
/// [`EXACT_MARGIN`]. A word of length L is trusted on column i iff
/// `margins[i] >= L`.
#[derive(Clone)]
pub struct EModule {
    pub labels: Vec<String>,
    pub weights: Vec<C64>,
    pub exact: bool,
    pub margins: Vec<usize>,
    pub modular_parameter: Option<C64>,
    pub params: EllipticParams,
    pub descriptor: ModuleDescriptor,
    eval: Evaluator,
}

impl fmt::Debug for EModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EModule")
            .field("descriptor", &self.descriptor)
            .field("weights", &self.weights)
            .finish()
    }
}

impl EModule {
    /// Assembles a module from raw parts. `margins` defaults to exact.
    pub fn from_parts(
        family: &str,
        detail: String,
        weights: Vec<C64>,
        margins: Option<Vec<usize>>,
        params: EllipticParams,
        eval: Evaluator,
    ) -> Self {
        let dim = weights.len();
        let exact = margins.is_none();
        let margins = margins.unwrap_or_else(|| vec![EXACT_MARGIN; dim]);
        Self {
            labels: (0..dim).map(|k| format!("e{k}")).collect(),
            weights,
            exact,
            margins,
            modular_parameter: None,
            params,
            descriptor: ModuleDescriptor { family: family.into(), detail, dim, exact },
            eval,
        }
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn eta(&self) -> C64 {
        self.params.eta
    }

    /// Matrix of generator `g` at (λ, w).
    pub fn op(&self, g: Gen, lambda: C64, w: C64) -> DMatrix<C64> {
        (self.eval)(g, lambda, w)
    }

    pub fn evaluator(&self) -> Evaluator {
        self.eval.clone()
    }

    /// Indices on which a single generator acts faithfully.
    pub fn interior(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.margins[i] >= 1).collect()
    }

    /// Column mask for words with `len` generators.
    pub fn trusted_for(&self, len: usize) -> Vec<bool> {
        self.margins.iter().map(|&m| m >= len).collect()
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        self.labels = labels;
        self
    }

    pub fn with_modular_parameter(mut self, lambda: Option<C64>) -> Self {
        self.modular_parameter = lambda;
        self
    }

    /// Same basis and weights, new evaluator.
    pub fn with_evaluator(&self, family: &str, detail: String, eval: Evaluator) -> Self {
        let mut m = self.clone();
        m.eval = eval;
        m.descriptor.family = family.into();
        m.descriptor.detail = detail;
        m.modular_parameter = None;
        m
    }

    /// Multiplies every generator by the scalar g(w). Relations and morphisms are
    /// unaffected by such a rescaling.
    pub fn scaled(&self, g: ScalarFn) -> Self {
        let inner = self.eval.clone();
        let detail = format!("{} (rescaled)", self.descriptor.detail);
        self.with_evaluator(&self.descriptor.family.clone(), detail, Arc::new(move |gen, l, w| inner(gen, l, w) * g(w)))
    }

    /// Largest entry that violates the weight grading (a, d: 0; b: −2; c: +2).
    pub fn block_structure_residual(&self, lambda: C64, w: C64) -> f64 {
        let mut worst: f64 = 0.0;
        for g in Gen::ALL {
            let m = self.op(g, lambda, w);
            for i in 0..self.dim() {
                for j in 0..self.dim() {
                    if !self.weights_match(self.weights[i], self.weights[j] + g.weight_shift()) {
                        worst = worst.max(m[(i, j)].norm());
                    }
                }
            }
        }
        worst
    }

    /// Equality of weights modulo (1/η)ℤ.
    pub fn weights_match(&self, a: C64, b: C64) -> bool {
        let k = (a - b) * self.params.eta;
        (k - k.re.round()).norm() < 1e-9
    }

    /// Indices of basis vectors with weight equivalent to `mu`.
    pub fn weight_block(&self, mu: C64) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.weights_match(self.weights[i], mu)).collect()
    }

    pub fn projector(&self, i: usize) -> DMatrix<C64> {
        let mut p = DMatrix::zeros(self.dim(), self.dim());
        p[(i, i)] = C64::new(1.0, 0.0);
        p
    }
}

/// Which tensor-factor generators combine into each generator of V⊗W.
const TENSOR_TERMS: [[(Gen, Gen); 2]; 4] = [
    [(Gen::A, Gen::A), (Gen::B, Gen::C)],
    [(Gen::A, Gen::B), (Gen::B, Gen::D)],
    [(Gen::C, Gen::A), (Gen::D, Gen::C)],
    [(Gen::C, Gen::B), (Gen::D, Gen::D)],
];

fn gen_index(g: Gen) -> usize {
    match g {
        Gen::A => 0,
        Gen::B => 1,
        Gen::C => 2,
        Gen::D => 3,
    }
}

/// Σ_j X(λ−2ημ_j) ⊗ P_j Y(λ) where μ_j is the weight of the j-th basis vector of
/// the second factor, i.e. the weight after Y has acted.
pub(crate) fn dynamical_kron(
    x: impl Fn(C64) -> DMatrix<C64>,
    y: &DMatrix<C64>,
    w_weights: &[C64],
    lambda: C64,
    eta: C64,
) -> DMatrix<C64> {
    let dw = y.nrows();
    let mut cache: Vec<(C64, DMatrix<C64>)> = Vec::new();
    let mut out: Option<DMatrix<C64>> = None;
    for j in 0..dw {
        if y.row(j).iter().all(|v| v.norm() == 0.0) {
            continue;
        }
        let mu = w_weights[j];
        let idx = match cache.iter().position(|(m, _)| *m == mu) {
            Some(i) => i,
            None => {
                cache.push((mu, x(lambda - 2.0 * eta * mu)));
                cache.len() - 1
            }
        };
        let xm = &cache[idx].1;
        let dv = xm.nrows();
        let o = out.get_or_insert_with(|| DMatrix::zeros(dv * dw, xm.ncols() * y.ncols()));
        for a in 0..dv {
            for b in 0..xm.ncols() {
                let xab = xm[(a, b)];
                if xab.norm() == 0.0 {
                    continue;
                }
                for l in 0..y.ncols() {
                    o[(a * dw + j, b * y.ncols() + l)] += xab * y[(j, l)];
                }
            }
        }
    }
    out.unwrap_or_else(|| DMatrix::zeros(0, 0))
}

/// Tensor product V⊗W with the dynamical coproduct.
pub fn tensor(v: &EModule, w: &EModule) -> EModule {
    let (ev, ew) = (v.evaluator(), w.evaluator());
    let w_weights = w.weights.clone();
    let (dv, dw) = (v.dim(), w.dim());
    let eta = v.params.eta;
    let eval: Evaluator = Arc::new(move |g, lambda, spec| {
        let mut total = DMatrix::zeros(dv * dw, dv * dw);
        for &(xg, yg) in &TENSOR_TERMS[gen_index(g)] {
            let y = ew(yg, lambda, spec);
            let term = dynamical_kron(|l| ev(xg, l, spec), &y, &w_weights, lambda, eta);
            if term.nrows() > 0 {
                total += term;
            }
        }
        total
    });
    let weights = v.weights.iter().flat_map(|a| w.weights.iter().map(move |b| a + b)).collect();
    let margins = if v.exact && w.exact {
        None
    } else {
        Some(v.margins.iter().flat_map(|&a| w.margins.iter().map(move |&b| a.min(b))).collect())
    };
    let labels = v.labels.iter().flat_map(|a| w.labels.iter().map(move |b| format!("{a}*{b}"))).collect();
    let detail = format!("({}) x ({})", v.descriptor.detail, w.descriptor.detail);
    let modular = match (v.modular_parameter, w.modular_parameter) {
        (Some(a), Some(b)) => Some(a + b),
        _ => None,
    };
    EModule::from_parts("tensor", detail, weights, margins, v.params, eval)
        .with_labels(labels)
        .with_modular_parameter(modular)
}

/// Tensor product of several modules, left-associated.
pub fn tensor_all(mods: &[EModule]) -> EModule {
    let mut it = mods.iter();
    let first = it.next().expect("at least one factor").clone();
    it.fold(first, |acc, m| tensor(&acc, m))
}

/// Pullback along the Weyl involution: a ↦ d(−λ), b ↦ c(−λ), c ↦ b(−λ), d ↦ a(−λ).
pub fn weyl_twist(v: &EModule) -> EModule {
    let inner = v.evaluator();
    let eval: Evaluator = Arc::new(move |g, lambda, w| {
        let h = match g {
            Gen::A => Gen::D,
            Gen::B => Gen::C,
            Gen::C => Gen::B,
            Gen::D => Gen::A,
        };
        inner(h, -lambda, w)
    });
    let mut m = v.with_evaluator("weyl", format!("weyl({})", v.descriptor.detail), eval);
    m.weights = v.weights.iter().map(|x| -x).collect();
    m
}

/// The two determinant-preserving automorphisms built from a 1-periodic g.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TwistKind {
    I,
    J,
}

/// Pullback along I or J. For J, h in g(λ−2ηh…) is the weight of the output vector.
pub fn twist_auto(v: &EModule, g: ScalarFn, kind: TwistKind) -> EModule {
    let inner = v.evaluator();
    let eta = v.params.eta;
    let weights = v.weights.clone();
    let eval: Evaluator = Arc::new(move |gen, lambda, w| {
        let mut m = inner(gen, lambda, w);
        match kind {
            TwistKind::I => {
                let f = match gen {
                    Gen::A | Gen::C => g(lambda - 2.0 * eta),
                    Gen::B | Gen::D => 1.0 / g(lambda),
                };
                m *= f;
            }
            TwistKind::J => {
                for j in 0..m.ncols() {
                    let h = weights[j] + gen.weight_shift();
                    let f = match gen {
                        Gen::A | Gen::B => 1.0 / g(lambda - 2.0 * eta * h - 2.0 * eta),
                        Gen::C | Gen::D => g(lambda - 2.0 * eta * h),
                    };
                    for i in 0..m.nrows() {
                        m[(i, j)] *= f;
                    }
                }
            }
        }
        m
    });
    v.with_evaluator("twist", format!("{kind:?}({})", v.descriptor.detail), eval)
}

/// Entrywise distance of two modules' operators at a point, relative.
pub fn operator_distance(x: &EModule, y: &EModule, lambda: C64, w: C64) -> f64 {
    Gen::ALL
        .iter()
        .map(|&g| {
            let (a, b) = (x.op(g, lambda, w), y.op(g, lambda, w));
            let s = max_abs(&a).max(max_abs(&b));
            if s == 0.0 {
                0.0
            } else {
                max_abs(&(a - b)) / s
            }
        })
        .fold(0.0, f64::max)
}
