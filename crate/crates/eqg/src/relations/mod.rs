//! Shift-operator words and the identity checks built on them.

mod determinant;
mod special;
mod table;
mod universal;

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;

use crate::elliptic_core::C64;
use crate::emodules::{EModule, Gen, ScalarFn2};
use crate::error::{EqgError, Result};
use crate::legs::max_abs;

pub use determinant::*;
pub use special::*;
pub use table::*;
pub use universal::*;

/// One factor of a word: a generator with its spectral parameter, or a
/// diagonal function f(λ, h̃).
#[derive(Clone)]
pub enum Factor {
    Gen(Gen, C64),
    Diag(ScalarFn2),
}

impl fmt::Debug for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::Gen(g, w) => write!(f, "{g}({w})"),
            Factor::Diag(_) => write!(f, "f(lambda,h)"),
        }
    }
}

/// Formal product of factors, leftmost first.
#[derive(Clone, Debug, Default)]
pub struct OperatorWord {
    pub factors: Vec<Factor>,
}

impl OperatorWord {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn gen(mut self, g: Gen, w: C64) -> Self {
        self.factors.push(Factor::Gen(g, w));
        self
    }

    pub fn diag(mut self, f: impl Fn(C64, C64) -> C64 + Send + Sync + 'static) -> Self {
        self.factors.push(Factor::Diag(Arc::new(f)));
        self
    }

    pub fn then(mut self, other: &OperatorWord) -> Self {
        self.factors.extend(other.factors.iter().cloned());
        self
    }

    /// Σσ over generator factors, in units of η.
    pub fn net_shift_units(&self) -> f64 {
        self.factors
            .iter()
            .map(|f| match f {
                Factor::Gen(g, _) => g.sigma(),
                Factor::Diag(_) => 0.0,
            })
            .sum()
    }

    pub fn net_shift(&self, eta: C64) -> C64 {
        self.net_shift_units() * eta
    }

    /// Number of generator factors.
    pub fn length(&self) -> usize {
        self.factors.iter().filter(|f| matches!(f, Factor::Gen(..))).count()
    }
}

/// Coefficient matrix of a word together with its λ-shift and trusted columns.
#[derive(Debug, Clone)]
pub struct WordValue {
    pub matrix: DMatrix<C64>,
    pub net_shift: C64,
    pub trusted: Vec<bool>,
    /// Product of the factor norms; bounds the size of every entry.
    pub bound: f64,
}

/// Terms smaller than this fraction of their a-priori bound are treated as
/// cancelled: comparisons are made relative to at least `CANCELLATION_FLOOR · bound`.
pub const CANCELLATION_FLOOR: f64 = 1e-4;

/// M(λ) = Π_i M_{g_i}(λ + Σ_{j<i} σ_j), multiplied right to left. A diagonal
/// factor sees the weight of the vector at its position.
pub fn word_evaluate(word: &OperatorWord, module: &EModule, lambda: C64) -> WordValue {
    let eta = module.eta();
    let mut shifts = Vec::with_capacity(word.factors.len());
    let mut s = C64::new(0.0, 0.0);
    for f in &word.factors {
        shifts.push(s);
        if let Factor::Gen(g, _) = f {
            s += g.sigma() * eta;
        }
    }
    let n = module.dim();
    let mut m = DMatrix::identity(n, n);
    let mut bound = 1.0;
    for (f, sh) in word.factors.iter().zip(&shifts).rev() {
        match f {
            Factor::Gen(g, w) => {
                let op = module.op(*g, lambda + sh, *w);
                bound *= op.norm();
                m = op * m;
            }
            Factor::Diag(func) => {
                let mut top: f64 = 0.0;
                for r in 0..n {
                    let v = func(lambda + sh, module.weights[r]);
                    top = top.max(v.norm());
                    for c in 0..n {
                        m[(r, c)] *= v;
                    }
                }
                bound *= top;
            }
        }
    }
    WordValue { matrix: m, net_shift: s, trusted: module.trusted_for(word.length()), bound }
}

/// Sum of words; all must share one net shift.
pub fn sum_evaluate(words: &[OperatorWord], module: &EModule, lambda: C64) -> Result<WordValue> {
    let mut acc: Option<WordValue> = None;
    for w in words {
        let v = word_evaluate(w, module, lambda);
        acc = Some(match acc {
            None => v,
            Some(mut a) => {
                if (a.net_shift - v.net_shift).norm() > 1e-12 {
                    return Err(EqgError::ShiftMismatch { left: a.net_shift, right: v.net_shift });
                }
                a.matrix += v.matrix;
                a.bound += v.bound;
                for (t, u) in a.trusted.iter_mut().zip(v.trusted) {
                    *t &= u;
                }
                a
            }
        });
    }
    acc.ok_or_else(|| EqgError::Mismatch("empty word sum".into()))
}

/// Relative residual between two word sums on trusted columns.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Comparison {
    pub residual: f64,
    /// Fraction of columns on which the comparison was made.
    pub coverage: f64,
}

pub fn compare_sums(
    left: &[OperatorWord],
    right: &[OperatorWord],
    module: &EModule,
    lambda: C64,
) -> Result<Comparison> {
    let l = sum_evaluate(left, module, lambda)?;
    let r = sum_evaluate(right, module, lambda)?;
    if (l.net_shift - r.net_shift).norm() > 1e-12 {
        return Err(EqgError::ShiftMismatch { left: l.net_shift, right: r.net_shift });
    }
    let mask: Vec<bool> = l.trusted.iter().zip(&r.trusted).map(|(a, b)| *a && *b).collect();
    Ok(masked_comparison_floor(&l.matrix, &r.matrix, &mask, CANCELLATION_FLOOR * l.bound.max(r.bound)))
}

/// Relative difference restricted to the columns flagged in `mask`.
pub fn masked_comparison(a: &DMatrix<C64>, b: &DMatrix<C64>, mask: &[bool]) -> Comparison {
    masked_comparison_floor(a, b, mask, 0.0)
}

/// As [`masked_comparison`], dividing by at least `floor`.
pub fn masked_comparison_floor(a: &DMatrix<C64>, b: &DMatrix<C64>, mask: &[bool], floor: f64) -> Comparison {
    let cols: Vec<usize> = (0..mask.len()).filter(|&j| mask[j]).collect();
    if cols.is_empty() {
        return Comparison { residual: 0.0, coverage: 0.0 };
    }
    let pick = |m: &DMatrix<C64>| m.select_columns(cols.iter());
    let (pa, pb) = (pick(a), pick(b));
    let scale = max_abs(&pa).max(max_abs(&pb)).max(floor);
    let diff = max_abs(&(pa - pb));
    Comparison {
        residual: if scale == 0.0 { diff } else { diff / scale },
        coverage: cols.len() as f64 / mask.len() as f64,
    }
}

/// Worst residual and worst coverage over a set of comparisons.
pub fn combine(items: impl IntoIterator<Item = Comparison>) -> Comparison {
    items.into_iter().fold(Comparison { residual: 0.0, coverage: 1.0 }, |acc, c| Comparison {
        residual: acc.residual.max(c.residual),
        coverage: acc.coverage.min(c.coverage),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic_core::{c, EllipticParams};
    use crate::emodules::finite_evaluation;

    #[test]
    fn single_generator_word() {
        let p = EllipticParams::default();
        let v = finite_evaluation(2, 0, 0, c(0.1, 0.0), &p);
        let (l, w) = (c(0.31, 0.12), c(0.17, 0.05));
        let wv = word_evaluate(&OperatorWord::new().gen(Gen::A, w), &v, l);
        assert!(crate::legs::rel_diff(&wv.matrix, &v.op(Gen::A, l, w)) < 1e-15);
        assert!((wv.net_shift + 2.0 * p.eta).norm() < 1e-15);
    }

    #[test]
    fn determinant_word_has_zero_shift() {
        let w = c(0.2, 0.0);
        let word = OperatorWord::new().gen(Gen::D, w + 0.46).gen(Gen::A, w);
        assert_eq!(word.net_shift_units(), 0.0);
    }

    #[test]
    fn mismatched_shifts_refused() {
        let p = EllipticParams::default();
        let v = finite_evaluation(1, 0, 0, c(0.1, 0.0), &p);
        let w = c(0.2, 0.0);
        let r = compare_sums(&[OperatorWord::new().gen(Gen::A, w)], &[OperatorWord::new().gen(Gen::B, w)], &v, c(0.3, 0.1));
        assert!(matches!(r, Err(EqgError::ShiftMismatch { .. })));
    }
}
