//! Relations for the universal generalized evaluation coefficients, as scalar identities.

use serde::Serialize;

use super::{relation_table, term_word, Factor, OperatorWord};
use crate::elliptic_core::{EllipticParams, C64};
use crate::emodules::universal_coeff;

/// Scalar value of a word on the universal module, read off on the output line h.
///
/// Walking the word left to right with running label h: a generator X first
/// moves the label to the input weight h−Δh_X, its coefficient is evaluated
/// there at the running λ, and λ then advances by σ_X. A diagonal factor sees
/// the running (λ, h).
pub fn universal_word(word: &OperatorWord, lambda: C64, h: C64, z: C64, big_lambda: C64, p: &EllipticParams) -> C64 {
    let mut value = C64::new(1.0, 0.0);
    let (mut l, mut hh) = (lambda, h);
    for f in &word.factors {
        match f {
            Factor::Diag(func) => value *= func(l, hh),
            Factor::Gen(g, w) => {
                let h_in = hh - g.weight_shift();
                let (coef, (dl, _)) = universal_coeff(*g, l, h_in, z, big_lambda, *w, p);
                value *= coef;
                l += dl;
                hh = h_in;
            }
        }
    }
    value
}

#[derive(Debug, Clone, Serialize)]
pub struct UniversalOutcome {
    pub per_relation: Vec<(String, f64)>,
    pub max: f64,
}

/// The sixteen relations as scalar identities between universal coefficients.
pub fn universal_relation_residual(
    lambda: C64,
    h: C64,
    z: C64,
    big_lambda: C64,
    w1: C64,
    w2: C64,
    p: &EllipticParams,
) -> UniversalOutcome {
    let side = |terms: &[super::Term]| -> C64 {
        terms.iter().map(|t| universal_word(&term_word(t, w1, w2, p), lambda, h, z, big_lambda, p)).sum()
    };
    let per_relation: Vec<(String, f64)> = relation_table()
        .iter()
        .map(|rel| {
            let (l, r) = (side(&rel.lhs), side(&rel.rhs));
            let scale = l.norm().max(r.norm());
            (rel.id.to_string(), if scale == 0.0 { 0.0 } else { (l - r).norm() / scale })
        })
        .collect();
    let max = per_relation.iter().map(|x| x.1).fold(0.0, f64::max);
    UniversalOutcome { per_relation, max }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic_core::c;

    #[test]
    fn generic_point() {
        let p = EllipticParams::default();
        let out = universal_relation_residual(c(0.31, 0.12), c(0.7, -0.2), c(0.1, 0.05), c(0.37, 0.1), c(0.17, 0.05), c(-0.3, 0.02), &p);
        assert!(out.max < 1e-8, "{:?}", out.per_relation);
    }
}
