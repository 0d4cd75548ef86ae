//! The sixteen exchange relations as data, and the checks driven by them.

use serde::Serialize;

use super::{combine, compare_sums, masked_comparison, Comparison, OperatorWord};
use crate::elliptic_core::{EllipticParams, C64};
use crate::emodules::{EModule, Gen};
use crate::legs::{embed, Spectator};
use crate::rmatrix::{coeffs_unchecked, r_unchecked, SPIN_HALF_WEIGHTS};

/// Which of α, β, γ, δ multiplies a term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoefKind {
    Alpha,
    Beta,
    Gamma,
    Delta,
}

/// Spectral slot: the generator takes w₁ or w₂.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    W1,
    W2,
}

/// coef(w₁−w₂, λ) or, when `dynamical`, coef(w₁−w₂, λ−2ηh̃), followed by two generators.
#[derive(Debug, Clone, Copy)]
pub struct Term {
    pub coef: Option<(CoefKind, bool)>,
    pub gens: [(Gen, Slot); 2],
}

#[derive(Debug, Clone)]
pub struct Relation {
    pub id: &'static str,
    pub lhs: Vec<Term>,
    pub rhs: Vec<Term>,
}

const fn t(coef: Option<(CoefKind, bool)>, g1: Gen, s1: Slot, g2: Gen, s2: Slot) -> Term {
    Term { coef, gens: [(g1, s1), (g2, s2)] }
}

/// The sixteen relations in shift-operator form.
pub fn relation_table() -> Vec<Relation> {
    use CoefKind::*;
    use Gen::*;
    use Slot::*;
    let st = |k| Some((k, false));
    let dy = |k| Some((k, true));
    vec![
        Relation { id: "a1a2", lhs: vec![t(None, A, W1, A, W2)], rhs: vec![t(None, A, W2, A, W1)] },
        Relation {
            id: "a1b2",
            lhs: vec![t(None, A, W1, B, W2)],
            rhs: vec![t(st(Alpha), B, W2, A, W1), t(st(Gamma), A, W2, B, W1)],
        },
        Relation {
            id: "b1a2",
            lhs: vec![t(None, B, W1, A, W2)],
            rhs: vec![t(st(Beta), B, W2, A, W1), t(st(Delta), A, W2, B, W1)],
        },
        Relation { id: "b1b2", lhs: vec![t(None, B, W1, B, W2)], rhs: vec![t(None, B, W2, B, W1)] },
        Relation {
            id: "c2a1",
            lhs: vec![t(dy(Beta), C, W1, A, W2), t(dy(Alpha), A, W1, C, W2)],
            rhs: vec![t(None, C, W2, A, W1)],
        },
        Relation {
            id: "c1b2+a1d2",
            lhs: vec![t(dy(Beta), C, W1, B, W2), t(dy(Alpha), A, W1, D, W2)],
            rhs: vec![t(st(Alpha), D, W2, A, W1), t(st(Gamma), C, W2, B, W1)],
        },
        Relation {
            id: "d1a2+b1c2",
            lhs: vec![t(dy(Beta), D, W1, A, W2), t(dy(Alpha), B, W1, C, W2)],
            rhs: vec![t(st(Beta), D, W2, A, W1), t(st(Delta), C, W2, B, W1)],
        },
        Relation {
            id: "d2b1",
            lhs: vec![t(dy(Beta), D, W1, B, W2), t(dy(Alpha), B, W1, D, W2)],
            rhs: vec![t(None, D, W2, B, W1)],
        },
        Relation {
            id: "a2c1",
            lhs: vec![t(dy(Delta), C, W1, A, W2), t(dy(Gamma), A, W1, C, W2)],
            rhs: vec![t(None, A, W2, C, W1)],
        },
        Relation {
            id: "c1b2+a1d2'",
            lhs: vec![t(dy(Delta), C, W1, B, W2), t(dy(Gamma), A, W1, D, W2)],
            rhs: vec![t(st(Alpha), B, W2, C, W1), t(st(Gamma), A, W2, D, W1)],
        },
        Relation {
            id: "d1a2+b1c2'",
            lhs: vec![t(dy(Delta), D, W1, A, W2), t(dy(Gamma), B, W1, C, W2)],
            rhs: vec![t(st(Beta), B, W2, C, W1), t(st(Delta), A, W2, D, W1)],
        },
        Relation {
            id: "b2d1",
            lhs: vec![t(dy(Delta), D, W1, B, W2), t(dy(Gamma), B, W1, D, W2)],
            rhs: vec![t(None, B, W2, D, W1)],
        },
        Relation { id: "c1c2", lhs: vec![t(None, C, W1, C, W2)], rhs: vec![t(None, C, W2, C, W1)] },
        Relation {
            id: "c1d2",
            lhs: vec![t(None, C, W1, D, W2)],
            rhs: vec![t(st(Alpha), D, W2, C, W1), t(st(Gamma), C, W2, D, W1)],
        },
        Relation {
            id: "d1c2",
            lhs: vec![t(None, D, W1, C, W2)],
            rhs: vec![t(st(Beta), D, W2, C, W1), t(st(Delta), C, W2, D, W1)],
        },
        Relation { id: "d1d2", lhs: vec![t(None, D, W1, D, W2)], rhs: vec![t(None, D, W2, D, W1)] },
    ]
}

fn coef_value(kind: CoefKind, w12: C64, lambda: C64, p: &EllipticParams) -> C64 {
    let k = coeffs_unchecked(w12, lambda, p);
    match kind {
        CoefKind::Alpha => k.alpha,
        CoefKind::Beta => k.beta,
        CoefKind::Gamma => k.gamma,
        CoefKind::Delta => k.delta,
    }
}

/// The word for one term: optional diagonal prefactor, then the two generators.
pub fn term_word(term: &Term, w1: C64, w2: C64, p: &EllipticParams) -> OperatorWord {
    let mut word = OperatorWord::new();
    if let Some((kind, dynamical)) = term.coef {
        let pp = *p;
        let w12 = w1 - w2;
        word = word.diag(move |l, h| {
            let arg = if dynamical { l - 2.0 * pp.eta * h } else { l };
            coef_value(kind, w12, arg, &pp)
        });
    }
    for (g, s) in term.gens {
        word = word.gen(g, if s == Slot::W1 { w1 } else { w2 });
    }
    word
}

/// Per-relation residuals together with the block-matrix form.
#[derive(Debug, Clone, Serialize)]
pub struct RllOutcome {
    pub per_relation: Vec<(String, f64)>,
    pub max: f64,
    pub block_form: f64,
    pub coverage: f64,
}

impl RllOutcome {
    /// Worst of both methods.
    pub fn worst(&self) -> f64 {
        self.max.max(self.block_form)
    }
}

/// All sixteen relations at (λ, w₁, w₂), plus the block form of the RLL relation.
pub fn rll_residual(module: &EModule, lambda: C64, w1: C64, w2: C64) -> RllOutcome {
    let p = module.params;
    let mut per = Vec::with_capacity(16);
    let mut comps = Vec::with_capacity(16);
    for rel in relation_table() {
        let words = |terms: &[Term]| terms.iter().map(|t| term_word(t, w1, w2, &p)).collect::<Vec<_>>();
        let c = compare_sums(&words(&rel.lhs), &words(&rel.rhs), module, lambda)
            .expect("relation table words share net shifts");
        per.push((rel.id.to_string(), c.residual));
        comps.push(c);
    }
    let sixteen = combine(comps);
    let block = block_form_residual(module, lambda, w1, w2);
    RllOutcome { per_relation: per, max: sixteen.residual, block_form: block.residual, coverage: sixteen.coverage.min(block.coverage) }
}

/// L(λ,w) = [[a, b], [c, d]] acting on ℂ²⊗V.
pub fn l_operator(module: &EModule, lambda: C64, w: C64) -> nalgebra::DMatrix<C64> {
    let n = module.dim();
    let mut l = nalgebra::DMatrix::zeros(2 * n, 2 * n);
    for (g, (r, c)) in [(Gen::A, (0, 0)), (Gen::B, (0, 1)), (Gen::C, (1, 0)), (Gen::D, (1, 1))] {
        l.view_mut((r * n, c * n), (n, n)).copy_from(&module.op(g, lambda, w));
    }
    l
}

/// R⁽¹²⁾(λ−2ηh⁽³⁾)L⁽¹³⁾(λ)L⁽²³⁾(λ−2ηh⁽¹⁾) versus L⁽²³⁾(λ)L⁽¹³⁾(λ−2ηh⁽²⁾)R⁽¹²⁾(λ) on ℂ²⊗ℂ²⊗V.
pub fn block_form_residual(module: &EModule, lambda: C64, w1: C64, w2: C64) -> Comparison {
    let p = module.params;
    let e = p.eta;
    let n = module.dim();
    let dims = [2, 2, n];
    let sh = |mu: Option<C64>| lambda - 2.0 * e * mu.unwrap_or_default();
    let sp = |leg| Some(Spectator { leg, weights: if leg == 2 { &module.weights[..] } else { &SPIN_HALF_WEIGHTS[..] } });
    let r_dyn = embed(&dims, &[0, 1], sp(2), |mu| r_unchecked(sh(mu), w1 - w2, &p));
    let r_st = embed(&dims, &[0, 1], None, |_| r_unchecked(lambda, w1 - w2, &p));
    let l13 = embed(&dims, &[0, 2], None, |_| l_operator(module, lambda, w1));
    let l23_dyn = embed(&dims, &[1, 2], sp(0), |mu| l_operator(module, sh(mu), w2));
    let l23 = embed(&dims, &[1, 2], None, |_| l_operator(module, lambda, w2));
    let l13_dyn = embed(&dims, &[0, 2], sp(1), |mu| l_operator(module, sh(mu), w1));
    let lhs = r_dyn * l13 * l23_dyn;
    let rhs = l23 * l13_dyn * r_st;
    let trusted = module.trusted_for(2);
    let mask: Vec<bool> = (0..4 * n).map(|i| trusted[i % n]).collect();
    masked_comparison(&lhs, &rhs, &mask)
}

/// Identities that replace the relations at w₁−w₂ = 2η, checked with w₁ = w+2η, w₂ = w.
pub fn degenerate_residual(module: &EModule, lambda: C64, w: C64) -> Comparison {
    degenerate_residual_offset(module, lambda, w, C64::new(0.0, 0.0))
}

/// The degenerate identities at w₁ = w+2η+ε; the residual should vanish linearly in ε.
pub fn degenerate_residual_offset(module: &EModule, lambda: C64, w: C64, eps: C64) -> Comparison {
    let p = module.params;
    let e = p.eta;
    let w1 = w + 2.0 * e + eps;
    let word = |pairs: &[(Gen, C64)]| pairs.iter().fold(OperatorWord::new(), |acc, &(g, x)| acc.gen(g, x));
    let th_shift = move |s: f64| move |l: C64, _h: C64| p.th(l + s * e);
    use Gen::*;
    let mut comps = Vec::new();
    let swaps = [
        ([(A, w1), (A, w)], [(A, w), (A, w1)]),
        ([(B, w1), (B, w)], [(B, w), (B, w1)]),
        ([(C, w1), (C, w)], [(C, w), (C, w1)]),
        ([(D, w1), (D, w)], [(D, w), (D, w1)]),
        ([(C, w1), (A, w)], [(A, w1), (C, w)]),
        ([(D, w1), (B, w)], [(B, w1), (D, w)]),
    ];
    for (l, r) in swaps {
        comps.push(compare_sums(&[word(&l)], &[word(&r)], module, lambda).expect("equal shifts"));
    }
    let weighted = [
        (B, A, th_shift(2.0), A, B, th_shift(-2.0)),
        (D, C, th_shift(2.0), C, D, th_shift(-2.0)),
    ];
    for (x1, x2, fl, y1, y2, fr) in weighted {
        let l = OperatorWord::new().diag(fl).gen(x1, w).gen(x2, w1);
        let r = OperatorWord::new().diag(fr).gen(y1, w).gen(y2, w1);
        comps.push(compare_sums(&[l], &[r], module, lambda).expect("equal shifts"));
    }
    comps.extend(chains(module, lambda, w, w1));
    combine(comps)
}

/// The determinant chains among the degenerate relations, each compared separately.
fn chains(module: &EModule, lambda: C64, w: C64, w1: C64) -> Vec<Comparison> {
    let p = module.params;
    let e = p.eta;
    use Gen::*;
    let g2 = |a: Gen, b: Gen| OperatorWord::new().gen(a, w1).gen(b, w);
    let neg = |wd: OperatorWord| wd.diag(|_, _| C64::new(-1.0, 0.0));
    let da = [g2(D, A), neg(g2(B, C))];
    let ad = [g2(A, D), neg(g2(C, B))];
    let first = compare_sums(&da, &ad, module, lambda).expect("equal shifts");
    let pre = move |s: f64| move |l: C64, h: C64| p.th(l - 2.0 * e * h + s * e) / p.th(l - 2.0 * e * h);
    let ratio = move |s: f64| move |l: C64, _h: C64| p.th(l + s * e) / p.th(l);
    let lhs1: Vec<OperatorWord> = da.iter().map(|x| OperatorWord::new().diag(pre(-2.0)).then(x)).collect();
    let rhs1 = [
        OperatorWord::new().diag(ratio(-2.0)).gen(A, w).gen(D, w1),
        neg(OperatorWord::new().diag(ratio(2.0)).gen(B, w).gen(C, w1)),
    ];
    let second = compare_sums(&lhs1, &rhs1, module, lambda).expect("equal shifts");
    let lhs2: Vec<OperatorWord> = ad.iter().map(|x| OperatorWord::new().diag(pre(2.0)).then(x)).collect();
    let rhs2 = [
        OperatorWord::new().diag(ratio(2.0)).gen(D, w).gen(A, w1),
        neg(OperatorWord::new().diag(ratio(-2.0)).gen(C, w).gen(B, w1)),
    ];
    let third = compare_sums(&lhs2, &rhs2, module, lambda).expect("equal shifts");
    vec![first, second, third]
}
