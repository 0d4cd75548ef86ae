use std::sync::Arc;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{EModule, Evaluator, Gen};
use crate::elliptic_core::C64;
use crate::relations::determinant;

/// How h is resolved in antipode expressions such as b(λ+2ηh−2η, w+2η).
///
/// `Positional` reads h from the vector at the position of each factor: the
/// theta prefactor and Det⁻¹ stand left of the operator and see its output
/// weight, the operator argument sees the input weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum HConvention {
    Input,
    Output,
    #[default]
    Positional,
}

impl HConvention {
    pub const ALL: [HConvention; 3] = [HConvention::Input, HConvention::Output, HConvention::Positional];

    /// (prefactor/Det weight, operator-argument weight)
    fn pick(self, mu_in: C64, mu_out: C64) -> (C64, C64) {
        match self {
            HConvention::Input => (mu_in, mu_in),
            HConvention::Output => (mu_out, mu_out),
            HConvention::Positional => (mu_out, mu_in),
        }
    }
}

fn inverse_or_nan(m: DMatrix<C64>) -> DMatrix<C64> {
    let n = m.nrows();
    m.try_inverse().unwrap_or_else(|| DMatrix::from_element(n, n, C64::new(f64::NAN, f64::NAN)))
}

/// The dual module V*: operators are transposes of the antipode images, weights negated.
///
/// A numerically singular determinant yields NaN entries, which every residual
/// check reports as a failure.
pub fn dual(v: &EModule, conv: HConvention) -> EModule {
    let base = v.clone();
    let eta = v.params.eta;
    let p = v.params;
    let eval: Evaluator = Arc::new(move |g, lambda, w| {
        let n = base.dim();
        let e2 = 2.0 * eta;
        let mut s = DMatrix::zeros(n, n);
        // Cache Det⁻¹(x, w) per distinct shifted argument.
        let mut cache: Vec<(C64, DMatrix<C64>)> = Vec::new();
        let mut det_inv = |x: C64| -> DMatrix<C64> {
            if let Some((_, m)) = cache.iter().find(|(y, _)| *y == x) {
                return m.clone();
            }
            let m = inverse_or_nan(determinant(&base, x, w));
            cache.push((x, m.clone()));
            m
        };
        for j in 0..n {
            let mu_in = base.weights[j];
            let mu_out = mu_in + g.weight_shift();
            let (h_pre, h_arg) = conv.pick(mu_in, mu_out);
            let col = match g {
                Gen::A => {
                    let x = lambda + e2 * mu_in - e2;
                    (det_inv(x) * base.op(Gen::D, x, w + e2).column(j)) * (p.th(x) / p.th(lambda - e2))
                }
                Gen::D => {
                    let x = lambda + e2 * mu_in + e2;
                    (det_inv(x) * base.op(Gen::A, x, w + e2).column(j)) * (p.th(x) / p.th(lambda + e2))
                }
                Gen::B => {
                    let x = lambda + e2 * h_pre + e2;
                    let y = lambda + e2 * h_arg - e2;
                    (det_inv(x) * base.op(Gen::B, y, w + e2).column(j)) * (-p.th(x) / p.th(lambda + e2))
                }
                Gen::C => {
                    let x = lambda + e2 * h_pre - e2;
                    let y = lambda + e2 * h_arg + e2;
                    (det_inv(x) * base.op(Gen::C, y, w + e2).column(j)) * (-p.th(x) / p.th(lambda - e2))
                }
            };
            s.set_column(j, &col);
        }
        s.transpose()
    });
    let mut m = v.with_evaluator("dual", format!("dual({})", v.descriptor.detail), eval);
    m.weights = v.weights.iter().map(|x| -x).collect();
    m.labels = v.labels.iter().map(|l| format!("{l}*")).collect();
    m.exact = v.exact;
    m
}

/// The double-dual action predicted in closed form on the original space:
/// θ(λ−2ηh±2η)/θ(λ−2ηh) · θ(λ)/θ(λ±2η) · Det(λ,w)Det(λ,w+2η)⁻¹ · X(λ,w+4η),
/// h the output weight.
pub fn double_dual_prediction(v: &EModule, g: Gen, lambda: C64, w: C64) -> DMatrix<C64> {
    let p = v.params;
    let e2 = 2.0 * p.eta;
    let (s1, s2) = match g {
        Gen::A => (-1.0, -1.0),
        Gen::B => (-1.0, 1.0),
        Gen::C => (1.0, -1.0),
        Gen::D => (1.0, 1.0),
    };
    let ratio = determinant(v, lambda, w) * inverse_or_nan(determinant(v, lambda, w + e2));
    let mut out = ratio * v.op(g, lambda, w + 2.0 * e2);
    for j in 0..v.dim() {
        let h = v.weights[j] + g.weight_shift();
        let pf = p.th(lambda - e2 * h + s1 * e2) / p.th(lambda - e2 * h) * p.th(lambda) / p.th(lambda + s2 * e2);
        for i in 0..v.dim() {
            out[(i, j)] *= pf;
        }
    }
    out
}
