//! Central elements at 2Nη = 1.

use std::f64::consts::PI;

use serde::Serialize;

use super::{compare_sums, Comparison, OperatorWord};
use crate::elliptic_core::{C64, I};
use crate::emodules::{EModule, Gen};
use crate::error::{EqgError, Result};

/// The product X(z)X(z−2η)⋯X(z−2(N−1)η).
pub fn power_word(g: Gen, z: C64, n: usize, eta: C64) -> OperatorWord {
    (0..n).fold(OperatorWord::new(), |w, k| w.gen(g, z - 2.0 * k as f64 * eta))
}

/// A test function 1-periodic in λ and 1/(2η)-periodic in h̃.
pub fn sample_periodic_function(eta: C64) -> impl Fn(C64, C64) -> C64 + Send + Sync + Clone + 'static {
    move |l: C64, h: C64| (2.0 * PI * I * l).exp() + 0.5 * (2.0 * PI * I * 2.0 * eta * h).exp() + 0.3
}

/// One commutator of the central-element check.
#[derive(Debug, Clone, Serialize)]
pub struct CommutatorEntry {
    /// "a^(N)", ..., or "f^(N)"
    pub central: String,
    pub with: char,
    pub residual: f64,
    pub coverage: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PowerCentralReport {
    pub n: usize,
    pub entries: Vec<CommutatorEntry>,
}

impl PowerCentralReport {
    pub fn max(&self) -> f64 {
        self.entries.iter().map(|e| e.residual).fold(0.0, f64::max)
    }

    pub fn coverage(&self) -> f64 {
        self.entries.iter().map(|e| e.coverage).fold(1.0, f64::min)
    }
}

fn require_eta(module: &EModule, n: usize) -> Result<()> {
    let expected = 1.0 / (2.0 * n as f64);
    if n == 0 || (module.eta() - expected).norm() > 1e-14 {
        return Err(EqgError::WrongEta { expected, got: module.eta() });
    }
    Ok(())
}

/// The twenty commutators of a⁽ᴺ⁾(z), b⁽ᴺ⁾(z), c⁽ᴺ⁾(z), d⁽ᴺ⁾(z), f⁽ᴺ⁾ with a, b, c, d at w′.
pub fn power_central_residual(
    module: &EModule,
    n: usize,
    z: C64,
    w_prime: C64,
    lambda: C64,
) -> Result<PowerCentralReport> {
    require_eta(module, n)?;
    let eta = module.eta();
    let f = sample_periodic_function(eta);
    let nf = n as f64;
    let mut entries = Vec::with_capacity(20);
    let mut push = |central: String, with: Gen, cmp: Comparison| {
        entries.push(CommutatorEntry { central, with: with.name(), residual: cmp.residual, coverage: cmp.coverage });
    };
    for y in Gen::ALL {
        let single = OperatorWord::new().gen(y, w_prime);
        for x in Gen::ALL {
            let pw = power_word(x, z, n, eta);
            let cmp = compare_sums(&[pw.clone().then(&single)], &[single.clone().then(&pw)], module, lambda)?;
            push(format!("{}^({n})", x.name()), y, cmp);
        }
        let ff = f.clone();
        let fw = OperatorWord::new().diag(move |l, h| ff(nf * l, nf * h));
        let cmp = compare_sums(&[fw.clone().then(&single)], &[single.clone().then(&fw)], module, lambda)?;
        push(format!("f^({n})"), y, cmp);
    }
    Ok(PowerCentralReport { n, entries })
}

/// At η = 1/2 every pair of generators commutes; residual over all ordered pairs.
pub fn commutativity_residual(module: &EModule, lambda: C64, w1: C64, w2: C64) -> Result<Comparison> {
    require_eta(module, 1)?;
    let mut worst = Comparison { residual: 0.0, coverage: 1.0 };
    for x in Gen::ALL {
        for y in Gen::ALL {
            let l = OperatorWord::new().gen(x, w1).gen(y, w2);
            let r = OperatorWord::new().gen(y, w2).gen(x, w1);
            let c = compare_sums(&[l], &[r], module, lambda)?;
            worst = super::combine([worst, c]);
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic_core::{c, EllipticParams};
    use crate::emodules::{special_t, SignTwist};

    #[test]
    fn wrong_eta_is_refused() {
        let p = EllipticParams::default();
        let v = crate::emodules::finite_evaluation(1, 0, 0, c(0.1, 0.0), &p);
        assert!(matches!(power_central_residual(&v, 2, c(0.1, 0.0), c(0.2, 0.0), c(0.3, 0.1)), Err(EqgError::WrongEta { .. })));
    }

    #[test]
    fn power_word_shape() {
        let w = power_word(Gen::B, c(0.1, 0.0), 3, c(0.25, 0.0));
        assert_eq!(w.length(), 3);
        assert_eq!(w.net_shift_units(), 6.0);
    }

    #[test]
    fn n2_special_module_is_central() {
        let p = EllipticParams::default().with_eta(c(0.25, 0.0));
        let t = special_t(c(0.37, 0.1), None, c(0.1, 0.05), 2, SignTwist::Printed, &p).unwrap();
        let r = power_central_residual(&t, 2, c(0.13, 0.04), c(-0.21, 0.1), c(0.31, 0.12)).unwrap();
        assert_eq!(r.entries.len(), 20);
        assert!(r.max() < 1e-8, "{:?}", r.entries);
    }
}
