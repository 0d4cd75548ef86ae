//! Serializable module descriptions for the verification roster.

use serde::{Deserialize, Serialize};

use crate::elliptic_core::{c, EllipticParams, C64};
use crate::emodules::{
    counit, cyclic, dual, evaluation_verma, finite_evaluation, one_dimensional, tensor_all, weyl_twist, EModule,
    HConvention, OneDimData,
};
use crate::error::{EqgError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModuleSpec {
    /// The (n+1)-dimensional quotient with Λ = n + (m+ℓτ)/(2η).
    Finite {
        n: usize,
        #[serde(default)]
        m: i64,
        #[serde(default)]
        ell: i64,
        z: C64,
    },
    Verma { lambda: C64, z: C64, window: usize },
    Cyclic { lambda: C64, xi: C64, z: C64, window: usize },
    OneDim { ell: i64, j: C64 },
    Counit,
    Tensor { factors: Vec<ModuleSpec> },
    Weyl { inner: Box<ModuleSpec> },
    Dual { inner: Box<ModuleSpec> },
}

impl ModuleSpec {
    pub fn build(&self, p: &EllipticParams) -> Result<EModule> {
        Ok(match self {
            ModuleSpec::Finite { n, m, ell, z } => finite_evaluation(*n, *m, *ell, *z, p),
            ModuleSpec::Verma { lambda, z, window } => evaluation_verma(*lambda, *z, *window, p)?,
            ModuleSpec::Cyclic { lambda, xi, z, window } => cyclic(*lambda, *xi, *z, *window, p)?,
            ModuleSpec::OneDim { ell, j } => one_dimensional(&OneDimData::constant(*ell, *j), p),
            ModuleSpec::Counit => counit(p),
            ModuleSpec::Tensor { factors } => {
                if factors.is_empty() {
                    return Err(EqgError::Config("tensor needs at least one factor".into()));
                }
                let built = factors.iter().map(|f| f.build(p)).collect::<Result<Vec<_>>>()?;
                tensor_all(&built)
            }
            ModuleSpec::Weyl { inner } => weyl_twist(&inner.build(p)?),
            ModuleSpec::Dual { inner } => dual(&inner.build(p)?, HConvention::Positional),
        })
    }

    /// Short human-readable tag used in record ids.
    pub fn label(&self) -> String {
        match self {
            ModuleSpec::Finite { n, m, ell, .. } if *m == 0 && *ell == 0 => format!("L{n}"),
            ModuleSpec::Finite { n, m, ell, .. } => format!("L{n}[m={m},l={ell}]"),
            ModuleSpec::Verma { window, .. } => format!("verma{window}"),
            ModuleSpec::Cyclic { window, .. } => format!("cyclic{window}"),
            ModuleSpec::OneDim { ell, .. } => format!("U[l={ell}]"),
            ModuleSpec::Counit => "counit".into(),
            ModuleSpec::Tensor { factors } => factors.iter().map(|f| f.label()).collect::<Vec<_>>().join("x"),
            ModuleSpec::Weyl { inner } => format!("weyl({})", inner.label()),
            ModuleSpec::Dual { inner } => format!("dual({})", inner.label()),
        }
    }
}

fn fin(n: usize, z: C64) -> ModuleSpec {
    ModuleSpec::Finite { n, m: 0, ell: 0, z }
}

/// Finite quotients of several sizes, a Verma window, a cyclic window, a
/// one-dimensional module and tensor products with up to three factors.
pub fn default_roster() -> Vec<ModuleSpec> {
    let (z1, z2, z3) = (c(0.13, 0.2), c(-0.21, 0.07), c(0.4, -0.1));
    vec![
        fin(1, z1),
        fin(2, z2),
        fin(3, z3),
        ModuleSpec::Finite { n: 1, m: 1, ell: 1, z: z2 },
        ModuleSpec::Verma { lambda: c(0.37, 0.41), z: z1, window: 14 },
        ModuleSpec::Cyclic { lambda: c(0.29, -0.33), xi: c(0.61, 0.17), z: z2, window: 16 },
        ModuleSpec::OneDim { ell: 1, j: c(0.7, 0.2) },
        ModuleSpec::Tensor { factors: vec![fin(1, z1), fin(2, z2)] },
        ModuleSpec::Tensor { factors: vec![fin(1, z1), fin(1, z2), fin(1, z3)] },
    ]
}
