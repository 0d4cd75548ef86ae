//! Numerical toolkit for the elliptic quantum group E_{τ,η}(sl₂): theta functions,
//! the dynamical R-matrix, E-modules as evaluators of shift-operator coefficients,
//! and residual checks for the identities relating them.

pub mod cli;
pub mod elliptic_core;
pub mod emodules;
pub mod error;
pub mod legs;
pub mod modular;
pub mod morphisms;
pub mod relations;
pub mod rmatrix;

pub use elliptic_core::{c, EllipticParams, SamplePlan, C64};
pub use emodules::{EModule, Gen};
pub use error::{EqgError, Result};
