//! Modular modules and the transformation tau -> -1/tau.

use eqg::emodules::finite_evaluation;
use eqg::modular::{modularity_residual, s_dual_params, s_transform, ExponentForm};
use eqg::relations::rll_residual;
use eqg::{c, EllipticParams};

fn main() -> eqg::Result<()> {
    let target = EllipticParams::default().with_tau(c(0.0, 1.1));
    let source = s_dual_params(&target)?;
    let v = finite_evaluation(1, 0, 0, c(0.1, 0.05), &source);
    let (l, w1, w2) = (c(0.31, 0.12), c(0.17, 0.05), c(-0.3, 0.02));
    for form in ExponentForm::ALL {
        let s = s_transform(&v, c(1.0, 0.0), form, &target)?;
        println!(
            "{form:?}: relations {:.1e}, quasi-periodicity {:.1e}",
            rll_residual(&s, l, w1, w2).worst(),
            modularity_residual(&s, c(1.0, 0.0), l, w1)
        );
    }
    Ok(())
}
