//! CSV tables of closed-form quantities.

use clap::Subcommand;

use super::{fmt_complex, parse_complex};
use crate::elliptic_core::{EllipticParams, C64};
use crate::emodules::{finite_evaluation, tensor};
use crate::error::Result;
use crate::morphisms::{elliptic_binomial, highest_weight_data, product_formula_d};
use crate::rmatrix::r_matrix;

#[derive(Debug, Clone, Subcommand)]
pub enum TableKind {
    /// Elliptic binomial coefficients [j, l] for l = 0..=j.
    Binomial {
        #[arg(long, default_value_t = 4)]
        j: usize,
    },
    /// Fusion coefficients on e_l ⊗ e_(j-l) for j up to --max-j.
    Fusion {
        #[arg(long, default_value = "1")]
        l1: String,
        #[arg(long, default_value = "1")]
        l2: String,
        #[arg(long, default_value_t = 4)]
        max_j: usize,
    },
    /// The 4x4 R-matrix in the basis (++, +-, -+, --).
    Rmatrix {
        #[arg(long, default_value = "0.31+0.12i", allow_hyphen_values = true)]
        lambda: String,
        #[arg(long, default_value = "0.17+0.05i", allow_hyphen_values = true)]
        w: String,
    },
    /// Highest-weight functions A and D of e0⊗e0 in L_n1(z1)⊗L_n2(z2) with the product formula for D.
    Hw {
        #[arg(long, default_value_t = 1)]
        n1: usize,
        #[arg(long, default_value_t = 1)]
        n2: usize,
        #[arg(long, default_value = "0.13+0.2i", allow_hyphen_values = true)]
        z1: String,
        #[arg(long, default_value = "-0.21+0.07i", allow_hyphen_values = true)]
        z2: String,
        /// Grid points per axis.
        #[arg(long, default_value_t = 3)]
        grid: usize,
    },
}

/// Renders the table as CSV with complex entries written "re+imi".
pub fn run_table(kind: &TableKind, p: &EllipticParams) -> Result<String> {
    let mut out = String::new();
    match kind {
        TableKind::Binomial { j } => {
            out.push_str("j,l,coefficient\n");
            for l in 0..=*j {
                out.push_str(&format!("{j},{l},{}\n", fmt_complex(elliptic_binomial(*j, l, p)?)));
            }
        }
        TableKind::Fusion { l1, l2, max_j } => {
            let (a, b) = (parse_complex(l1)?, parse_complex(l2)?);
            out.push_str(&format!("# Lambda1={},Lambda2={}\n", fmt_complex(a), fmt_complex(b)));
            out.push_str("j,l,j_minus_l,coefficient\n");
            for j in 0..=*max_j {
                for l in 0..=j {
                    out.push_str(&format!("{j},{l},{},{}\n", j - l, fmt_complex(elliptic_binomial(j, l, p)?)));
                }
            }
        }
        TableKind::Rmatrix { lambda, w } => {
            let r = r_matrix(parse_complex(lambda)?, parse_complex(w)?, p)?;
            let names = ["++", "+-", "-+", "--"];
            out.push_str("row,col,entry\n");
            for i in 0..4 {
                for k in 0..4 {
                    out.push_str(&format!("{},{},{}\n", names[i], names[k], fmt_complex(r.entries[(i, k)])));
                }
            }
        }
        TableKind::Hw { n1, n2, z1, z2, grid } => {
            let (z1, z2) = (parse_complex(z1)?, parse_complex(z2)?);
            let m = tensor(&finite_evaluation(*n1, 0, 0, z1, p), &finite_evaluation(*n2, 0, 0, z2, p));
            let g = (*grid).max(1);
            let axis = |k: usize, a: f64, b: f64| if g == 1 { a } else { a + (b - a) * k as f64 / (g - 1) as f64 };
            let mut points = Vec::with_capacity(g * g);
            for i in 0..g {
                for k in 0..g {
                    points.push((C64::new(axis(i, -0.3, 0.3), 0.12), C64::new(axis(k, -0.25, 0.25), 0.05)));
                }
            }
            let data = highest_weight_data(&m, 0, &points)?;
            let factors = [(C64::new(*n1 as f64, 0.0), z1), (C64::new(*n2 as f64, 0.0), z2)];
            out.push_str(&format!("# weight={}\n", fmt_complex(data.weight)));
            out.push_str("lambda,w,A,D,D_product_formula\n");
            for s in &data.samples {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    fmt_complex(s.lambda),
                    fmt_complex(s.w),
                    fmt_complex(s.a),
                    fmt_complex(s.d),
                    fmt_complex(product_formula_d(&factors, s.lambda, s.w, p))
                ));
            }
        }
    }
    Ok(out)
}
