//! Placing operators on selected legs of a multi-factor tensor product.
//!
//! Basis tuples are flattened row-major, last leg fastest, which agrees with
//! the Kronecker product convention used by [`crate::emodules::tensor`].

use nalgebra::DMatrix;

use crate::elliptic_core::C64;

/// Spectator leg whose weight parametrizes the operator (dynamical shift).
pub struct Spectator<'a> {
    pub leg: usize,
    pub weights: &'a [C64],
}

fn unravel(mut idx: usize, dims: &[usize]) -> Vec<usize> {
    let mut t = vec![0; dims.len()];
    for i in (0..dims.len()).rev() {
        t[i] = idx % dims[i];
        idx /= dims[i];
    }
    t
}

fn ravel(t: &[usize], dims: &[usize]) -> usize {
    t.iter().zip(dims).fold(0, |acc, (&x, &d)| acc * d + x)
}

/// Embeds an operator acting on `legs` (in that order) into the full product.
///
/// `op` receives the spectator weight (if any) and returns a matrix on the
/// product of the selected legs.
pub fn embed<F>(dims: &[usize], legs: &[usize], spectator: Option<Spectator<'_>>, op: F) -> DMatrix<C64>
where
    F: Fn(Option<C64>) -> DMatrix<C64>,
{
    let total: usize = dims.iter().product();
    let sub_dims: Vec<usize> = legs.iter().map(|&l| dims[l]).collect();
    let mut out = DMatrix::zeros(total, total);
    let mut cache: Vec<Option<DMatrix<C64>>> = match &spectator {
        Some(s) => vec![None; s.weights.len()],
        None => vec![None],
    };
    for col in 0..total {
        let t = unravel(col, dims);
        let slot = spectator.as_ref().map_or(0, |s| t[s.leg]);
        if cache[slot].is_none() {
            cache[slot] = Some(op(spectator.as_ref().map(|s| s.weights[t[s.leg]])));
        }
        let x = cache[slot].as_ref().unwrap();
        let sub_t: Vec<usize> = legs.iter().map(|&l| t[l]).collect();
        let inl = ravel(&sub_t, &sub_dims);
        for outl in 0..x.nrows() {
            let v = x[(outl, inl)];
            if v == C64::new(0.0, 0.0) {
                continue;
            }
            let mut o = t.clone();
            for (&l, k) in legs.iter().zip(unravel(outl, &sub_dims)) {
                o[l] = k;
            }
            out[(ravel(&o, dims), col)] += v;
        }
    }
    out
}

/// Permutation V⊗W → W⊗V on flattened indices.
pub fn swap(d1: usize, d2: usize) -> DMatrix<C64> {
    let mut m = DMatrix::zeros(d1 * d2, d1 * d2);
    for i in 0..d1 {
        for j in 0..d2 {
            m[(j * d1 + i, i * d2 + j)] = C64::new(1.0, 0.0);
        }
    }
    m
}

/// Largest entry modulus, the norm used for all relative residuals.
pub fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().fold(0.0, |a, x| a.max(x.norm()))
}

/// max|a−b| / max(max|a|, max|b|), with 0/0 read as 0.
pub fn rel_diff(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    let scale = max_abs(a).max(max_abs(b));
    let d = max_abs(&(a - b));
    if scale == 0.0 {
        d
    } else {
        d / scale
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(r: usize, c: usize, f: impl Fn(usize, usize) -> f64) -> DMatrix<C64> {
        DMatrix::from_fn(r, c, |i, j| C64::new(f(i, j), 0.0))
    }

    #[test]
    fn embed_matches_kron() {
        let a = m(2, 2, |i, j| (1 + i + 2 * j) as f64);
        let b = m(3, 3, |i, j| (i * 3 + j) as f64 - 2.0);
        let full = embed(&[2, 3], &[0, 1], None, |_| a.kronecker(&b));
        assert!(rel_diff(&full, &a.kronecker(&b)) < 1e-15);
        let left = embed(&[2, 3], &[0], None, |_| a.clone());
        assert!(rel_diff(&left, &a.kronecker(&DMatrix::identity(3, 3))) < 1e-15);
    }

    #[test]
    fn reversed_legs_conjugate_by_swap() {
        let a = m(6, 6, |i, j| ((i * 7 + j * 3) % 5) as f64);
        let rev = embed(&[2, 3], &[1, 0], None, |_| a.clone());
        let p = swap(2, 3);
        assert!(rel_diff(&rev, &(p.transpose() * &a * &p)) < 1e-15);
    }
}
