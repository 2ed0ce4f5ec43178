//! Dense reference operators for differential testing of the fast path.
//!
//! The one-iteration operator `S·ℂ` is assembled from an explicit shift
//! permutation matrix and a block-diagonal coin matrix, never through
//! [`crate::walk::apply_conditional_coins`] or [`crate::walk::apply_shift`].

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::walk::WalkConfig;

/// Upper bound on `m·2^m` for dense operators.
pub const DENSE_LIMIT: usize = 4096;

fn dense_dim(m: usize) -> Result<usize> {
    let size = m.checked_shl(m as u32).unwrap_or(usize::MAX);
    if m >= usize::BITS as usize || size > DENSE_LIMIT {
        return Err(Error::DenseTooLarge {
            size,
            limit: DENSE_LIMIT,
        });
    }
    Ok(size)
}

/// Permutation matrix of the hypercube shift.
pub fn shift_matrix(m: usize) -> Result<DMatrix<Complex64>> {
    let dim = dense_dim(m)?;
    let nodes = 1usize << m;
    let mut s = DMatrix::zeros(dim, dim);
    for d in 0..m {
        for x in 0..nodes {
            let from = d * nodes + x;
            let to = d * nodes + (x ^ (1 << d));
            s[(to, from)] = Complex64::new(1.0, 0.0);
        }
    }
    Ok(s)
}

/// `ℂ = Σ_x C(x) ⊗ |x⟩⟨x|` in the direction-major layout.
pub fn coin_matrix(config: &WalkConfig) -> Result<DMatrix<Complex64>> {
    config.validate()?;
    let m = config.m();
    let dim = dense_dim(m)?;
    let nodes = 1usize << m;
    let (unmarked, marked) = config.coins()?;
    let unmarked = unmarked.to_dense();
    let marked = marked.to_dense();
    let mut c = DMatrix::zeros(dim, dim);
    for x in 0..nodes {
        let block = if x == config.marked {
            &marked
        } else {
            &unmarked
        };
        for d_out in 0..m {
            for d_in in 0..m {
                c[(d_out * nodes + x, d_in * nodes + x)] = block[(d_out, d_in)];
            }
        }
    }
    Ok(c)
}

/// Dense `S·ℂ` for one search iteration.
pub fn build_full_step_unitary(config: &WalkConfig) -> Result<DMatrix<Complex64>> {
    let c = coin_matrix(config)?;
    let s = shift_matrix(config.m())?;
    Ok(s * c)
}

fn uniform_vector(dim: usize) -> DVector<Complex64> {
    DVector::from_element(dim, Complex64::new((dim as f64).recip().sqrt(), 0.0))
}

fn marked_probability(state: &DVector<Complex64>, m: usize, marked: usize) -> f64 {
    let nodes = 1usize << m;
    (0..m).map(|d| state[d * nodes + marked].norm_sqr()).sum()
}

/// Success probability from `U^k` applied to the uniform state, with the
/// power formed by repeated squaring.
pub fn dense_success_probability(config: &WalkConfig) -> Result<f64> {
    let u = build_full_step_unitary(config)?;
    let k = config.resolved_iterations()?;
    let power = u.pow(k as u32);
    let state = power * uniform_vector(u.nrows());
    Ok(marked_probability(&state, config.m(), config.marked))
}

/// Same quantity via `k` successive dense matrix-vector products; avoids
/// the cubic cost of the matrix power at larger `m`.
pub fn dense_success_probability_stepwise(config: &WalkConfig) -> Result<f64> {
    let u = build_full_step_unitary(config)?;
    let k = config.resolved_iterations()?;
    let mut state = uniform_vector(u.nrows());
    for _ in 0..k {
        state = &u * state;
    }
    Ok(marked_probability(&state, config.m(), config.marked))
}

/// Max-norm of `U†U − I`.
pub fn unitarity_defect(u: &DMatrix<Complex64>) -> f64 {
    let product = u.adjoint() * u;
    let identity = DMatrix::<Complex64>::identity(u.nrows(), u.ncols());
    (product - identity)
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}
