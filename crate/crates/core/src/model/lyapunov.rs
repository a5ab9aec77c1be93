use nalgebra::{DMatrix, DVector};

use super::{to_dmatrix, DiffusionMatrix, DriftMatrix};
use crate::error::{Error, Result};
use crate::gaussian::CovarianceMatrix;

/// Maximum accepted `‖FC + CFᵀ + L‖_F / ‖L‖_F`.
pub const RESIDUAL_TOL: f64 = 1e-8;

/// `‖FC + CFᵀ + L‖_F`.
pub fn lyapunov_residual(f: &DMatrix<f64>, c: &DMatrix<f64>, l: &DMatrix<f64>) -> f64 {
    (f * c + c * f.transpose() + l).norm()
}

/// Solves `FC + CFᵀ = −L` by vectorization,
/// `(I ⊗ F + F ⊗ I) vec(C) = −vec(L)`, then symmetrizes. Stability of `F`
/// is the caller's responsibility; the residual is always checked.
pub fn solve_lyapunov_dense(f: &DMatrix<f64>, l: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = f.nrows();
    if f.ncols() != n || l.shape() != (n, n) {
        return Err(Error::validation("Lyapunov operands must be square and of equal size"));
    }
    let mut kron = DMatrix::<f64>::zeros(n * n, n * n);
    // vec is column-major: vec(FC) = (I ⊗ F) vec C, vec(CFᵀ) = (F ⊗ I) vec C.
    for blk in 0..n {
        for i in 0..n {
            for j in 0..n {
                kron[(blk * n + i, blk * n + j)] += f[(i, j)];
                kron[(i * n + blk, j * n + blk)] += f[(i, j)];
            }
        }
    }
    let rhs = -DVector::from_iterator(n * n, l.iter().copied());
    let x = kron
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::numerical("Kronecker system is singular"))?;
    let c = DMatrix::from_iterator(n, n, x.iter().copied());
    let c = (&c + c.transpose()) * 0.5;

    let residual = lyapunov_residual(f, &c, l);
    let scale = l.norm();
    if !residual.is_finite() || residual > RESIDUAL_TOL * scale {
        return Err(Error::numerical(format!(
            "Lyapunov residual {residual:.3e} exceeds {RESIDUAL_TOL:e} x |L| = {scale:.3e}"
        )));
    }
    Ok(c)
}

/// Steady-state covariance matrix from `FC + CFᵀ = −L`.
pub fn solve_lyapunov(drift: &DriftMatrix, diffusion: &DiffusionMatrix) -> Result<CovarianceMatrix> {
    let max_real = drift.max_real_eigenvalue();
    if max_real.is_nan() || max_real >= 0.0 {
        return Err(Error::Unstable { max_real });
    }
    let c = solve_lyapunov_dense(&to_dmatrix(drift.matrix()), &to_dmatrix(diffusion.matrix()))?;
    CovarianceMatrix::new(c)
}
