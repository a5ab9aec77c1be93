use nalgebra::DMatrix;

use super::{CovarianceMatrix, TwoModeCM, CLAMP_TOL, PHYSICALITY_TOL, VACUUM_VARIANCE};
use crate::error::{Error, Result};

/// Symplectic eigenvalues in descending order.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticSpectrum(Vec<f64>);

impl SymplecticSpectrum {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn min(&self) -> f64 {
        self.0.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.0.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Roots of `z² − s·z + p = 0` for `z = ν²`, returned as `(ν₊, ν₋)`.
///
/// `scale` bounds the magnitude of the terms summed into `s`; the
/// discriminant is only known to about `ε·scale²`, so anything within that
/// band is treated as an exact degeneracy (pure and symmetric states land
/// there). The small root is taken as `p/ν₊²` to avoid cancellation.
fn two_mode_pair(sum: f64, det: f64, scale: f64, what: &str) -> Result<(f64, f64)> {
    let scale_sq = scale * scale;
    let disc = sum * sum - 4.0 * det;
    if disc < -CLAMP_TOL * scale_sq.max(1.0) {
        return Err(Error::numerical(format!("{what}: negative discriminant {disc:.3e}")));
    }
    let root = if disc <= 32.0 * f64::EPSILON * scale_sq {
        0.0
    } else {
        disc.sqrt()
    };
    let plus_sq = (sum + root) / 2.0;
    if plus_sq <= 0.0 {
        return Err(Error::numerical(format!("{what}: non-positive invariant sum {sum:.3e}")));
    }
    let minus_sq = det / plus_sq;
    if minus_sq < -CLAMP_TOL {
        return Err(Error::numerical(format!("{what}: negative determinant {det:.3e}")));
    }
    Ok((plus_sq.sqrt(), minus_sq.max(0.0).sqrt()))
}

/// Symplectic eigenvalues of a covariance matrix.
///
/// Two modes use `Φ± = sqrt[(κ ± sqrt(κ² − 4 det C))/2]` with
/// `κ = det C_c + det C_n + 2 det C_cn`. Any other size uses the singular
/// values of `C^{1/2} Ω C^{1/2}`, which come in equal pairs, so this path
/// needs `C` positive definite.
pub fn symplectic_eigenvalues(cm: &CovarianceMatrix) -> Result<SymplecticSpectrum> {
    let c = cm.matrix();
    if cm.n_modes() == 2 {
        let block_det = |r: usize, col: usize| {
            c[(r, col)] * c[(r + 1, col + 1)] - c[(r, col + 1)] * c[(r + 1, col)]
        };
        let (dc, dn, dcn) = (block_det(0, 0), block_det(2, 2), block_det(0, 2));
        let scale = dc.abs() + dn.abs() + 2.0 * dcn.abs();
        let (plus, minus) =
            two_mode_pair(dc + dn + 2.0 * dcn, c.determinant(), scale, "symplectic spectrum")?;
        return Ok(SymplecticSpectrum(vec![plus, minus]));
    }
    general_spectrum(c)
}

fn general_spectrum(c: &DMatrix<f64>) -> Result<SymplecticSpectrum> {
    let n = c.nrows() / 2;
    let eig = c.clone().symmetric_eigen();
    if eig.eigenvalues.iter().any(|&v| v <= 0.0) {
        return Err(Error::physicality(
            "covariance matrix is not positive definite",
        ));
    }
    let root = &eig.eigenvectors
        * DMatrix::from_diagonal(&eig.eigenvalues.map(f64::sqrt))
        * eig.eigenvectors.transpose();
    let m = &root * symplectic_form(n) * &root;
    let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(SymplecticSpectrum(
        sv.chunks(2).map(|p| 0.5 * (p[0] + p[1])).collect(),
    ))
}

/// `Ω = ⊕ [[0, 1], [−1, 0]]`.
pub(crate) fn symplectic_form(n_modes: usize) -> DMatrix<f64> {
    let mut omega = DMatrix::zeros(2 * n_modes, 2 * n_modes);
    for k in 0..n_modes {
        omega[(2 * k, 2 * k + 1)] = 1.0;
        omega[(2 * k + 1, 2 * k)] = -1.0;
    }
    omega
}

/// Smallest symplectic eigenvalue of the partially transposed state,
/// `ν⁻ = sqrt[𝒴 − sqrt(𝒴² − 4 det C)]/√2` with
/// `𝒴 = det C_c + det C_n − 2 det C_cn`.
pub fn nu_minus_ptranspose(cm: &TwoModeCM) -> Result<f64> {
    let (dc, dn, dcn) = (
        cm.photon().determinant(),
        cm.magnon().determinant(),
        cm.cross().determinant(),
    );
    let scale = dc.abs() + dn.abs() + 2.0 * dcn.abs();
    let (_, minus) = two_mode_pair(dc + dn - 2.0 * dcn, cm.matrix().determinant(), scale, "partial transpose")?;
    Ok(minus)
}

/// `E_N = max(0, −ln 2ν⁻)`.
pub fn log_negativity(cm: &TwoModeCM) -> Result<f64> {
    let nu = nu_minus_ptranspose(cm)?;
    Ok((-(2.0 * nu).ln()).max(0.0))
}

/// Second-order Rényi entropy `½ ln det(2C)`; zero for pure states.
pub fn renyi2_entropy(cm: &CovarianceMatrix) -> Result<f64> {
    let det = (cm.matrix() * 2.0).determinant();
    if det <= 0.0 {
        return Err(Error::validation(format!(
            "det(2C) = {det:.3e} is not positive"
        )));
    }
    Ok(0.5 * det.ln())
}

/// `s_V(w) = (w+½) ln(w+½) − (w−½) ln(w−½)`, with `s_V(½) = 0`.
pub fn von_neumann_term(w: f64) -> Result<f64> {
    if w < VACUUM_VARIANCE - PHYSICALITY_TOL {
        return Err(Error::physicality(format!(
            "symplectic eigenvalue {w:.12} below 1/2"
        )));
    }
    let hi = w + 0.5;
    let lo = (w - 0.5).max(0.0);
    let lo_term = if lo > 0.0 { lo * lo.ln() } else { 0.0 };
    Ok(hi * hi.ln() - lo_term)
}

pub fn von_neumann_entropy(cm: &CovarianceMatrix) -> Result<f64> {
    symplectic_eigenvalues(cm)?
        .values()
        .iter()
        .map(|&w| von_neumann_term(w))
        .sum()
}
