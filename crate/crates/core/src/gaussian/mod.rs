//! Gaussian-state linear algebra with the vacuum-variance-1/2 convention.
//!
//! A covariance matrix is stored in the quadrature ordering `X₁, Y₁, X₂, Y₂, …`.
//! [`CovarianceMatrix`] guarantees shape and symmetry only; physicality is a
//! separate question answered by [`validate_physicality`]. The two-mode
//! [`TwoModeCM`] is always physical.

mod measurement;
mod spectrum;

use nalgebra::{DMatrix, Matrix2, Matrix4};

use crate::error::{Error, Result};

pub use measurement::{conditional_cm, measurement_cm, MeasurementSpec};
pub use spectrum::{
    log_negativity, nu_minus_ptranspose, renyi2_entropy, symplectic_eigenvalues,
    von_neumann_entropy, von_neumann_term, SymplecticSpectrum,
};

/// Variance of each vacuum quadrature.
pub const VACUUM_VARIANCE: f64 = 0.5;

/// Slack below [`VACUUM_VARIANCE`] tolerated for symplectic eigenvalues.
pub const PHYSICALITY_TOL: f64 = 1e-9;

/// Relative asymmetry tolerated when accepting a covariance matrix.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Negative radicands smaller than this are clamped to zero.
pub const CLAMP_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    n_modes: usize,
    data: DMatrix<f64>,
}

impl CovarianceMatrix {
    /// Accepts a `2n × 2n` matrix that is symmetric to within
    /// [`SYMMETRY_TOL`] relative to its largest entry. The stored matrix is
    /// the exact symmetric part.
    pub fn new(data: DMatrix<f64>) -> Result<Self> {
        let (rows, cols) = data.shape();
        if rows != cols || rows == 0 || rows % 2 != 0 {
            return Err(Error::validation(format!(
                "covariance matrix must be 2n x 2n, got {rows} x {cols}"
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::validation("covariance matrix has non-finite entries"));
        }
        let scale = data.amax().max(f64::MIN_POSITIVE);
        let asym = (&data - data.transpose()).amax();
        if asym > SYMMETRY_TOL * scale {
            return Err(Error::validation(format!(
                "covariance matrix is not symmetric (max |C - C^T| = {asym:.3e})"
            )));
        }
        let data = (&data + data.transpose()) * 0.5;
        Ok(Self {
            n_modes: rows / 2,
            data,
        })
    }

    pub fn vacuum(n_modes: usize) -> Self {
        Self {
            n_modes,
            data: DMatrix::identity(2 * n_modes, 2 * n_modes) * VACUUM_VARIANCE,
        }
    }

    /// Product of single-mode thermal states with the given mean occupations.
    pub fn thermal(occupations: &[f64]) -> Result<Self> {
        if occupations.iter().any(|n| !(n.is_finite() && *n >= 0.0)) {
            return Err(Error::validation("thermal occupations must be finite and >= 0"));
        }
        let diag: Vec<f64> = occupations
            .iter()
            .flat_map(|n| [n + VACUUM_VARIANCE, n + VACUUM_VARIANCE])
            .collect();
        Ok(Self {
            n_modes: occupations.len(),
            data: DMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag)),
        })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.data
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.data
    }

    /// Marginal of the listed modes (Gaussian partial trace by block deletion).
    pub fn reduce(&self, modes: &[usize]) -> Result<CovarianceMatrix> {
        if modes.is_empty() || modes.iter().any(|&m| m >= self.n_modes) {
            return Err(Error::validation(format!(
                "mode selection {modes:?} out of range for {} modes",
                self.n_modes
            )));
        }
        let idx: Vec<usize> = modes.iter().flat_map(|&m| [2 * m, 2 * m + 1]).collect();
        let k = idx.len();
        let data = DMatrix::from_fn(k, k, |i, j| self.data[(idx[i], idx[j])]);
        Ok(CovarianceMatrix {
            n_modes: modes.len(),
            data,
        })
    }
}

/// Physical two-mode covariance matrix, partitioned as
/// `[[C_c, C_cn], [C_cnᵀ, C_n]]` (photon block first).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoModeCM {
    data: Matrix4<f64>,
}

impl TwoModeCM {
    pub fn from_blocks(photon: Matrix2<f64>, magnon: Matrix2<f64>, cross: Matrix2<f64>) -> Result<Self> {
        let mut data = Matrix4::zeros();
        data.fixed_view_mut::<2, 2>(0, 0).copy_from(&photon);
        data.fixed_view_mut::<2, 2>(2, 2).copy_from(&magnon);
        data.fixed_view_mut::<2, 2>(0, 2).copy_from(&cross);
        data.fixed_view_mut::<2, 2>(2, 0).copy_from(&cross.transpose());
        Self::from_matrix(data)
    }

    /// Validates symmetry and physicality of a 4×4 matrix.
    pub fn from_matrix(data: Matrix4<f64>) -> Result<Self> {
        let cm = CovarianceMatrix::new(DMatrix::from_iterator(4, 4, data.iter().copied()))?;
        Self::try_from(&cm)
    }

    pub fn vacuum() -> Self {
        Self {
            data: Matrix4::identity() * VACUUM_VARIANCE,
        }
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.data
    }

    pub fn photon(&self) -> Matrix2<f64> {
        self.data.fixed_view::<2, 2>(0, 0).into_owned()
    }

    pub fn magnon(&self) -> Matrix2<f64> {
        self.data.fixed_view::<2, 2>(2, 2).into_owned()
    }

    pub fn cross(&self) -> Matrix2<f64> {
        self.data.fixed_view::<2, 2>(0, 2).into_owned()
    }

    pub fn to_cm(&self) -> CovarianceMatrix {
        CovarianceMatrix {
            n_modes: 2,
            data: DMatrix::from_iterator(4, 4, self.data.iter().copied()),
        }
    }
}

impl TryFrom<&CovarianceMatrix> for TwoModeCM {
    type Error = Error;

    fn try_from(cm: &CovarianceMatrix) -> Result<Self> {
        if cm.n_modes() != 2 {
            return Err(Error::validation(format!(
                "expected a two-mode covariance matrix, got {} modes",
                cm.n_modes()
            )));
        }
        if cm.matrix().clone().cholesky().is_none() {
            return Err(Error::physicality("covariance matrix is not positive definite"));
        }
        let spectrum = symplectic_eigenvalues(cm)?;
        if spectrum.min() < VACUUM_VARIANCE - PHYSICALITY_TOL {
            return Err(Error::physicality(format!(
                "minimum symplectic eigenvalue {:.12} < 1/2",
                spectrum.min()
            )));
        }
        let m = cm.matrix();
        Ok(Self {
            data: Matrix4::from_fn(|i, j| m[(i, j)]),
        })
    }
}

/// Reduced description `C_c = αI`, `C_n = βI`, `C_cn = diag(Δ, −Δ)`.
///
/// `delta` is the magnitude `sqrt|det C_cn|`; `cross_sign` records the sign
/// of `det C_cn` (−1, 0 or +1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StandardFormParams {
    pub alpha: f64,
    pub beta: f64,
    pub delta: f64,
    pub cross_sign: f64,
}

impl StandardFormParams {
    /// Parameters of a squeezed thermal state (`det C_cn ≤ 0`).
    pub fn new(alpha: f64, beta: f64, delta: f64) -> Self {
        Self {
            alpha,
            beta,
            delta: delta.abs(),
            cross_sign: if delta == 0.0 { 0.0 } else { -1.0 },
        }
    }
}

/// Squeezed thermal state with blocks `αI`, `βI`, `diag(Δ, −Δ)`.
pub fn make_sts(alpha: f64, beta: f64, delta: f64) -> Result<TwoModeCM> {
    if !(alpha.is_finite() && beta.is_finite() && delta.is_finite()) {
        return Err(Error::validation("STS parameters must be finite"));
    }
    TwoModeCM::from_blocks(
        Matrix2::identity() * alpha,
        Matrix2::identity() * beta,
        Matrix2::new(delta, 0.0, 0.0, -delta),
    )
}

/// Two-mode squeezed vacuum with squeezing parameter `r`.
pub fn make_tmsv(r: f64) -> Result<TwoModeCM> {
    let c = (2.0 * r).cosh() / 2.0;
    let s = (2.0 * r).sinh() / 2.0;
    make_sts(c, c, s)
}

pub fn standard_form(cm: &TwoModeCM) -> StandardFormParams {
    let det_cross = cm.cross().determinant();
    StandardFormParams {
        alpha: cm.photon().determinant().max(0.0).sqrt(),
        beta: cm.magnon().determinant().max(0.0).sqrt(),
        delta: det_cross.abs().sqrt(),
        cross_sign: if det_cross == 0.0 { 0.0 } else { det_cross.signum() },
    }
}

/// True iff the matrix is positive definite and every symplectic eigenvalue
/// is at least `1/2 − 1e-9`.
pub fn validate_physicality(cm: &CovarianceMatrix) -> bool {
    if cm.matrix().clone().cholesky().is_none() {
        return false;
    }
    match symplectic_eigenvalues(cm) {
        Ok(s) => s.min() >= VACUUM_VARIANCE - PHYSICALITY_TOL,
        Err(_) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rejects_asymmetric_and_odd_shapes() {
        let mut m = DMatrix::identity(4, 4) * 0.5;
        m[(0, 1)] = 0.1;
        assert!(matches!(CovarianceMatrix::new(m), Err(Error::Validation(_))));
        assert!(CovarianceMatrix::new(DMatrix::identity(3, 3)).is_err());
    }

    #[test]
    fn physicality_examples() {
        assert!(validate_physicality(&CovarianceMatrix::vacuum(2)));
        let sub = CovarianceMatrix::new(DMatrix::identity(4, 4) * 0.25).unwrap();
        assert!(!validate_physicality(&sub));
        let indefinite = CovarianceMatrix::new(DMatrix::from_diagonal_element(2, 2, -1.0)).unwrap();
        assert!(!validate_physicality(&indefinite));
    }

    #[test]
    fn tmsv_constructors() {
        assert_eq!(make_tmsv(0.0).unwrap(), TwoModeCM::vacuum());
        let p = standard_form(&make_tmsv(0.5).unwrap());
        assert!((p.alpha - 0.771_540_317_1).abs() < 1e-9);
        assert!((p.beta - 0.771_540_317_1).abs() < 1e-9);
        assert!((p.delta - 0.587_600_596_0).abs() < 1e-9);
        assert_eq!(p.cross_sign, -1.0);
    }

    #[test]
    fn unphysical_sts_is_rejected() {
        // Smallest symplectic eigenvalue is sqrt(1/4 - 0.01).
        assert!(matches!(make_sts(0.5, 0.5, 0.1), Err(Error::Physicality(_))));
    }

    #[test]
    fn standard_form_round_trip_and_vacuum() {
        let p = standard_form(&make_sts(1.0, 2.0, 0.5).unwrap());
        assert_eq!((p.alpha, p.beta, p.delta), (1.0, 2.0, 0.5));
        let v = standard_form(&TwoModeCM::vacuum());
        assert_eq!((v.alpha, v.beta, v.delta, v.cross_sign), (0.5, 0.5, 0.0, 0.0));
    }

    #[test]
    fn reduce_picks_blocks() {
        let cm = CovarianceMatrix::thermal(&[1.0, 2.0, 3.0]).unwrap();
        let r = cm.reduce(&[0, 2]).unwrap();
        assert_eq!(r.matrix()[(0, 0)], 1.5);
        assert_eq!(r.matrix()[(2, 2)], 3.5);
        assert!(cm.reduce(&[3]).is_err());
    }

    proptest! {
        #[test]
        fn standard_form_inverts_make_sts(
            alpha in 0.5f64..5.0,
            beta in 0.5f64..5.0,
            frac in 0.0f64..1.0,
        ) {
            let delta = frac * (alpha * beta).sqrt();
            let cm = make_sts(alpha, beta, delta);
            prop_assume!(cm.is_ok());
            let p = standard_form(&cm.unwrap());
            prop_assert!((p.alpha - alpha).abs() <= 1e-12 * alpha);
            prop_assert!((p.beta - beta).abs() <= 1e-12 * beta);
            prop_assert!((p.delta - delta).abs() <= 1e-12 * alpha.max(beta));
        }
    }
}
