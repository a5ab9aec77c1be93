use nalgebra::{Matrix2, Vector2};

use super::TwoModeCM;
use crate::error::{Error, Result};

/// Gaussian measurement on one mode: a pure seed state with covariance
/// `½ R(ξ) diag(λ, 1/λ) R(ξ)ᵀ`. `λ = 0` is the homodyne limit (quadrature
/// along `(cos ξ, sin ξ)`), `λ = 1` is heterodyne.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementSpec {
    pub lambda: f64,
    pub xi: f64,
}

impl MeasurementSpec {
    pub fn new(lambda: f64, xi: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda >= 0.0) {
            return Err(Error::validation(format!("measurement lambda must be >= 0, got {lambda}")));
        }
        if !xi.is_finite() {
            return Err(Error::validation("measurement angle must be finite"));
        }
        Ok(Self { lambda, xi })
    }

    pub fn homodyne(xi: f64) -> Self {
        Self { lambda: 0.0, xi }
    }

    pub fn heterodyne() -> Self {
        Self { lambda: 1.0, xi: 0.0 }
    }

    pub fn is_homodyne(&self) -> bool {
        self.lambda == 0.0
    }

    /// Unit vector of the measured quadrature in the homodyne limit.
    pub fn quadrature(&self) -> Vector2<f64> {
        Vector2::new(self.xi.cos(), self.xi.sin())
    }
}

pub(crate) fn rotation(angle: f64) -> Matrix2<f64> {
    let (s, c) = angle.sin_cos();
    Matrix2::new(c, -s, s, c)
}

/// Covariance of the measurement seed state. Fails for `λ = 0`, where the
/// matrix diverges; use the homodyne limit in [`conditional_cm`] instead.
pub fn measurement_cm(spec: &MeasurementSpec) -> Result<Matrix2<f64>> {
    if spec.is_homodyne() {
        return Err(Error::validation(
            "lambda = 0 has no finite seed covariance; use the homodyne limit",
        ));
    }
    let r = rotation(spec.xi);
    Ok(r * Matrix2::new(spec.lambda, 0.0, 0.0, 1.0 / spec.lambda) * r.transpose() * 0.5)
}

/// Photon covariance after a Gaussian measurement on the magnon,
/// `C_c − C_cn (C_n + Γ)⁻¹ C_cnᵀ`. For `λ = 0` the inverse is replaced by its
/// rank-one limit `u uᵀ / (uᵀ C_n u)`.
pub fn conditional_cm(cm: &TwoModeCM, spec: &MeasurementSpec) -> Result<Matrix2<f64>> {
    let (c_c, c_n, c_cn) = (cm.photon(), cm.magnon(), cm.cross());
    let gain = if spec.is_homodyne() {
        let u = spec.quadrature();
        let var = (u.transpose() * c_n * u)[0];
        if var <= 0.0 {
            return Err(Error::numerical(format!(
                "measured quadrature variance {var:.3e} is not positive"
            )));
        }
        u * u.transpose() / var
    } else {
        (c_n + measurement_cm(spec)?)
            .try_inverse()
            .ok_or_else(|| Error::numerical("C_n + Γ is singular"))?
    };
    let out = c_c - c_cn * gain * c_cn.transpose();
    Ok((out + out.transpose()) * 0.5)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::FRAC_PI_2;

    use proptest::prelude::*;

    use super::*;
    use crate::gaussian::make_sts;

    fn assert_mat_close(a: &Matrix2<f64>, b: &Matrix2<f64>, tol: f64) {
        assert!((a - b).amax() <= tol, "{a} vs {b}");
    }

    #[test]
    fn seed_covariance_examples() {
        let iso = measurement_cm(&MeasurementSpec::new(1.0, 0.7).unwrap()).unwrap();
        assert_mat_close(&iso, &(Matrix2::identity() * 0.5), 1e-15);
        let sq = measurement_cm(&MeasurementSpec::new(4.0, 0.0).unwrap()).unwrap();
        assert_mat_close(&sq, &Matrix2::new(2.0, 0.0, 0.0, 0.125), 1e-15);
        let rot = measurement_cm(&MeasurementSpec::new(4.0, FRAC_PI_2).unwrap()).unwrap();
        assert_mat_close(&rot, &Matrix2::new(0.125, 0.0, 0.0, 2.0), 1e-15);
        assert!(matches!(
            measurement_cm(&MeasurementSpec::homodyne(0.0)),
            Err(Error::Validation(_))
        ));
        assert!(MeasurementSpec::new(-1.0, 0.0).is_err());
    }

    #[test]
    fn sts_conditional_examples() {
        let (a, b, d) = (1.4, 1.1, 0.8);
        let cm = make_sts(a, b, d).unwrap();
        let het = conditional_cm(&cm, &MeasurementSpec::heterodyne()).unwrap();
        let v = a - d * d / (b + 0.5);
        assert_mat_close(&het, &Matrix2::new(v, 0.0, 0.0, v), 1e-14);
        let hom = conditional_cm(&cm, &MeasurementSpec::homodyne(0.0)).unwrap();
        assert_mat_close(&hom, &Matrix2::new(a - d * d / b, 0.0, 0.0, a), 1e-14);
    }

    #[test]
    fn uncorrelated_state_is_unchanged() {
        let cm = make_sts(1.4, 1.1, 0.0).unwrap();
        for spec in [
            MeasurementSpec::homodyne(0.3),
            MeasurementSpec::heterodyne(),
            MeasurementSpec::new(3.0, 1.0).unwrap(),
        ] {
            assert_eq!(conditional_cm(&cm, &spec).unwrap(), cm.photon());
        }
    }

    #[test]
    fn small_lambda_approaches_homodyne_limit() {
        let cm = make_sts(1.4, 1.1, 0.8).unwrap();
        for xi in [0.0, 0.4, 1.3] {
            let limit = conditional_cm(&cm, &MeasurementSpec::homodyne(xi)).unwrap();
            let near = conditional_cm(&cm, &MeasurementSpec::new(1e-8, xi).unwrap()).unwrap();
            assert_mat_close(&limit, &near, 1e-7);
        }
    }

    proptest! {
        #[test]
        fn heterodyne_is_angle_independent(
            a in 0.5f64..4.0, b in 0.5f64..4.0, f in 0.0f64..1.0, xi in -3.2f64..3.2,
        ) {
            let cm = make_sts(a, b, f * (a * b).sqrt());
            prop_assume!(cm.is_ok());
            let cm = cm.unwrap();
            let base = conditional_cm(&cm, &MeasurementSpec::heterodyne()).unwrap();
            let turned = conditional_cm(&cm, &MeasurementSpec::new(1.0, xi).unwrap()).unwrap();
            prop_assert!((base - turned).amax() <= 1e-12);
        }

        #[test]
        fn measurement_never_increases_determinant(
            a in 0.5f64..4.0, b in 0.5f64..4.0, f in 0.0f64..1.0,
            lambda in 0.0f64..5.0, xi in -3.2f64..3.2,
        ) {
            let cm = make_sts(a, b, f * (a * b).sqrt());
            prop_assume!(cm.is_ok());
            let cm = cm.unwrap();
            let cond = conditional_cm(&cm, &MeasurementSpec::new(lambda, xi).unwrap()).unwrap();
            prop_assert!(cond.determinant() <= cm.photon().determinant() * (1.0 + 1e-12));
            // Still a valid single-mode state.
            prop_assert!(cond.determinant() >= 0.25 - 1e-9);
        }
    }
}
