//! Work extraction from measured Gaussian states, in units of `k_B T`.

use std::f64::consts::LN_2;

use nalgebra::{Matrix2, Vector2};

use crate::error::{Error, Result};
use crate::gaussian::{conditional_cm, von_neumann_entropy, MeasurementSpec, StandardFormParams, TwoModeCM};
use crate::model::K_B;

/// Efficiency is undefined below this erasure work (pure global state).
pub const ERASURE_FLOOR: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    Homodyne,
    Heterodyne,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorkReport {
    pub w: f64,
    /// Largest work any separable state with the same local blocks can give.
    pub w_sep: f64,
    pub w_max: f64,
    pub scheme: Scheme,
    /// `w > w_sep`: the extracted work certifies entanglement.
    pub entangled: bool,
}

impl WorkReport {
    fn new(scheme: Scheme, w: f64, w_sep: f64, w_max: f64) -> Self {
        Self { w, w_sep, w_max, scheme, entangled: w > w_sep }
    }
}

/// Two successive measurements: `(λ, ξ)` on the magnon, then `(Λ, χ)` on the
/// photon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoubleMeasurementSpec {
    pub lambda: f64,
    pub big_lambda: f64,
    pub xi: f64,
    pub chi: f64,
}

impl DoubleMeasurementSpec {
    pub fn homodyne(xi: f64, chi: f64) -> Self {
        Self { lambda: 0.0, big_lambda: 0.0, xi, chi }
    }

    pub fn heterodyne() -> Self {
        Self { lambda: 1.0, big_lambda: 1.0, xi: 0.0, chi: 0.0 }
    }
}

fn check_entropy(h: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&h) {
        return Err(Error::validation(format!("entropy must lie in [0, 1] bits, got {h}")));
    }
    Ok(())
}

/// `ln 2 · (1 − H)` for a one-bit memory with Shannon entropy `H` (bits).
pub fn classical_szilard_work(h: f64) -> Result<f64> {
    check_entropy(h)?;
    Ok(LN_2 * (1.0 - h))
}

/// Same as [`classical_szilard_work`] with the conditional entropy `H(A|B)`.
pub fn conditional_szilard_work(h_cond: f64) -> Result<f64> {
    check_entropy(h_cond)?;
    Ok(LN_2 * (1.0 - h_cond))
}

/// `½ ln(det C_c / det C_c^{N_n})` for a measurement on the magnon.
pub fn work_single_general(cm: &TwoModeCM, spec: &MeasurementSpec) -> Result<f64> {
    let before = cm.photon().determinant();
    let after = conditional_cm(cm, spec)?.determinant();
    if !(after > 0.0 && after.is_finite()) {
        return Err(Error::numerical(format!(
            "conditional determinant {after:.3e} is degenerate"
        )));
    }
    Ok(0.5 * (before / after).ln())
}

fn check_sts(p: &StandardFormParams) -> Result<()> {
    if !(p.alpha >= 0.5 - 1e-9 && p.beta >= 0.5 - 1e-9) {
        return Err(Error::physicality(format!(
            "local variances must be >= 1/2, got alpha = {}, beta = {}",
            p.alpha, p.beta
        )));
    }
    if p.alpha * p.beta <= p.delta * p.delta {
        return Err(Error::physicality("alpha*beta <= delta^2"));
    }
    Ok(())
}

pub fn work_sts_homodyne(p: &StandardFormParams) -> Result<WorkReport> {
    check_sts(p)?;
    let (a, b, d) = (p.alpha, p.beta, p.delta);
    let w = 0.5 * (a * b / (a * b - d * d)).ln();
    let w_sep = 0.5 * (4.0 * a * b / (2.0 * a + 2.0 * b - 1.0)).ln();
    let w_max = 0.5 * (4.0 * a * b / (1.0 + 2.0 * (a - b).abs())).ln();
    Ok(WorkReport::new(Scheme::Homodyne, w, w_sep, w_max))
}

pub fn work_sts_heterodyne(p: &StandardFormParams) -> Result<WorkReport> {
    check_sts(p)?;
    let (a, b, d) = (p.alpha, p.beta, p.delta);
    let num = 2.0 * a * b + a;
    let den = num - 2.0 * d * d;
    if den <= 0.0 {
        return Err(Error::physicality("2αβ + α − 2Δ² must be positive"));
    }
    let w = (num / den).ln();
    let w_sep = (2.0 * a * (2.0 * b + 1.0) / (4.0 * a + 2.0 * b - 1.0)).ln();
    let w_max = if a <= b {
        (2.0 * a).ln()
    } else {
        (2.0 * a * (1.0 + 2.0 * b) / (1.0 + 4.0 * a - 2.0 * b)).ln()
    };
    Ok(WorkReport::new(Scheme::Heterodyne, w, w_sep, w_max))
}

pub fn work_sts(p: &StandardFormParams, scheme: Scheme) -> Result<WorkReport> {
    match scheme {
        Scheme::Homodyne => work_sts_homodyne(p),
        Scheme::Heterodyne => work_sts_heterodyne(p),
    }
}

/// Closed forms for a double homodyne `(0, 0)` or double heterodyne `(1, 1)`
/// measurement.
pub fn work_double(p: &StandardFormParams, spec: &DoubleMeasurementSpec) -> Result<f64> {
    check_sts(p)?;
    let (a, b, d) = (p.alpha, p.beta, p.delta);
    match (spec.lambda, spec.big_lambda) {
        (l, bl) if l == 0.0 && bl == 0.0 => {
            let c = (spec.xi + spec.chi).cos();
            Ok(0.5 * (a * b / (a * b - d * d * c * c)).ln())
        }
        (l, bl) if l == 1.0 && bl == 1.0 => {
            let num = (1.0 + 2.0 * a) * (1.0 + 2.0 * b);
            let den = 1.0 + 2.0 * b + a * (2.0 + 4.0 * b) - 4.0 * d * d;
            if den <= 0.0 {
                return Err(Error::physicality("double-heterodyne denominator must be positive"));
            }
            Ok((num / den).ln())
        }
        (l, bl) => Err(Error::UnsupportedScheme(format!(
            "double measurement (lambda = {l}, Lambda = {bl}) has no closed form; \
             use work_double_general"
        ))),
    }
}

/// Work from any double measurement: the magnon is measured with `(λ, ξ)`,
/// then the photon with `(Λ, χ)`. This is
/// `½ ln[det(C_c + Γ^{N_c}) / det(C_c^{N_n} + Γ^{N_c})]`, with the
/// determinants replaced by variances along `(cos χ, sin χ)` when `Λ = 0`.
pub fn work_double_general(cm: &TwoModeCM, spec: &DoubleMeasurementSpec) -> Result<f64> {
    let first = MeasurementSpec::new(spec.lambda, spec.xi)?;
    let second = MeasurementSpec::new(spec.big_lambda, spec.chi)?;
    let c_c = cm.photon();
    let c_cond = conditional_cm(cm, &first)?;
    let (before, after) = if second.is_homodyne() {
        let u: Vector2<f64> = second.quadrature();
        ((u.transpose() * c_c * u)[0], (u.transpose() * c_cond * u)[0])
    } else {
        let gamma: Matrix2<f64> = crate::gaussian::measurement_cm(&second)?;
        ((c_c + gamma).determinant(), (c_cond + gamma).determinant())
    };
    if !(after > 0.0 && after.is_finite()) {
        return Err(Error::numerical(format!(
            "conditional determinant {after:.3e} is degenerate"
        )));
    }
    Ok(0.5 * (before / after).ln())
}

/// Erasure cost: the global von Neumann entropy in nats.
pub fn erasure_work(cm: &TwoModeCM) -> Result<f64> {
    von_neumann_entropy(&cm.to_cm())
}

/// `w / w_eras`, or `None` when the global state is pure.
pub fn efficiency(w: f64, w_eras: f64) -> Option<f64> {
    if w_eras <= ERASURE_FLOOR {
        None
    } else {
        Some(w / w_eras)
    }
}

/// Converts a work in units of `k_B T` to joules.
pub fn to_joules(w: f64, temperature: f64) -> f64 {
    w * K_B * temperature
}
