//! Covariance-matrix time evolution `dC/dt = FC + CFᵀ + L` by fixed-step RK4.

use nalgebra::Matrix6;

use crate::error::{Error, Result};
use crate::gaussian::{validate_physicality, CovarianceMatrix};
use crate::model::{DiffusionMatrix, DriftMatrix, SystemParams};

/// Largest accepted `dt · max(|eig F|, max |F_ij|)`.
pub const MAX_STEP_PRODUCT: f64 = 0.05;

#[derive(Debug, Clone, PartialEq)]
pub enum InitialState {
    VacuumProduct,
    /// Each mode thermal at the bath temperature.
    ThermalProduct,
    Custom(CovarianceMatrix),
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionConfig {
    /// Seconds.
    pub t_end: f64,
    /// Seconds.
    pub dt: f64,
    pub sample_every: usize,
    pub initial_state: InitialState,
}

impl Default for EvolutionConfig {
    fn default() -> Self {
        Self {
            t_end: 10e-6,
            dt: 0.25e-9,
            sample_every: 40,
            initial_state: InitialState::ThermalProduct,
        }
    }
}

impl EvolutionConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::validation(format!("dt must be > 0, got {}", self.dt)));
        }
        if !(self.t_end.is_finite() && self.t_end >= self.dt) {
            return Err(Error::validation(format!(
                "t_end ({}) must be >= dt ({})",
                self.t_end, self.dt
            )));
        }
        if self.sample_every == 0 {
            return Err(Error::validation("sample_every must be >= 1"));
        }
        Ok(())
    }

    pub fn steps(&self) -> usize {
        (self.t_end / self.dt).round() as usize
    }
}

pub fn make_initial_cm(kind: &InitialState, params: &SystemParams) -> Result<CovarianceMatrix> {
    match kind {
        InitialState::VacuumProduct => Ok(CovarianceMatrix::vacuum(3)),
        InitialState::ThermalProduct => {
            let (n_c, n_n, n_d) = params.occupations();
            CovarianceMatrix::thermal(&[n_c, n_n, n_d])
        }
        InitialState::Custom(cm) => {
            if cm.n_modes() != 3 {
                return Err(Error::validation(format!(
                    "initial state must have 3 modes, got {}",
                    cm.n_modes()
                )));
            }
            if !validate_physicality(cm) {
                return Err(Error::physicality("custom initial state is not physical"));
            }
            Ok(cm.clone())
        }
    }
}

fn derivative(f: &Matrix6<f64>, l: &Matrix6<f64>, c: &Matrix6<f64>) -> Matrix6<f64> {
    f * c + c * f.transpose() + l
}

/// RK4 on `dC/dt = FC + CFᵀ + L` for `steps` steps of size `dt`, symmetrizing
/// after each step. Samples `t = 0`, every `sample_every`-th step and the
/// final step.
pub fn integrate(
    f: &Matrix6<f64>,
    l: &Matrix6<f64>,
    c0: Matrix6<f64>,
    dt: f64,
    steps: usize,
    sample_every: usize,
) -> Result<Vec<(f64, Matrix6<f64>)>> {
    let sample_every = sample_every.max(1);
    let mut out = Vec::with_capacity(steps / sample_every + 2);
    let mut c = c0;
    out.push((0.0, c));
    let limit = 1e15 * (1.0 + c0.norm());
    for step in 1..=steps {
        let k1 = derivative(f, l, &c);
        let k2 = derivative(f, l, &(c + k1 * (dt / 2.0)));
        let k3 = derivative(f, l, &(c + k2 * (dt / 2.0)));
        let k4 = derivative(f, l, &(c + k3 * dt));
        c += (k1 + (k2 + k3) * 2.0 + k4) * (dt / 6.0);
        c = (c + c.transpose()) * 0.5;
        let norm = c.norm();
        if !norm.is_finite() || norm > limit {
            return Err(Error::StepSize(format!(
                "integration diverged at step {step} (t = {:.3e} s, |C| = {norm:.3e}); reduce dt",
                step as f64 * dt
            )));
        }
        if step % sample_every == 0 || step == steps {
            out.push((step as f64 * dt, c));
        }
    }
    Ok(out)
}

/// Covariance trajectory of the full three-mode system.
pub fn evolve_cm(
    drift: &DriftMatrix,
    diffusion: &DiffusionMatrix,
    config: &EvolutionConfig,
    params: &SystemParams,
) -> Result<Vec<(f64, CovarianceMatrix)>> {
    config.validate()?;
    let fastest = drift.spectral_radius().max(drift.matrix().amax());
    if config.dt * fastest > MAX_STEP_PRODUCT {
        return Err(Error::StepSize(format!(
            "dt = {:.3e} s does not resolve the fastest rate {fastest:.3e} /s \
             (need dt <= {:.3e} s)",
            config.dt,
            MAX_STEP_PRODUCT / fastest
        )));
    }
    let initial = make_initial_cm(&config.initial_state, params)?;
    let c0 = Matrix6::from_fn(|i, j| initial.matrix()[(i, j)]);
    integrate(
        drift.matrix(),
        diffusion.matrix(),
        c0,
        config.dt,
        config.steps(),
        config.sample_every,
    )?
    .into_iter()
    .map(|(t, c)| Ok((t, CovarianceMatrix::new(crate::model::to_dmatrix(&c))?)))
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_diffusion, build_drift, solve_lyapunov};

    #[test]
    fn initial_state_examples() {
        let p = SystemParams::default();
        assert_eq!(
            make_initial_cm(&InitialState::VacuumProduct, &p).unwrap(),
            CovarianceMatrix::vacuum(3)
        );
        let cold = SystemParams { temperature: 0.0, ..p };
        assert_eq!(
            make_initial_cm(&InitialState::ThermalProduct, &cold).unwrap(),
            CovarianceMatrix::vacuum(3)
        );
        let warm = make_initial_cm(&InitialState::ThermalProduct, &p).unwrap();
        assert!((warm.matrix()[(4, 4)] - 20.840_618_351_801).abs() < 1e-9);
        assert!((warm.matrix()[(5, 5)] - 20.840_618_351_801).abs() < 1e-9);

        let bad = CovarianceMatrix::new(nalgebra::DMatrix::identity(6, 6) * 0.25).unwrap();
        assert!(make_initial_cm(&InitialState::Custom(bad), &p).is_err());
    }

    #[test]
    fn steady_state_is_a_fixed_point() {
        let p = SystemParams::default();
        let (f, l) = (build_drift(&p), build_diffusion(&p));
        let ss = solve_lyapunov(&f, &l).unwrap();
        let config = EvolutionConfig {
            t_end: 1e-6,
            initial_state: InitialState::Custom(ss.clone()),
            ..EvolutionConfig::default()
        };
        let traj = evolve_cm(&f, &l, &config, &p).unwrap();
        for (_, c) in &traj {
            let rel = (c.matrix() - ss.matrix()).norm() / ss.matrix().norm();
            assert!(rel <= 1e-9, "drifted by {rel:e}");
        }
    }

    #[test]
    fn vacuum_is_stationary_without_thermal_noise() {
        let p = SystemParams {
            temperature: 0.0,
            g_nc: 0.0,
            g_nd_eff: 0.0,
            ..SystemParams::default()
        };
        let (f, l) = (build_drift(&p), build_diffusion(&p));
        let config = EvolutionConfig {
            t_end: 1e-6,
            initial_state: InitialState::VacuumProduct,
            ..EvolutionConfig::default()
        };
        for (_, c) in evolve_cm(&f, &l, &config, &p).unwrap() {
            let block = c.reduce(&[0]).unwrap();
            assert!((block.matrix() - nalgebra::DMatrix::identity(2, 2) * 0.5).amax() < 1e-12);
        }
    }

    #[test]
    fn coarse_step_is_rejected() {
        let p = SystemParams::default();
        let config = EvolutionConfig { dt: 1e-8, ..EvolutionConfig::default() };
        let err = evolve_cm(&build_drift(&p), &build_diffusion(&p), &config, &p).unwrap_err();
        assert!(matches!(err, Error::StepSize(_)));
    }

    #[test]
    fn divergence_is_reported() {
        let f = Matrix6::identity() * 1e3;
        let err = integrate(&f, &Matrix6::zeros(), Matrix6::identity(), 0.1, 10_000, 1).unwrap_err();
        assert!(matches!(err, Error::StepSize(_)));
    }

    #[test]
    fn samples_are_strictly_increasing() {
        let f = -Matrix6::identity();
        let traj = integrate(&f, &Matrix6::identity(), Matrix6::identity(), 0.01, 105, 10).unwrap();
        assert_eq!(traj.len(), 12);
        assert!(traj.windows(2).all(|w| w[1].0 > w[0].0));
        assert!((traj.last().unwrap().0 - 1.05).abs() < 1e-12);
    }

    #[test]
    fn rotation_conserves_determinant() {
        let mut f = Matrix6::zeros();
        for (i, j, w) in [(0, 1, 1.0), (2, 3, 0.7), (4, 5, 1.3), (1, 4, 0.4), (0, 3, 0.2)] {
            f[(i, j)] = w;
            f[(j, i)] = -w;
        }
        let c0 = Matrix6::from_diagonal(&nalgebra::Vector6::new(0.5, 2.0, 0.7, 1.1, 3.0, 0.9));
        let traj = integrate(&f, &Matrix6::zeros(), c0, 1e-3, 10_000, 1000).unwrap();
        let det0 = c0.determinant();
        for (_, c) in traj {
            assert!(((c.determinant() - det0) / det0).abs() <= 1e-10);
        }
    }

    #[test]
    fn fourth_order_convergence() {
        let p = SystemParams::default();
        let (f, l) = (build_drift(&p), build_diffusion(&p));
        let c0 = Matrix6::from_fn(|i, j| {
            make_initial_cm(&InitialState::ThermalProduct, &p).unwrap().matrix()[(i, j)]
        });
        let t_end = 0.2e-6;
        let run = |dt: f64| {
            let steps = (t_end / dt).round() as usize;
            integrate(f.matrix(), l.matrix(), c0, dt, steps, steps).unwrap().last().unwrap().1
        };
        let dt = 0.5e-9;
        let (coarse, fine, reference) = (run(dt), run(dt / 2.0), run(dt / 4.0));
        let e1 = (coarse - reference).norm();
        let e2 = (fine - reference).norm();
        assert!(e1 / e2 >= 8.0, "error ratio {} ({e1:e} / {e2:e})", e1 / e2);
    }

    #[test]
    fn trajectory_stays_physical() {
        let p = SystemParams::default();
        let config = EvolutionConfig { t_end: 3e-6, ..EvolutionConfig::default() };
        let traj = evolve_cm(&build_drift(&p), &build_diffusion(&p), &config, &p).unwrap();
        assert!(traj.iter().all(|(_, c)| validate_physicality(c)));
    }
}
