//! Linearized photon–magnon–phonon model: parameters, drift and diffusion
//! matrices, stability and the steady-state covariance matrix.
//!
//! Quadrature basis is `(δX_c, δY_c, δX_n, δY_n, δx, δy)`.

mod lyapunov;

use std::f64::consts::{PI, SQRT_2, TAU};

use nalgebra::{DMatrix, Matrix6};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gaussian::{CovarianceMatrix, TwoModeCM};

pub use lyapunov::{lyapunov_residual, solve_lyapunov, solve_lyapunov_dense};

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant, J/K.
pub const K_B: f64 = 1.380_649e-23;

/// Physical parameters of the three-mode system. Frequencies, detunings,
/// rates and couplings are angular (rad/s).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    /// Cavity resonance, used only for the thermal occupation.
    pub omega_c: f64,
    /// Magnon resonance, used only for the thermal occupation.
    pub omega_n: f64,
    /// Mechanical resonance.
    pub omega_d: f64,
    pub delta_c: f64,
    /// Effective magnon detuning including the magnomechanical shift.
    pub delta_n_eff: f64,
    pub lambda_c: f64,
    pub lambda_n: f64,
    /// Mechanical damping.
    pub gamma_d: f64,
    pub g_nc: f64,
    /// Drive-enhanced magnomechanical coupling.
    pub g_nd_eff: f64,
    /// Single-magnon magnomechanical coupling.
    pub g_nd_bare: f64,
    /// Bath temperature, K.
    pub temperature: f64,
    /// Drive field amplitude, T.
    pub drive_field_b0: f64,
    pub drive_freq_omega0: f64,
    /// YIG sphere diameter, m.
    pub sphere_diameter: f64,
    /// Spin density, m⁻³.
    pub spin_density: f64,
    /// Gyromagnetic ratio, rad/(s·T).
    pub gyro_gamma_g: f64,
}

impl Default for SystemParams {
    fn default() -> Self {
        let omega_d = TAU * 10e6;
        let omega_n = TAU * 10e9;
        Self {
            omega_c: TAU * 10e9,
            omega_n,
            omega_d,
            delta_c: -omega_d,
            delta_n_eff: omega_d,
            lambda_c: TAU * 1e6,
            lambda_n: TAU * 1e6,
            gamma_d: TAU * 100.0,
            g_nc: TAU * 3.2e6,
            g_nd_eff: TAU * 3.2e6,
            g_nd_bare: TAU * 0.2,
            temperature: 10e-3,
            drive_field_b0: 3.9e-5,
            drive_freq_omega0: omega_n - omega_d,
            sphere_diameter: 250e-6,
            spin_density: 4.22e27,
            gyro_gamma_g: TAU * 28e9,
        }
    }
}

impl SystemParams {
    pub fn validate(&self) -> Result<()> {
        let all = [
            ("omega_c", self.omega_c),
            ("omega_n", self.omega_n),
            ("omega_d", self.omega_d),
            ("delta_c", self.delta_c),
            ("delta_n_eff", self.delta_n_eff),
            ("lambda_c", self.lambda_c),
            ("lambda_n", self.lambda_n),
            ("gamma_d", self.gamma_d),
            ("g_nc", self.g_nc),
            ("g_nd_eff", self.g_nd_eff),
            ("g_nd_bare", self.g_nd_bare),
            ("temperature", self.temperature),
            ("drive_field_b0", self.drive_field_b0),
            ("drive_freq_omega0", self.drive_freq_omega0),
            ("sphere_diameter", self.sphere_diameter),
            ("spin_density", self.spin_density),
            ("gyro_gamma_g", self.gyro_gamma_g),
        ];
        if let Some((name, _)) = all.iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::validation(format!("{name} must be finite")));
        }
        let non_negative = [
            ("lambda_c", self.lambda_c),
            ("lambda_n", self.lambda_n),
            ("gamma_d", self.gamma_d),
            ("g_nc", self.g_nc),
            ("g_nd_eff", self.g_nd_eff),
            ("g_nd_bare", self.g_nd_bare),
            ("temperature", self.temperature),
            ("drive_field_b0", self.drive_field_b0),
            ("sphere_diameter", self.sphere_diameter),
            ("spin_density", self.spin_density),
            ("gyro_gamma_g", self.gyro_gamma_g),
        ];
        if let Some((name, v)) = non_negative.iter().find(|(_, v)| *v < 0.0) {
            return Err(Error::validation(format!("{name} must be >= 0, got {v}")));
        }
        for (name, v) in [
            ("omega_c", self.omega_c),
            ("omega_n", self.omega_n),
            ("omega_d", self.omega_d),
        ] {
            if v <= 0.0 {
                return Err(Error::validation(format!("{name} must be > 0, got {v}")));
            }
        }
        Ok(())
    }

    /// Mean thermal occupations `(N_c, N_n, N_d)` at the bath temperature.
    pub fn occupations(&self) -> (f64, f64, f64) {
        (
            thermal_occupation(self.omega_c, self.temperature),
            thermal_occupation(self.omega_n, self.temperature),
            thermal_occupation(self.omega_d, self.temperature),
        )
    }
}

/// Bose–Einstein occupation `1/(exp(ħω/k_B T) − 1)`, exactly zero at `T = 0`.
pub fn thermal_occupation(omega: f64, temperature: f64) -> f64 {
    if temperature <= 0.0 {
        return 0.0;
    }
    1.0 / (HBAR * omega / (K_B * temperature)).exp_m1()
}

/// Number of spins in a sphere of the given diameter.
pub fn spin_count(sphere_diameter: f64, spin_density: f64) -> f64 {
    spin_density * PI / 6.0 * sphere_diameter.powi(3)
}

/// Drive Rabi frequency `(√5/4) γ_g √𝒩 B₀` with `𝒩 = ϱ·(π/6)d³`.
pub fn rabi_frequency(b0: f64, sphere_diameter: f64, spin_density: f64, gyro: f64) -> f64 {
    5f64.sqrt() / 4.0 * gyro * spin_count(sphere_diameter, spin_density).sqrt() * b0
}

/// Effective magnomechanical coupling `√2 g_nd Ω / Ω_d`.
pub fn effective_coupling(g_nd_bare: f64, rabi: f64, omega_d: f64) -> f64 {
    SQRT_2 * g_nd_bare * rabi / omega_d
}

/// Drive-derived steady-state quantities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveDerived {
    pub rabi_omega: f64,
    pub spin_count: f64,
    /// Magnon steady-state amplitude.
    pub n_ss: Complex64,
    /// Mechanical displacement, dimensionless.
    pub x_ss: f64,
}

impl DriveDerived {
    /// Amplitude implied by the effective coupling, `n_ss = −i 𝒢_nd/(√2 g_nd)`.
    pub fn from_effective_coupling(params: &SystemParams) -> Result<Self> {
        if params.g_nd_bare <= 0.0 {
            return Err(Error::validation("g_nd_bare must be > 0"));
        }
        let n_ss = Complex64::new(0.0, -params.g_nd_eff / (SQRT_2 * params.g_nd_bare));
        Ok(Self {
            rabi_omega: drive_rabi(params),
            spin_count: spin_count(params.sphere_diameter, params.spin_density),
            n_ss,
            x_ss: displacement(params, n_ss),
        })
    }
}

fn drive_rabi(params: &SystemParams) -> f64 {
    rabi_frequency(
        params.drive_field_b0,
        params.sphere_diameter,
        params.spin_density,
        params.gyro_gamma_g,
    )
}

fn displacement(params: &SystemParams, n_ss: Complex64) -> f64 {
    -(params.g_nd_bare / params.omega_d) * n_ss.norm_sqr()
}

/// Far-detuned magnon amplitude `n_ss = iΩδ_c/(𝒢_nc² − δ̄_n δ_c)` and the
/// matching displacement `x_ss = −(g_nd/Ω_d)|n_ss|²`.
pub fn steady_amplitudes(params: &SystemParams) -> Result<DriveDerived> {
    let rabi = drive_rabi(params);
    let g2 = params.g_nc * params.g_nc;
    let cross = params.delta_n_eff * params.delta_c;
    let denom = g2 - cross;
    if denom.abs() <= 1e-12 * (g2 + cross.abs()) {
        return Err(Error::Singularity(format!(
            "g_nc^2 - delta_n * delta_c = {denom:.3e} vanishes"
        )));
    }
    let n_ss = Complex64::new(0.0, rabi * params.delta_c / denom);
    Ok(DriveDerived {
        rabi_omega: rabi,
        spin_count: spin_count(params.sphere_diameter, params.spin_density),
        n_ss,
        x_ss: displacement(params, n_ss),
    })
}

/// 6×6 drift matrix of the linearized fluctuation dynamics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftMatrix(Matrix6<f64>);

impl DriftMatrix {
    pub fn matrix(&self) -> &Matrix6<f64> {
        &self.0
    }

    pub fn eigenvalues(&self) -> Vec<Complex64> {
        self.0.complex_eigenvalues().iter().copied().collect()
    }

    pub fn max_real_eigenvalue(&self) -> f64 {
        self.eigenvalues()
            .iter()
            .map(|z| z.re)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues()
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

/// Structural nonzeros of the drift matrix.
pub const DRIFT_PATTERN: [[bool; 6]; 6] = [
    [true, true, false, true, false, false],
    [true, true, true, false, false, false],
    [false, true, true, true, true, false],
    [true, false, true, true, false, false],
    [false, false, false, false, false, true],
    [false, false, false, true, true, true],
];

#[rustfmt::skip]
pub fn build_drift(p: &SystemParams) -> DriftMatrix {
    let (lc, ln, dc, dn) = (p.lambda_c, p.lambda_n, p.delta_c, p.delta_n_eff);
    let (g, gd, wd, gam) = (p.g_nc, p.g_nd_eff, p.omega_d, p.gamma_d);
    DriftMatrix(Matrix6::new(
        -lc,  dc,  0.0,  g,   0.0, 0.0,
        -dc, -lc, -g,    0.0, 0.0, 0.0,
        0.0,  g,  -ln,   dn, -gd,  0.0,
        -g,   0.0, -dn, -ln,  0.0, 0.0,
        0.0,  0.0, 0.0,  0.0, 0.0, wd,
        0.0,  0.0, 0.0,  gd, -wd, -gam,
    ))
}

/// Diagonal diffusion matrix of the input noises.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffusionMatrix(Matrix6<f64>);

impl DiffusionMatrix {
    pub fn matrix(&self) -> &Matrix6<f64> {
        &self.0
    }

    pub fn diagonal(&self) -> [f64; 6] {
        std::array::from_fn(|i| self.0[(i, i)])
    }
}

pub fn build_diffusion(p: &SystemParams) -> DiffusionMatrix {
    let (n_c, n_n, n_d) = p.occupations();
    let c = p.lambda_c * (2.0 * n_c + 1.0);
    let n = p.lambda_n * (2.0 * n_n + 1.0);
    let d = p.gamma_d * (2.0 * n_d + 1.0);
    DiffusionMatrix(Matrix6::from_diagonal(&nalgebra::Vector6::new(c, c, n, n, 0.0, d)))
}

/// True iff every eigenvalue of the drift matrix has negative real part.
pub fn is_stable(drift: &DriftMatrix) -> bool {
    drift.max_real_eigenvalue() < 0.0
}

/// Steady-state covariance matrix of all three modes.
pub fn steady_state(params: &SystemParams) -> Result<CovarianceMatrix> {
    params.validate()?;
    solve_lyapunov(&build_drift(params), &build_diffusion(params))
}

/// Photon–magnon marginal (rows/columns 1–4); the phonon is traced out.
pub fn photon_magnon(cm: &CovarianceMatrix) -> Result<TwoModeCM> {
    TwoModeCM::try_from(&cm.reduce(&[0, 1])?)
}

pub(crate) fn to_dmatrix(m: &Matrix6<f64>) -> DMatrix<f64> {
    DMatrix::from_iterator(6, 6, m.iter().copied())
}
