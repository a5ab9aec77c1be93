use rayon::prelude::*;

use super::config::{linspace, RunConfig, SchemeChoice, SweepSpec};
use crate::dynamics::evolve_cm;
use crate::error::{Error, Result};
use crate::gaussian::{log_negativity, standard_form, CovarianceMatrix};
use crate::model::{build_diffusion, build_drift, is_stable, photon_magnon, steady_state, SystemParams};
use crate::work::{
    efficiency, erasure_work, work_double, work_sts_heterodyne, work_sts_homodyne, DoubleMeasurementSpec,
};

/// One CSV row. `None` is an empty cell.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SweepRow {
    pub sweep_value: f64,
    pub e_n: Option<f64>,
    pub w_hom: Option<f64>,
    pub w_sep_hom: Option<f64>,
    pub w_max_hom: Option<f64>,
    pub w_het: Option<f64>,
    pub w_sep_het: Option<f64>,
    pub w_max_het: Option<f64>,
    pub w_00: Option<f64>,
    pub w_11: Option<f64>,
    pub eff_hom: Option<f64>,
    pub eff_het: Option<f64>,
    pub stable_flag: bool,
}

impl SweepRow {
    pub fn unstable(sweep_value: f64) -> Self {
        Self { sweep_value, ..Self::default() }
    }
}

/// Evaluates every requested quantity on a three-mode covariance matrix.
pub fn evaluate_state(sweep_value: f64, cm: &CovarianceMatrix, config: &RunConfig) -> Result<SweepRow> {
    let pm = photon_magnon(cm)?;
    let sf = standard_form(&pm);
    let mut row = SweepRow {
        sweep_value,
        e_n: Some(log_negativity(&pm)?),
        stable_flag: true,
        ..SweepRow::default()
    };
    let w_eras = erasure_work(&pm)?;
    if config.has(|s| matches!(s, SchemeChoice::Homodyne)) {
        let r = work_sts_homodyne(&sf)?;
        row.w_hom = Some(r.w);
        row.w_sep_hom = Some(r.w_sep);
        row.w_max_hom = Some(r.w_max);
        row.eff_hom = efficiency(r.w, w_eras);
    }
    if config.has(|s| matches!(s, SchemeChoice::Heterodyne)) {
        let r = work_sts_heterodyne(&sf)?;
        row.w_het = Some(r.w);
        row.w_sep_het = Some(r.w_sep);
        row.w_max_het = Some(r.w_max);
        row.eff_het = efficiency(r.w, w_eras);
    }
    if let Some((xi, chi)) = config.double00() {
        row.w_00 = Some(work_double(&sf, &DoubleMeasurementSpec::homodyne(xi, chi))?);
    }
    if config.has(|s| matches!(s, SchemeChoice::Double11)) {
        row.w_11 = Some(work_double(&sf, &DoubleMeasurementSpec::heterodyne())?);
    }
    Ok(row)
}

/// Parameters for one sweep value.
pub fn params_at(base: &SystemParams, sweep: &SweepSpec, value: f64) -> SystemParams {
    let mut p = *base;
    match sweep {
        SweepSpec::Temperature { .. } => p.temperature = value,
        SweepSpec::DetuningC { .. } => p.delta_c = value * p.omega_d,
        SweepSpec::CouplingNC { .. } => p.g_nc = value * p.omega_d,
        SweepSpec::Time(_) => {}
    }
    p
}

fn steady_point(params: &SystemParams, value: f64, config: &RunConfig) -> Result<SweepRow> {
    if !is_stable(&build_drift(params)) {
        return Ok(SweepRow::unstable(value));
    }
    evaluate_state(value, &steady_state(params)?, config)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetuningChoice {
    pub delta_c: f64,
    pub delta_n_eff: f64,
    pub e_n: f64,
    /// No grid point was entangled; the input detunings were kept.
    pub fallback: bool,
}

/// Grid search over `δ_c, δ̄_n ∈ [−2ω_d, 2ω_d]` for the largest steady-state
/// E_N. Ties go to the smaller `|δ_c|`, then the smaller `|δ̄_n|`.
pub fn optimize_detuning(params: &SystemParams, grid_steps: usize) -> Result<DetuningChoice> {
    if grid_steps < 5 {
        return Err(Error::validation(format!("grid_steps must be >= 5, got {grid_steps}")));
    }
    params.validate()?;
    let grid = linspace(-2.0, 2.0, grid_steps);
    let points: Vec<(f64, f64)> = grid
        .iter()
        .flat_map(|&c| grid.iter().map(move |&n| (c, n)))
        .collect();
    let scores: Vec<Option<f64>> = points
        .par_iter()
        .map(|&(c, n)| {
            let p = SystemParams {
                delta_c: c * params.omega_d,
                delta_n_eff: n * params.omega_d,
                ..*params
            };
            if !is_stable(&build_drift(&p)) {
                return None;
            }
            steady_state(&p)
                .and_then(|cm| log_negativity(&photon_magnon(&cm)?))
                .ok()
        })
        .collect();

    let mut best: Option<(f64, f64, f64)> = None;
    for (&(c, n), score) in points.iter().zip(&scores) {
        let Some(e) = *score else { continue };
        let better = match best {
            None => true,
            Some((bc, bn, be)) => {
                e > be || (e == be && (c.abs(), n.abs()) < (bc.abs(), bn.abs()))
            }
        };
        if better {
            best = Some((c, n, e));
        }
    }
    Ok(match best {
        Some((c, n, e)) if e > 0.0 => DetuningChoice {
            delta_c: c * params.omega_d,
            delta_n_eff: n * params.omega_d,
            e_n: e,
            fallback: false,
        },
        _ => DetuningChoice {
            delta_c: params.delta_c,
            delta_n_eff: params.delta_n_eff,
            e_n: 0.0,
            fallback: true,
        },
    })
}

/// Base parameters of a run, with the optimal detunings applied when
/// requested.
pub fn resolve_params(config: &RunConfig) -> Result<(SystemParams, Option<DetuningChoice>)> {
    let mut params = config.params;
    if !config.detuning.optimize {
        return Ok((params, None));
    }
    let choice = optimize_detuning(&params, config.detuning.grid_steps)?;
    params.delta_c = choice.delta_c;
    params.delta_n_eff = choice.delta_n_eff;
    Ok((params, Some(choice)))
}

/// Runs the configured sweep with sweep points evaluated in parallel.
pub fn run_sweep(config: &RunConfig) -> Result<Vec<SweepRow>> {
    run(config, true)
}

/// As [`run_sweep`], on the calling thread only.
pub fn run_sweep_serial(config: &RunConfig) -> Result<Vec<SweepRow>> {
    run(config, false)
}

fn run(config: &RunConfig, parallel: bool) -> Result<Vec<SweepRow>> {
    config.validate()?;
    let (base, _) = resolve_params(config)?;
    let rows: Vec<SweepRow> = match &config.sweep {
        SweepSpec::Time(evo) => {
            let (drift, diffusion) = (build_drift(&base), build_diffusion(&base));
            if !is_stable(&drift) {
                return Err(Error::Unstable { max_real: drift.max_real_eigenvalue() });
            }
            let traj = evolve_cm(&drift, &diffusion, evo, &base)?;
            let eval = |(t, cm): &(f64, CovarianceMatrix)| evaluate_state(*t, cm, config);
            if parallel {
                traj.par_iter().map(eval).collect::<Result<_>>()?
            } else {
                traj.iter().map(eval).collect::<Result<_>>()?
            }
        }
        sweep => {
            let values = sweep.values().unwrap_or_default();
            let eval = |&v: &f64| steady_point(&params_at(&base, sweep, v), v, config);
            if parallel {
                values.par_iter().map(eval).collect::<Result<_>>()?
            } else {
                values.iter().map(eval).collect::<Result<_>>()?
            }
        }
    };
    if rows.iter().all(|r| !r.stable_flag) {
        let p = params_at(&base, &config.sweep, rows.first().map_or(0.0, |r| r.sweep_value));
        return Err(Error::Unstable { max_real: build_drift(&p).max_real_eigenvalue() });
    }
    Ok(rows)
}
