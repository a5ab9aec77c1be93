//! Preset runs that regenerate the data behind each published plot.

use std::fmt;
use std::str::FromStr;

use super::config::{DetuningOptions, RunConfig, SchemeChoice, SweepSpec};
use crate::dynamics::EvolutionConfig;
use crate::error::{Error, Result};
use crate::model::SystemParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureTag {
    /// E_N and single-measurement works against temperature.
    Temp,
    /// E_N and works against time from a thermal product state.
    Time,
    /// E_N and works against the photon detuning `δ_c/ω_d`.
    Detuning,
    /// E_N and works against the photon–magnon coupling `g_nc/ω_d`.
    Coupling,
    /// Double-measurement works against temperature.
    DoubleMeas,
    /// Homodyne and heterodyne efficiencies against temperature.
    Efficiency,
}

impl FigureTag {
    pub const ALL: [FigureTag; 6] = [
        FigureTag::Temp,
        FigureTag::Time,
        FigureTag::Detuning,
        FigureTag::Coupling,
        FigureTag::DoubleMeas,
        FigureTag::Efficiency,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FigureTag::Temp => "temp",
            FigureTag::Time => "time",
            FigureTag::Detuning => "detuning",
            FigureTag::Coupling => "coupling",
            FigureTag::DoubleMeas => "doublemeas",
            FigureTag::Efficiency => "efficiency",
        }
    }
}

impl fmt::Display for FigureTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FigureTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FigureTag::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = FigureTag::ALL.iter().map(|t| t.name()).collect();
                Error::validation(format!("unknown figure {s:?}; expected one of {}", names.join(", ")))
            })
    }
}

const SINGLE: [SchemeChoice; 2] = [SchemeChoice::Homodyne, SchemeChoice::Heterodyne];

/// Run configuration for a figure, on top of the given physical parameters.
/// Detunings are optimized at the parameters' temperature.
pub fn preset(tag: FigureTag, params: SystemParams) -> RunConfig {
    let temperature = SweepSpec::Temperature { min: 0.01, max: 0.25, steps: 49 };
    let (sweep, schemes) = match tag {
        FigureTag::Temp | FigureTag::Efficiency => (temperature, SINGLE.to_vec()),
        FigureTag::Time => (SweepSpec::Time(EvolutionConfig::default()), SINGLE.to_vec()),
        FigureTag::Detuning => (SweepSpec::DetuningC { min: -2.0, max: 2.0, steps: 81 }, SINGLE.to_vec()),
        FigureTag::Coupling => (SweepSpec::CouplingNC { min: 0.0, max: 0.5, steps: 51 }, SINGLE.to_vec()),
        FigureTag::DoubleMeas => (
            temperature,
            vec![
                SchemeChoice::Homodyne,
                SchemeChoice::Heterodyne,
                SchemeChoice::Double00 { xi: 0.0, chi: 0.0 },
                SchemeChoice::Double11,
            ],
        ),
    };
    RunConfig {
        params,
        sweep,
        schemes,
        detuning: DetuningOptions { optimize: true, grid_steps: 21 },
        output_path: None,
    }
}
