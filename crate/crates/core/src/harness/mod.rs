//! Configuration, parameter sweeps and CSV output.

pub mod config;
pub mod csv;
pub mod figures;
pub mod sweep;

pub use config::{load_config, parse_config, DetuningOptions, RunConfig, SchemeChoice, SweepSpec};
pub use csv::{emit_csv, format_csv, parse_csv, HEADER};
pub use figures::{preset, FigureTag};
pub use sweep::{
    evaluate_state, optimize_detuning, params_at, resolve_params, run_sweep, run_sweep_serial, DetuningChoice,
    SweepRow,
};
