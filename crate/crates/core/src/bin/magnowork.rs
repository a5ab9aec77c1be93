use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use magnowork::dynamics::EvolutionConfig;
use magnowork::harness::{
    emit_csv, evaluate_state, format_csv, load_config, optimize_detuning, preset, resolve_params, run_sweep,
    DetuningChoice, FigureTag, RunConfig, SweepRow, SweepSpec,
};
use magnowork::model::{build_drift, is_stable, steady_state};
use magnowork::{Error, Result};

#[derive(Parser)]
#[command(version, about = "Entanglement and measurement-based work extraction in a cavity magnomechanical system")]
struct Cli {
    /// TOML run configuration; defaults are used for anything omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// CSV output path (default: the config's output.path, else stdout).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for sweeps (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Reserved; the computations are deterministic.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Steady state at the configured parameters, as a one-row CSV.
    Steady,
    /// Time evolution from the configured initial state.
    Evolve,
    /// The sweep described in the config.
    Sweep,
    /// Grid search for the detunings maximizing the steady-state E_N.
    OptimizeDetuning {
        #[arg(long)]
        grid_steps: Option<usize>,
    },
    /// Data for one of the standard plots: temp, time, detuning, coupling,
    /// doublemeas or efficiency.
    ReproFig { tag: FigureTag },
}

fn report_detuning(choice: &DetuningChoice, omega_d: f64) {
    if choice.fallback {
        eprintln!("warning: no entangled grid point; keeping the configured detunings");
    } else {
        eprintln!(
            "detuning: delta_c = {:.3} omega_d, delta_n_eff = {:.3} omega_d, E_N = {:.6}",
            choice.delta_c / omega_d,
            choice.delta_n_eff / omega_d,
            choice.e_n
        );
    }
}

fn write_rows(rows: &[SweepRow], cli: &Cli, config: &RunConfig) -> Result<()> {
    match cli.out.as_ref().or(config.output_path.as_ref()) {
        Some(path) => {
            emit_csv(rows, path)?;
            eprintln!("wrote {} rows to {}", rows.len(), path.display());
        }
        None => print!("{}", format_csv(rows)),
    }
    Ok(())
}

fn sweep_and_write(config: &RunConfig, cli: &Cli) -> Result<()> {
    // Optimization is deterministic, so reporting it separately and letting
    // run_sweep repeat it gives the same detunings.
    if config.detuning.optimize {
        let (_, choice) = resolve_params(config)?;
        if let Some(choice) = choice {
            report_detuning(&choice, config.params.omega_d);
        }
    }
    let rows = run_sweep(config)?;
    let unstable = rows.iter().filter(|r| !r.stable_flag).count();
    if unstable > 0 {
        eprintln!("warning: {unstable} of {} sweep points are unstable", rows.len());
    }
    write_rows(&rows, cli, config)
}

fn run(cli: &Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Config(format!("cannot set thread count: {e}")))?;
    }
    let config = match &cli.config {
        Some(path) => load_config(path)?,
        None => RunConfig::default(),
    };
    match &cli.command {
        Command::Steady => {
            let (params, choice) = resolve_params(&config)?;
            if let Some(choice) = choice {
                report_detuning(&choice, params.omega_d);
            }
            let drift = build_drift(&params);
            if !is_stable(&drift) {
                return Err(Error::Unstable { max_real: drift.max_real_eigenvalue() });
            }
            let row = evaluate_state(params.temperature, &steady_state(&params)?, &config)?;
            write_rows(&[row], cli, &config)
        }
        Command::Evolve => {
            let evo = match &config.sweep {
                SweepSpec::Time(evo) => evo.clone(),
                _ => EvolutionConfig::default(),
            };
            let config = RunConfig { sweep: SweepSpec::Time(evo), ..config };
            sweep_and_write(&config, cli)
        }
        Command::Sweep => sweep_and_write(&config, cli),
        Command::OptimizeDetuning { grid_steps } => {
            let steps = grid_steps.unwrap_or(config.detuning.grid_steps);
            let choice = optimize_detuning(&config.params, steps)?;
            let w = config.params.omega_d;
            println!("delta_c_over_omega_d,delta_n_eff_over_omega_d,e_n,fallback");
            println!(
                "{:.11e},{:.11e},{:.11e},{}",
                choice.delta_c / w,
                choice.delta_n_eff / w,
                choice.e_n,
                choice.fallback
            );
            if choice.fallback {
                eprintln!("warning: no entangled grid point; keeping the configured detunings");
            }
            Ok(())
        }
        Command::ReproFig { tag } => {
            let mut fig = preset(*tag, config.params);
            fig.detuning.grid_steps = config.detuning.grid_steps;
            fig.output_path = config.output_path.clone();
            sweep_and_write(&fig, cli)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
