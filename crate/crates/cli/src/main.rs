//! `trombe`: run Trombe wall scenarios, the invariant suite and
//! convergence studies.

mod error;
mod run;
mod scenario;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use trombe_core::convergence::{presets, spatial_study, temporal_study, OrderStudy, SlabProblem};
use trombe_core::verify::{self, Level, Perturbation};

use error::{CliError, CliResult};
use run::{print_reports, run_scenario};
use scenario::{Overrides, Scenario};

const CLIMATE_HELP: &str = "\
Climate CSV files have a mandatory header `time_s,q_s_wm2,t_ambient_c`:
seconds since start, insolation on the vertical face in W/m², ambient
temperature in °C. Rows must be strictly increasing in time.";

#[derive(Parser)]
#[command(name = "trombe", version, about = "Transient Trombe wall simulator", after_help = CLIMATE_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one or more scenarios and write CSV results.
    Run {
        /// Scenario TOML files.
        #[arg(required = true)]
        scenarios: Vec<PathBuf>,
        /// Output directory. With several scenarios each gets a subdirectory.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Reported days after spin-up.
        #[arg(long)]
        days: Option<f64>,
        /// Time step, s.
        #[arg(long)]
        dt: Option<f64>,
        /// Implicitness weight in [0.5, 1].
        #[arg(long)]
        sigma: Option<f64>,
        /// Run the scenarios concurrently on a worker pool.
        #[arg(long)]
        sweep: bool,
    },
    /// Run the invariant suite and report each check.
    Verify {
        #[arg(long, value_enum, default_value_t = LevelArg::Quick)]
        level: LevelArg,
        /// Relative perturbation of one sweep coefficient (test hook).
        #[arg(long, hide = true, default_value_t = 0.0)]
        perturb: f64,
    },
    /// Print observed orders of accuracy of the time and space discretization.
    Converge {
        #[arg(long, value_enum, default_value_t = ProblemArg::Slab)]
        problem: ProblemArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Quick,
    Full,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProblemArg {
    Slab,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run {
            scenarios,
            out,
            days,
            dt,
            sigma,
            sweep,
        } => cmd_run(&scenarios, out, Overrides { days, dt, sigma }, sweep),
        Command::Verify { level, perturb } => cmd_verify(level, perturb),
        Command::Converge {
            problem: ProblemArg::Slab,
        } => cmd_converge(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn cmd_run(
    paths: &[PathBuf],
    out: Option<PathBuf>,
    overrides: Overrides,
    sweep: bool,
) -> CliResult<()> {
    let scenarios = paths
        .iter()
        .map(|p| Scenario::load(p, overrides))
        .collect::<CliResult<Vec<_>>>()?;
    let many = scenarios.len() > 1;
    let jobs: Vec<(Scenario, PathBuf)> = scenarios
        .into_iter()
        .map(|s| {
            let root = out
                .clone()
                .or_else(|| s.out_dir.clone())
                .unwrap_or_else(|| PathBuf::from("out"));
            let dir = if many { root.join(&s.name) } else { root };
            (s, dir)
        })
        .collect();
    let results: Vec<_> = if sweep {
        jobs.par_iter()
            .map(|(s, dir)| run_scenario(s, dir))
            .collect()
    } else {
        jobs.iter().map(|(s, dir)| run_scenario(s, dir)).collect()
    };
    let mut reports = Vec::new();
    let mut errors = Vec::new();
    for r in results {
        match r {
            Ok(report) => reports.push(report),
            Err(e) => errors.push(e),
        }
    }
    print_reports(&reports)?;
    // The first error is reported by the caller.
    for e in errors.iter().skip(1) {
        eprintln!("error: {e}");
    }
    match errors.into_iter().next() {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

fn cmd_verify(level: LevelArg, perturb: f64) -> CliResult<()> {
    let level = match level {
        LevelArg::Quick => Level::Quick,
        LevelArg::Full => Level::Full,
    };
    let checks = verify::run(level, Perturbation { relative: perturb })
        .map_err(|e| CliError::Numerical(e.to_string()))?;
    let mut failed = 0;
    for c in &checks {
        if !c.passed {
            failed += 1;
        }
        println!(
            "{}  {:<48} {:>11.3e} (limit {:.0e})  {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.measured,
            c.threshold,
            c.detail
        );
    }
    if failed == 0 {
        println!("all {} checks passed", checks.len());
        Ok(())
    } else {
        Err(CliError::Numerical(format!(
            "{failed} of {} checks failed",
            checks.len()
        )))
    }
}

fn print_study(study: &OrderStudy, unit: &str) {
    println!("{}", study.label);
    println!("{:>12} {:>14} {:>8}", unit, "max error (K)", "order");
    let orders = study.orders();
    for (i, (h, e)) in study.steps.iter().zip(&study.errors).enumerate() {
        let order = if i == 0 {
            "-".to_string()
        } else {
            format!("{:.3}", orders[i - 1])
        };
        println!("{h:>12.6} {e:>14.6e} {order:>8}");
    }
    println!();
}

fn cmd_converge() -> CliResult<()> {
    let problem = SlabProblem::default();
    let numerical = |e: trombe_core::Error| CliError::Numerical(e.to_string());
    println!(
        "periodic slab: L = {} m, a = {:e} m²/s, amplitude {} K, period 24 h\n",
        problem.length, problem.slab.diffusivity, problem.slab.amplitude
    );
    for sigma in [0.5, 1.0] {
        let s = temporal_study(
            &problem,
            sigma,
            presets::TEMPORAL_NODES,
            presets::TEMPORAL_DT0,
            presets::HALVINGS,
        )
        .map_err(numerical)?;
        print_study(&s, "dt (s)");
    }
    for sigma in [0.5, 1.0] {
        let s = spatial_study(
            &problem,
            sigma,
            presets::SPATIAL_DT,
            presets::SPATIAL_INTERVALS0,
            presets::HALVINGS,
        )
        .map_err(numerical)?;
        print_study(&s, "dx (m)");
    }
    println!("At sigma = 1 the spatial error levels off at the first-order time error.");
    Ok(())
}
