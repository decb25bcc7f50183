use crate::climate::{ClimateSample, ClimateSeries};
use crate::error::{Error, Result};
use crate::model::TrombeSystem;

use super::energy::{energy_balance, EnergyBalance};
use super::mesh::Mesh;
use super::step::{initial_state, time_step, NumericsConfig, ThermalState};

/// Simulated span: discarded spin-up followed by the reported window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Horizon {
    pub spin_up_days: f64,
    pub report_days: f64,
}

impl Default for Horizon {
    fn default() -> Self {
        Self {
            spin_up_days: 5.0,
            report_days: 2.0,
        }
    }
}

/// One reported time step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub climate: ClimateSample,
    pub state: ThermalState,
    pub balance: EnergyBalance,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Simulation {
    /// Steps after spin-up, in time order.
    pub records: Vec<StepRecord>,
    /// Time of the first step whose fixpoint did not converge, spin-up
    /// included.
    pub first_unconverged: Option<f64>,
    pub total_steps: usize,
    pub total_iterations: usize,
    pub max_iterations: usize,
}

fn step_count(days: f64, dt: f64) -> Result<usize> {
    if !(days >= 0.0) || !days.is_finite() {
        return Err(Error::config(
            "horizon",
            format!("day count must be non-negative, got {days}"),
        ));
    }
    Ok((days * 86400.0 / dt).round() as usize)
}

/// Runs the time stepper over `horizon`, starting from a uniform field at
/// the first ambient temperature of `climate`.
pub fn simulate(
    system: &TrombeSystem,
    mesh: &Mesh,
    cfg: &NumericsConfig,
    climate: &ClimateSeries,
    horizon: Horizon,
) -> Result<Simulation> {
    system.validate()?;
    cfg.validate()?;
    let spin_steps = step_count(horizon.spin_up_days, cfg.dt)?;
    let report_steps = step_count(horizon.report_days, cfg.dt)?;
    let total = spin_steps + report_steps;
    let start = climate.start();
    let end = start + total as f64 * cfg.dt;
    if end > climate.end() + 1e-9 * cfg.dt {
        return Err(Error::climate(
            None,
            format!(
                "series ends at {} s but the run needs {} s",
                climate.end(),
                end
            ),
        ));
    }

    let mut state: ThermalState = initial_state(system, mesh, climate.samples()[0].ambient, start)?;
    let mut sim = Simulation {
        records: Vec::with_capacity(report_steps),
        ..Simulation::default()
    };
    for k in 1..=total {
        let sample = climate.at(start + k as f64 * cfg.dt)?;
        let next = time_step(&state, &sample, system, mesh, cfg)?;
        sim.total_steps += 1;
        sim.total_iterations += next.iterations;
        sim.max_iterations = sim.max_iterations.max(next.iterations);
        if !next.converged && sim.first_unconverged.is_none() {
            sim.first_unconverged = Some(next.time);
        }
        if k > spin_steps {
            let balance = energy_balance(&state, &next, &sample, system, mesh, cfg)?;
            sim.records.push(StepRecord {
                climate: sample,
                state: next.clone(),
                balance,
            });
        }
        state = next;
    }
    Ok(sim)
}
