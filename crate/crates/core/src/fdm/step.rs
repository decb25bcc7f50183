use crate::airgap::mean_rise_ratio;
use crate::climate::ClimateSample;
use crate::error::{Error, Result};
use crate::model::{
    convective_gap_coefficient, gap_velocity, linearized_radiation_coefficient, CoefficientSet,
    TrombeSystem,
};
use crate::oracle;

use super::mesh::Mesh;
use super::sweep::solve_extended;

/// Channel velocities below this are treated as stagnant, m/s.
const MIN_VELOCITY: f64 = 1e-9;

/// Time-weighting and fixpoint controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericsConfig {
    /// Implicitness weight: 0.5 is Crank–Nicolson, 1 is fully implicit.
    pub sigma: f64,
    /// Time step, s.
    pub dt: f64,
    /// Largest node change between fixpoint iterates accepted as converged, K.
    pub fixpoint_tol: f64,
    pub fixpoint_max_iter: usize,
    /// Relaxation factor applied to the channel velocity between iterates.
    pub under_relaxation: f64,
}

impl NumericsConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.5..=1.0).contains(&self.sigma) {
            return Err(Error::config(
                "numerics.sigma",
                format!("must lie in [0.5, 1], got {}", self.sigma),
            ));
        }
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::config("numerics.dt", "must be positive"));
        }
        if !(self.fixpoint_tol > 0.0) {
            return Err(Error::config("numerics.fixpoint_tol", "must be positive"));
        }
        if self.fixpoint_max_iter == 0 {
            return Err(Error::config(
                "numerics.fixpoint_max_iter",
                "must be at least 1",
            ));
        }
        if !(self.under_relaxation > 0.0 && self.under_relaxation <= 1.0) {
            return Err(Error::config(
                "numerics.under_relaxation",
                "must lie in (0, 1]",
            ));
        }
        Ok(())
    }
}

impl Default for NumericsConfig {
    fn default() -> Self {
        Self {
            sigma: 0.5,
            dt: 60.0,
            fixpoint_tol: 1e-4,
            fixpoint_max_iter: 50,
            under_relaxation: 0.5,
        }
    }
}

/// Node temperatures of one time level and how they were obtained.
#[derive(Debug, Clone, PartialEq)]
pub struct ThermalState {
    /// Seconds since scenario start.
    pub time: f64,
    /// Kelvin, in mesh order.
    pub temperatures: Vec<f64>,
    /// Coefficients of the final fixpoint iterate.
    pub coeffs: CoefficientSet,
    pub converged: bool,
    pub iterations: usize,
}

/// Known temperatures and sources acting on the system during one step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Boundary {
    pub ambient: f64,
    pub sky: f64,
    pub room_air: f64,
    pub room_radiant: f64,
    /// Solar flux absorbed at the wall face, `q_s·(τα)_e`, W/m².
    pub absorbed_solar: f64,
}

/// Everything one linear solve needs, with coefficients frozen.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearStep {
    /// Temperatures at the known time level, mesh order.
    pub previous: Vec<f64>,
    pub coeffs: CoefficientSet,
    pub boundary: Boundary,
    pub sigma: f64,
    pub dt: f64,
    pub dx: f64,
    /// Wall conductivity λ, W/(m·K).
    pub conductivity: f64,
    /// Wall volumetric heat capacity ρ·c, J/(m³·K).
    pub heat_capacity: f64,
    /// Channel advection conductance `ρ·G·c_p / (φ·H·B)` tying the mean
    /// channel air to room air, W/(m²·K). Zero for a sealed channel.
    pub advection: f64,
}

impl LinearStep {
    pub fn diffusivity(&self) -> f64 {
        self.conductivity / self.heat_capacity
    }

    pub fn wall_nodes(&self) -> usize {
        self.previous.len() - 3
    }
}

/// Which linear solver runs inside the fixpoint loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LinearSolver {
    #[default]
    ExtendedSweep,
    /// Dense elimination with partial pivoting. Reference only.
    Dense,
}

impl LinearSolver {
    pub fn solve(self, step: &LinearStep) -> Result<Vec<f64>> {
        match self {
            LinearSolver::ExtendedSweep => solve_extended(step),
            LinearSolver::Dense => oracle::dense_step(step),
        }
    }
}

/// Heat-transfer coefficients evaluated on the temperatures `t` with mean
/// channel velocity `velocity`.
pub fn coefficients_for(
    system: &TrombeSystem,
    t: &[f64],
    velocity: f64,
    sky: f64,
) -> Result<CoefficientSet> {
    let gl = &system.glazing;
    let gap = &system.gap;
    let h_cgap = convective_gap_coefficient(velocity, gap);
    let h_rgap = linearized_radiation_coefficient(
        t[Mesh::OUTER_SURFACE],
        t[Mesh::INNER_GLASS],
        gl.gap_emissivity(),
    )?;
    let h_r_inf = linearized_radiation_coefficient(t[Mesh::OUTER_GLASS], sky, gl.emissivity_glass)?;
    let mut coeffs = CoefficientSet::sealed(
        h_cgap,
        h_rgap,
        gl.h12,
        gl.wind.coefficient(),
        h_r_inf,
        &system.room,
    );
    if velocity > 0.0 {
        coeffs.gap_velocity = velocity;
        coeffs.gap_flow = velocity * gap.cross_section;
        coeffs.mean_rise_ratio = mean_rise_ratio(&coeffs, gap, &system.wall, gap.march_nodes)?;
    }
    Ok(coeffs)
}

fn advection_conductance(system: &TrombeSystem, coeffs: &CoefficientSet) -> f64 {
    if coeffs.gap_flow <= 0.0 {
        return 0.0;
    }
    let gap = &system.gap;
    gap.air_density * coeffs.gap_flow * gap.air_cp
        / (coeffs.mean_rise_ratio * system.wall.height * system.wall.width)
}

/// Uniform initial field at `temperature`, channel at rest.
pub fn initial_state(
    system: &TrombeSystem,
    mesh: &Mesh,
    temperature: f64,
    time: f64,
) -> Result<ThermalState> {
    let temperatures = vec![temperature; mesh.total_nodes()];
    let sky = system.glazing.sky.temperature(temperature)?;
    let coeffs = coefficients_for(system, &temperatures, 0.0, sky)?;
    Ok(ThermalState {
        time,
        temperatures,
        coeffs,
        converged: true,
        iterations: 0,
    })
}

/// Advances `state` to `climate.time` with the extended sweep.
pub fn time_step(
    state: &ThermalState,
    climate: &ClimateSample,
    system: &TrombeSystem,
    mesh: &Mesh,
    cfg: &NumericsConfig,
) -> Result<ThermalState> {
    time_step_with(
        state,
        climate,
        system,
        mesh,
        cfg,
        LinearSolver::ExtendedSweep,
    )
}

/// One time step: iterate coefficients and the linear solve until
/// successive temperature iterates agree within `cfg.fixpoint_tol`.
///
/// A step that exhausts `cfg.fixpoint_max_iter` is returned with
/// `converged == false`.
pub fn time_step_with(
    state: &ThermalState,
    climate: &ClimateSample,
    system: &TrombeSystem,
    mesh: &Mesh,
    cfg: &NumericsConfig,
    solver: LinearSolver,
) -> Result<ThermalState> {
    if state.temperatures.len() != mesh.total_nodes() {
        return Err(Error::config(
            "state",
            "temperature vector does not match the mesh",
        ));
    }
    let dt = climate.time - state.time;
    if !(dt > 0.0) {
        return Err(Error::config(
            "numerics.dt",
            "climate sample must lie after the state",
        ));
    }
    let sky = system.glazing.sky.temperature(climate.ambient)?;
    let room = &system.room;
    let boundary = Boundary {
        ambient: climate.ambient,
        sky,
        room_air: room.air_temperature,
        room_radiant: room.radiant_temperature,
        absorbed_solar: climate.insolation * system.wall.absorptance_transmittance,
    };
    let vents_open = system.gap.vents.is_open(climate.time);

    let mut iterate = state.temperatures.clone();
    let mut velocity = if vents_open {
        state.coeffs.gap_velocity
    } else {
        0.0
    };
    let mut coeffs = state.coeffs;
    for iteration in 1..=cfg.fixpoint_max_iter {
        let target = if vents_open {
            gap_velocity(
                &system.gap,
                &system.wall,
                iterate[Mesh::GAP_AIR],
                room.air_temperature,
            )
        } else {
            0.0
        };
        velocity += cfg.under_relaxation * (target - velocity);
        if velocity < MIN_VELOCITY {
            velocity = 0.0;
        }
        coeffs = coefficients_for(system, &iterate, velocity, sky)?;
        let step = LinearStep {
            previous: state.temperatures.clone(),
            coeffs,
            boundary,
            sigma: cfg.sigma,
            dt,
            dx: mesh.dx(),
            conductivity: system.wall.conductivity,
            heat_capacity: system.wall.volumetric_heat_capacity(),
            advection: advection_conductance(system, &coeffs),
        };
        let next = solver.solve(&step)?;
        if let Some(bad) = next.iter().position(|t| !(t.is_finite() && *t > 0.0)) {
            return Err(Error::Singular {
                node: bad,
                label: "non-physical temperature",
            });
        }
        let change = next
            .iter()
            .zip(&iterate)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        iterate = next;
        if change < cfg.fixpoint_tol {
            return Ok(ThermalState {
                time: climate.time,
                temperatures: iterate,
                coeffs,
                converged: true,
                iterations: iteration,
            });
        }
    }
    Ok(ThermalState {
        time: climate.time,
        temperatures: iterate,
        coeffs,
        converged: false,
        iterations: cfg.fixpoint_max_iter,
    })
}

/// Assembles the linear step that produced `next` from `previous`, using
/// the coefficients recorded on `next`.
pub(crate) fn replay_step(
    previous: &ThermalState,
    next: &ThermalState,
    climate: &ClimateSample,
    system: &TrombeSystem,
    mesh: &Mesh,
    cfg: &NumericsConfig,
) -> Result<LinearStep> {
    let sky = system.glazing.sky.temperature(climate.ambient)?;
    Ok(LinearStep {
        previous: previous.temperatures.clone(),
        coeffs: next.coeffs,
        boundary: Boundary {
            ambient: climate.ambient,
            sky,
            room_air: system.room.air_temperature,
            room_radiant: system.room.radiant_temperature,
            absorbed_solar: climate.insolation * system.wall.absorptance_transmittance,
        },
        sigma: cfg.sigma,
        dt: next.time - previous.time,
        dx: mesh.dx(),
        conductivity: system.wall.conductivity,
        heat_capacity: system.wall.volumetric_heat_capacity(),
        advection: advection_conductance(system, &next.coeffs),
    })
}
