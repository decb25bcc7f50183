use crate::airgap::{gap_convective_gain, GapFlowState};
use crate::climate::ClimateSample;
use crate::error::Result;
use crate::model::TrombeSystem;

use super::mesh::Mesh;
use super::step::{replay_step, NumericsConfig, ThermalState};

/// Instantaneous fluxes per square metre of wall, signed so that
/// `absorbed_solar = q_t + q_f + q_r + stored_rate` up to time-weighting
/// error.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EnergyBalance {
    /// Loss from the outer pane to ambient air and sky.
    pub q_t: f64,
    /// Gain to the room carried by the channel flow.
    pub q_f: f64,
    /// Gain to the room from the inner wall face, `q_r_convective + q_r_radiative`.
    pub q_r: f64,
    pub q_r_convective: f64,
    pub q_r_radiative: f64,
    /// `q_s·(τα)_e`.
    pub absorbed_solar: f64,
    /// Rate of change of wall heat content.
    pub stored_rate: f64,
}

impl EnergyBalance {
    pub fn residual(&self) -> f64 {
        self.absorbed_solar - self.q_t - self.q_f - self.q_r - self.stored_rate
    }
}

/// Wall heat content relative to 0 K, J/m².
pub fn stored_energy(temperatures: &[f64], system: &TrombeSystem, mesh: &Mesh) -> f64 {
    let rho_c = system.wall.volumetric_heat_capacity();
    temperatures[Mesh::OUTER_SURFACE..]
        .iter()
        .zip(mesh.wall_widths())
        .map(|(t, w)| rho_c * w * t)
        .sum()
}

/// Fluxes of `state` at the climate sample that produced it; the stored
/// rate is the difference quotient against `previous`.
pub fn energy_balance(
    previous: &ThermalState,
    state: &ThermalState,
    climate: &ClimateSample,
    system: &TrombeSystem,
    mesh: &Mesh,
    cfg: &NumericsConfig,
) -> Result<EnergyBalance> {
    let step = replay_step(previous, state, climate, system, mesh, cfg)?;
    let t = &state.temperatures;
    let c = &state.coeffs;
    let bc = &step.boundary;

    let g1 = t[Mesh::OUTER_GLASS];
    let q_t = c.h_c_inf * (g1 - bc.ambient) + c.h_r_inf * (g1 - bc.sky);

    let q_f = if c.gap_flow > 0.0 {
        let inlet = bc.room_air;
        let outlet = inlet + (t[Mesh::GAP_AIR] - inlet) / c.mean_rise_ratio;
        let flow = GapFlowState {
            inlet,
            outlet,
            mean: 0.5 * (inlet + outlet),
            profile: Vec::new(),
            flow: c.gap_flow,
            gain: 0.0,
        };
        gap_convective_gain(&flow, &system.gap, &system.wall)
    } else {
        0.0
    };

    let inner = t[mesh.inner_surface()];
    let q_r_convective = c.h_c_room * (inner - bc.room_air);
    let q_r_radiative = c.h_r_room * (inner - bc.room_radiant);

    let stored_rate = (stored_energy(t, system, mesh)
        - stored_energy(&previous.temperatures, system, mesh))
        / step.dt;

    Ok(EnergyBalance {
        q_t,
        q_f,
        q_r: q_r_convective + q_r_radiative,
        q_r_convective,
        q_r_radiative,
        absorbed_solar: bc.absorbed_solar,
        stored_rate,
    })
}
