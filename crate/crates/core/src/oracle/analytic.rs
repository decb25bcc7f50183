//! Closed-form reference solutions.

use crate::error::{Error, Result};
use crate::fdm::{Boundary, Mesh};
use crate::model::{CoefficientSet, WallSpec};

/// Steady temperatures of every mesh node for a sealed channel, from the
/// series resistance chain ambient → panes → gap → wall → room.
///
/// Absorbed solar enters at the absorber surface and splits between the
/// outward and inward branches.
pub fn analytic_steady_profile(
    coeffs: &CoefficientSet,
    boundary: &Boundary,
    wall: &WallSpec,
    mesh: &Mesh,
) -> Result<Vec<f64>> {
    if coeffs.gap_flow > 0.0 {
        return Err(Error::Domain(
            "a ventilated channel is not a series chain".into(),
        ));
    }
    let h_out = coeffs.h_c_inf + coeffs.h_r_inf;
    let t_out = (coeffs.h_c_inf * boundary.ambient + coeffs.h_r_inf * boundary.sky) / h_out;
    let h_in = coeffs.h_room();
    let t_in =
        (coeffs.h_c_room * boundary.room_air + coeffs.h_r_room * boundary.room_radiant) / h_in;
    // Radiation in parallel with convection through the air node (two
    // equal films in series).
    let h_gap = coeffs.h_rgap + 0.5 * coeffs.h_cgap;

    let r_out = 1.0 / h_out + 1.0 / coeffs.h_12 + 1.0 / h_gap;
    let r_in = wall.thickness / wall.conductivity + 1.0 / h_in;
    let g_out = 1.0 / r_out;
    let g_in = 1.0 / r_in;
    if !(g_out + g_in > 0.0) || !(g_out + g_in).is_finite() {
        return Err(Error::Domain(
            "resistance chain has no finite non-zero conductance".into(),
        ));
    }
    let num = boundary.absorbed_solar
        + if g_out > 0.0 { g_out * t_out } else { 0.0 }
        + if g_in > 0.0 { g_in * t_in } else { 0.0 };
    let t_w0 = num / (g_out + g_in);
    let q_out = g_out * (t_w0 - t_out);
    let q_in = g_in * (t_w0 - t_in);

    let mut t = vec![0.0; mesh.total_nodes()];
    t[Mesh::OUTER_GLASS] = t_out + q_out / h_out;
    t[Mesh::INNER_GLASS] = t[Mesh::OUTER_GLASS] + q_out / coeffs.h_12;
    t[Mesh::GAP_AIR] = if coeffs.h_cgap > 0.0 {
        0.5 * (t_w0 + t[Mesh::INNER_GLASS])
    } else {
        t_w0
    };
    for (j, node) in t[Mesh::OUTER_SURFACE..].iter_mut().enumerate() {
        *node = t_w0 - q_in * j as f64 * mesh.dx() / wall.conductivity;
    }
    Ok(t)
}

/// Periodic conduction into a thick slab whose face follows
/// `mean + amplitude·cos(ωt)`:
/// `T(x, t) = mean + amplitude·e^(−x/d)·cos(ωt − x/d)`, `d = √(2a/ω)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodicSlab {
    pub diffusivity: f64,
    pub mean: f64,
    pub amplitude: f64,
    /// Angular frequency, rad/s.
    pub omega: f64,
}

impl PeriodicSlab {
    /// Penetration depth d.
    pub fn penetration_depth(&self) -> f64 {
        (2.0 * self.diffusivity / self.omega).sqrt()
    }

    pub fn temperature(&self, x: f64, t: f64) -> f64 {
        let d = self.penetration_depth();
        self.mean + self.amplitude * (-x / d).exp() * (self.omega * t - x / d).cos()
    }
}

/// Field value of the periodic slab solution.
pub fn analytic_transient_slab(slab: &PeriodicSlab, t: f64, x: f64) -> f64 {
    slab.temperature(x, t)
}
