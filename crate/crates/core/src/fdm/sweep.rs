//! Double-pass sweep solvers.
//!
//! The classical sweep solves tridiagonal systems through the recurrence
//! `T[i] = α[i]·T[i+1] + β[i]`. The extended sweep carries a third
//! coefficient, `T[i] = α[i]·T[i+1] + γ[i]·T[i+2] + β[i]`, so that the
//! inner-pane balance, which couples the pane to both the channel air and
//! the absorber surface, fits the same forward/backward scheme.
//!
//! The per-layer coefficients below come from substituting the recurrence
//! of the preceding layers into each balance equation:
//!
//! | node | balance | γ |
//! |------|---------|---|
//! | outer pane | pane ↔ ambient, sky, inner pane | 0 |
//! | inner pane | pane ↔ outer pane, channel air, absorber | ≠ 0 |
//! | channel air | advected enthalpy vs. face convection | 0 |
//! | absorber | half cell: solar, gap exchange, conduction | 0 |
//! | interior | σ-weighted conduction | 0 |

use crate::error::{Error, Result};

use super::mesh::Mesh;
use super::step::LinearStep;

/// One interior conduction row, `a·T[i-1] + b·T[i] + c·T[i+1] = -f`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InteriorRow {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    /// Known time-level contribution: `((1-σ)/σ)·δ²T^n + r·T^n` with
    /// `r = Δx²/(σ·Δτ·a)`.
    pub f: f64,
}

impl InteriorRow {
    pub fn to_tridiagonal(self) -> TridiagonalRow {
        TridiagonalRow {
            lower: self.a,
            diag: self.b,
            upper: self.c,
            rhs: -self.f,
        }
    }
}

/// `lower·T[i-1] + diag·T[i] + upper·T[i+1] = rhs`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TridiagonalRow {
    pub lower: f64,
    pub diag: f64,
    pub upper: f64,
    pub rhs: f64,
}

/// End condition `T_end = a·T_neighbour + b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryClosure {
    pub a: f64,
    pub b: f64,
}

impl BoundaryClosure {
    /// Prescribed end temperature.
    pub fn fixed(temperature: f64) -> Self {
        Self {
            a: 0.0,
            b: temperature,
        }
    }
}

/// Interior rows of the weighted implicit scheme for nodes `1..len-1` of
/// `previous`.
pub fn assemble_interior(
    previous: &[f64],
    sigma: f64,
    dt: f64,
    dx: f64,
    diffusivity: f64,
) -> Vec<InteriorRow> {
    let r = dx * dx / (sigma * dt * diffusivity);
    let explicit = (1.0 - sigma) / sigma;
    previous
        .windows(3)
        .map(|w| InteriorRow {
            a: 1.0,
            b: -(2.0 + r),
            c: 1.0,
            f: explicit * (w[0] - 2.0 * w[1] + w[2]) + r * w[1],
        })
        .collect()
}

fn pivot(value: f64, node: usize, label: &'static str) -> Result<f64> {
    if value != 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Singular { node, label })
    }
}

/// Two-pass solution of a tridiagonal system with end closures.
///
/// `rows[k]` is the equation of node `k + 1`; the result has
/// `rows.len() + 2` entries.
pub fn classical_sweep(
    rows: &[TridiagonalRow],
    left: BoundaryClosure,
    right: BoundaryClosure,
) -> Result<Vec<f64>> {
    let last = rows.len() + 1;
    let mut alpha = Vec::with_capacity(last);
    let mut beta = Vec::with_capacity(last);
    alpha.push(left.a);
    beta.push(left.b);
    for (k, row) in rows.iter().enumerate() {
        let den = pivot(row.lower * alpha[k] + row.diag, k + 1, "interior row")?;
        alpha.push(-row.upper / den);
        beta.push((row.rhs - row.lower * beta[k]) / den);
    }
    let den = pivot(1.0 - right.a * alpha[last - 1], last, "right closure")?;
    let mut t = vec![0.0; last + 1];
    t[last] = (right.a * beta[last - 1] + right.b) / den;
    for i in (0..last).rev() {
        t[i] = alpha[i] * t[i + 1] + beta[i];
    }
    Ok(t)
}

/// Forward-pass coefficients of the extended recurrence, one triple per
/// mesh node. The last node's triple is unused and left at zero.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepCoefficients {
    pub alpha: Vec<f64>,
    pub gamma: Vec<f64>,
    pub beta: Vec<f64>,
}

impl SweepCoefficients {
    /// Nodes whose γ is nonzero.
    pub fn gamma_support(&self) -> Vec<usize> {
        self.gamma
            .iter()
            .enumerate()
            .filter(|(_, g)| **g != 0.0)
            .map(|(i, _)| i)
            .collect()
    }
}

/// First pass of the extended sweep over the composite mesh.
pub fn forward_sweep(step: &LinearStep) -> Result<SweepCoefficients> {
    let n = step.previous.len();
    let wall_nodes = n - 3;
    if wall_nodes < 3 {
        return Err(Error::config(
            "numerics.wall_nodes",
            "need at least 3 wall nodes",
        ));
    }
    let c = &step.coeffs;
    let bc = &step.boundary;
    let tn = &step.previous;
    let sigma = step.sigma;
    let k = step.conductivity / step.dx;
    let cap = step.heat_capacity * step.dx / (2.0 * step.dt);

    let mut alpha = vec![0.0; n];
    let mut gamma = vec![0.0; n];
    let mut beta = vec![0.0; n];

    // Outer pane: steady balance against ambient air, sky and inner pane.
    let g1 = Mesh::OUTER_GLASS;
    let den = pivot(c.h_12 + c.h_c_inf + c.h_r_inf, g1, "outer pane")?;
    alpha[g1] = c.h_12 / den;
    beta[g1] = (c.h_c_inf * bc.ambient + c.h_r_inf * bc.sky) / den;

    // Inner pane: couples forward to the channel air and the absorber.
    let g2 = Mesh::INNER_GLASS;
    let den = pivot(
        c.h_12 * (1.0 - alpha[g1]) + c.h_cgap + c.h_rgap,
        g2,
        "inner pane",
    )?;
    alpha[g2] = c.h_cgap / den;
    gamma[g2] = c.h_rgap / den;
    beta[g2] = c.h_12 * beta[g1] / den;

    // Channel air: advected enthalpy against exchange with both faces.
    let ag = Mesh::GAP_AIR;
    let den = pivot(
        step.advection + c.h_cgap * (2.0 - alpha[g2]),
        ag,
        "channel air",
    )?;
    alpha[ag] = c.h_cgap * (1.0 + gamma[g2]) / den;
    beta[ag] = (step.advection * bc.room_air + c.h_cgap * beta[g2]) / den;

    // Absorber surface half cell. T_ag and T_g2 are eliminated through the
    // two preceding recurrences.
    let w0 = Mesh::OUTER_SURFACE;
    let explicit = (1.0 - sigma)
        * (k * (tn[w0 + 1] - tn[w0]) + c.h_cgap * (tn[ag] - tn[w0]) + c.h_rgap * (tn[g2] - tn[w0]));
    let rhs = cap * tn[w0] + bc.absorbed_solar + explicit;
    let g2_on_w0 = alpha[g2] * alpha[ag] + gamma[g2];
    let g2_offset = alpha[g2] * beta[ag] + beta[g2];
    let den = pivot(
        cap + sigma * k
            + sigma * c.h_cgap * (1.0 - alpha[ag])
            + sigma * c.h_rgap * (1.0 - g2_on_w0),
        w0,
        "absorber surface",
    )?;
    alpha[w0] = sigma * k / den;
    beta[w0] = (rhs + sigma * c.h_cgap * beta[ag] + sigma * c.h_rgap * g2_offset) / den;

    // Interior wall nodes.
    let rows = assemble_interior(&tn[w0..], sigma, step.dt, step.dx, step.diffusivity());
    for (j, row) in rows.iter().enumerate() {
        let i = w0 + 1 + j;
        let den = pivot(-row.b - row.a * alpha[i - 1], i, "wall interior")?;
        alpha[i] = row.c / den;
        beta[i] = (row.a * beta[i - 1] + row.f) / den;
    }

    Ok(SweepCoefficients { alpha, gamma, beta })
}

/// Room-side surface temperature at the new time level: the half-cell
/// balance of the inner face closed with the last interior recurrence.
pub fn close_inner_surface(step: &LinearStep, sweep: &SweepCoefficients) -> Result<f64> {
    let n = step.previous.len();
    let last = n - 1;
    let c = &step.coeffs;
    let bc = &step.boundary;
    let tn = &step.previous;
    let sigma = step.sigma;
    let k = step.conductivity / step.dx;
    let cap = step.heat_capacity * step.dx / (2.0 * step.dt);

    let room = c.h_c_room * bc.room_air + c.h_r_room * bc.room_radiant;
    let explicit = (1.0 - sigma)
        * (k * (tn[last - 1] - tn[last])
            - c.h_c_room * (tn[last] - bc.room_air)
            - c.h_r_room * (tn[last] - bc.room_radiant));
    let rhs = cap * tn[last] + sigma * room + explicit;
    let den = pivot(
        cap + sigma * k + sigma * c.h_room() - sigma * k * sweep.alpha[last - 1],
        last,
        "room-side surface",
    )?;
    Ok((rhs + sigma * k * sweep.beta[last - 1]) / den)
}

/// Second pass: recovers every node from the room side outwards.
pub fn back_substitute(sweep: &SweepCoefficients, inner_surface: f64) -> Vec<f64> {
    let n = sweep.alpha.len();
    let mut t = vec![0.0; n];
    t[n - 1] = inner_surface;
    for i in (0..n - 1).rev() {
        let far = if i + 2 < n {
            sweep.gamma[i] * t[i + 2]
        } else {
            0.0
        };
        t[i] = sweep.alpha[i] * t[i + 1] + far + sweep.beta[i];
    }
    t
}

/// Full extended-sweep solve of one linear step.
pub fn solve_extended(step: &LinearStep) -> Result<Vec<f64>> {
    let sweep = forward_sweep(step)?;
    let inner = close_inner_surface(step, &sweep)?;
    Ok(back_substitute(&sweep, inner))
}
