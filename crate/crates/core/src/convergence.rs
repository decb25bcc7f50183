//! Observed order of accuracy of the weighted scheme on a plain slab driven
//! by the periodic closed-form solution at both faces.

use crate::error::Result;
use crate::fdm::{assemble_interior, classical_sweep, BoundaryClosure};
use crate::oracle::PeriodicSlab;

/// A slab of finite `length` whose faces follow the periodic solution
/// exactly, so the closed form is the exact field everywhere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlabProblem {
    pub slab: PeriodicSlab,
    pub length: f64,
    /// Simulated span, s. Errors are measured over the last day of it.
    pub duration: f64,
}

impl Default for SlabProblem {
    /// 0.3 m of concrete under a 10 K diurnal swing, two days.
    fn default() -> Self {
        Self {
            slab: PeriodicSlab {
                diffusivity: 7e-7,
                mean: 290.0,
                amplitude: 10.0,
                omega: 2.0 * std::f64::consts::PI / 86400.0,
            },
            length: 0.3,
            duration: 2.0 * 86400.0,
        }
    }
}

impl SlabProblem {
    /// Max-norm error over all nodes and all steps of the final day.
    pub fn max_error(&self, nodes: usize, dt: f64, sigma: f64) -> Result<f64> {
        let dx = self.length / (nodes - 1) as f64;
        let exact = |x: f64, t: f64| self.slab.temperature(x, t);
        let mut field: Vec<f64> = (0..nodes).map(|i| exact(i as f64 * dx, 0.0)).collect();
        let steps = (self.duration / dt).round() as usize;
        let window_start = self.duration - 86400.0;
        let mut worst = 0.0_f64;
        for k in 1..=steps {
            let t = k as f64 * dt;
            let rows: Vec<_> = assemble_interior(&field, sigma, dt, dx, self.slab.diffusivity)
                .into_iter()
                .map(|r| r.to_tridiagonal())
                .collect();
            field = classical_sweep(
                &rows,
                BoundaryClosure::fixed(exact(0.0, t)),
                BoundaryClosure::fixed(exact(self.length, t)),
            )?;
            if t >= window_start - 1e-9 {
                for (i, v) in field.iter().enumerate() {
                    worst = worst.max((v - exact(i as f64 * dx, t)).abs());
                }
            }
        }
        Ok(worst)
    }
}

/// Errors on a refinement sequence and the orders they imply.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderStudy {
    pub label: String,
    /// Step size of each level (Δτ in s or Δx in m).
    pub steps: Vec<f64>,
    pub errors: Vec<f64>,
}

impl OrderStudy {
    /// `log(e_k / e_{k+1}) / log(h_k / h_{k+1})` for consecutive levels.
    pub fn orders(&self) -> Vec<f64> {
        self.errors
            .windows(2)
            .zip(self.steps.windows(2))
            .map(|(e, h)| (e[0] / e[1]).ln() / (h[0] / h[1]).ln())
            .collect()
    }
}

/// Halves Δτ from `dt0` `halvings` times on a fixed fine mesh.
pub fn temporal_study(
    problem: &SlabProblem,
    sigma: f64,
    nodes: usize,
    dt0: f64,
    halvings: usize,
) -> Result<OrderStudy> {
    let steps: Vec<f64> = (0..=halvings).map(|k| dt0 / 2f64.powi(k as i32)).collect();
    let errors = steps
        .iter()
        .map(|&dt| problem.max_error(nodes, dt, sigma))
        .collect::<Result<Vec<_>>>()?;
    Ok(OrderStudy {
        label: format!("time, sigma = {sigma}"),
        steps,
        errors,
    })
}

/// Halves Δx from `intervals0` intervals `halvings` times at a fixed small Δτ.
pub fn spatial_study(
    problem: &SlabProblem,
    sigma: f64,
    dt: f64,
    intervals0: usize,
    halvings: usize,
) -> Result<OrderStudy> {
    let intervals: Vec<usize> = (0..=halvings).map(|k| intervals0 << k).collect();
    let steps = intervals
        .iter()
        .map(|&m| problem.length / m as f64)
        .collect();
    let errors = intervals
        .iter()
        .map(|&m| problem.max_error(m + 1, dt, sigma))
        .collect::<Result<Vec<_>>>()?;
    Ok(OrderStudy {
        label: format!("space, sigma = {sigma}"),
        steps,
        errors,
    })
}

/// Reference refinement settings shared by the CLI and the test suites.
pub mod presets {
    /// Mesh intervals for the temporal study (Δx = 0.25 mm).
    pub const TEMPORAL_NODES: usize = 1201;
    pub const TEMPORAL_DT0: f64 = 3600.0;
    pub const SPATIAL_DT: f64 = 30.0;
    pub const SPATIAL_INTERVALS0: usize = 10;
    pub const HALVINGS: usize = 3;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_from_exact_power_law() {
        let s = OrderStudy {
            label: String::new(),
            steps: vec![1.0, 0.5, 0.25],
            errors: vec![1.0, 0.25, 0.0625],
        };
        for p in s.orders() {
            assert!((p - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn fine_solution_tracks_closed_form() {
        let p = SlabProblem::default();
        assert!(p.max_error(61, 300.0, 0.5).unwrap() < 0.05);
    }
}
