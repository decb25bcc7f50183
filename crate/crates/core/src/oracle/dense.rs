//! Dense reference solves.
//!
//! Rows are written straight from the heat balances, in flux units, with
//! no reference to the sweep recurrences. Agreement with the sweep is
//! therefore a check of its coefficient algebra.

use crate::error::{Error, Result};
use crate::fdm::{LinearStep, Mesh};

/// A square linear system with one provenance label per row.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseSystem {
    size: usize,
    /// Row-major coefficients.
    matrix: Vec<f64>,
    rhs: Vec<f64>,
    labels: Vec<&'static str>,
}

impl DenseSystem {
    fn zeros(size: usize) -> Self {
        Self {
            size,
            matrix: vec![0.0; size * size],
            rhs: vec![0.0; size],
            labels: vec![""; size],
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.matrix[row * self.size + col]
    }

    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    pub fn labels(&self) -> &[&'static str] {
        &self.labels
    }

    fn set_row(&mut self, row: usize, label: &'static str, entries: &[(usize, f64)], rhs: f64) {
        for &(col, v) in entries {
            self.matrix[row * self.size + col] += v;
        }
        self.rhs[row] = rhs;
        self.labels[row] = label;
    }

    /// Gaussian elimination with partial pivoting.
    pub fn solve(&self) -> Result<Vec<f64>> {
        let n = self.size;
        let mut a = self.matrix.clone();
        let mut b = self.rhs.clone();
        let mut rows: Vec<usize> = (0..n).collect();
        let scale = a.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        for k in 0..n {
            let (p, max) = (k..n)
                .map(|r| (r, a[r * n + k].abs()))
                .fold(
                    (k, -1.0),
                    |best, cur| if cur.1 > best.1 { cur } else { best },
                );
            if !(max > f64::EPSILON * scale) || !max.is_finite() {
                return Err(Error::Singular {
                    node: k,
                    label: self.labels[rows[k]],
                });
            }
            if p != k {
                for c in 0..n {
                    a.swap(k * n + c, p * n + c);
                }
                b.swap(k, p);
                rows.swap(k, p);
            }
            let piv = a[k * n + k];
            for r in k + 1..n {
                let f = a[r * n + k] / piv;
                if f == 0.0 {
                    continue;
                }
                for c in k..n {
                    a[r * n + c] -= f * a[k * n + c];
                }
                b[r] -= f * b[k];
            }
        }
        let mut x = vec![0.0; n];
        for k in (0..n).rev() {
            let tail: f64 = (k + 1..n).map(|c| a[k * n + c] * x[c]).sum();
            x[k] = (b[k] - tail) / a[k * n + k];
        }
        Ok(x)
    }
}

/// The full coupled system of one glazing/gap/wall step.
pub fn assemble_step(step: &LinearStep) -> DenseSystem {
    let n = step.previous.len();
    let last = n - 1;
    let c = &step.coeffs;
    let bc = &step.boundary;
    let old = &step.previous;
    let s = step.sigma;
    let e = 1.0 - s;
    let k = step.conductivity / step.dx;
    let full_cell = step.heat_capacity * step.dx / step.dt;
    let half_cell = 0.5 * full_cell;
    let (g1, g2, ag, w0) = (
        Mesh::OUTER_GLASS,
        Mesh::INNER_GLASS,
        Mesh::GAP_AIR,
        Mesh::OUTER_SURFACE,
    );

    let mut sys = DenseSystem::zeros(n);

    // h_c∞(T_g1 − T_a) + h_r∞(T_g1 − T_sky) = h_12(T_g2 − T_g1)
    sys.set_row(
        g1,
        "outer pane balance",
        &[(g1, c.h_c_inf + c.h_r_inf + c.h_12), (g2, -c.h_12)],
        c.h_c_inf * bc.ambient + c.h_r_inf * bc.sky,
    );

    // h_cgap(T_ag − T_g2) + h_rgap(T_w0 − T_g2) = h_12(T_g2 − T_g1)
    sys.set_row(
        g2,
        "inner pane balance",
        &[
            (g1, -c.h_12),
            (g2, c.h_12 + c.h_cgap + c.h_rgap),
            (ag, -c.h_cgap),
            (w0, -c.h_rgap),
        ],
        0.0,
    );

    // advection·(T_ag − T_r) = h_cgap(T_w0 − T_ag) + h_cgap(T_g2 − T_ag)
    sys.set_row(
        ag,
        "channel air balance",
        &[
            (g2, -c.h_cgap),
            (ag, step.advection + 2.0 * c.h_cgap),
            (w0, -c.h_cgap),
        ],
        step.advection * bc.room_air,
    );

    // Absorber half cell: storage = solar + conduction + gap exchange.
    let flux_in = |t_g2: f64, t_ag: f64, t_w0: f64, t_w1: f64| {
        k * (t_w1 - t_w0) + c.h_cgap * (t_ag - t_w0) + c.h_rgap * (t_g2 - t_w0)
    };
    sys.set_row(
        w0,
        "absorber half cell",
        &[
            (w0, half_cell + s * (k + c.h_cgap + c.h_rgap)),
            (w0 + 1, -s * k),
            (ag, -s * c.h_cgap),
            (g2, -s * c.h_rgap),
        ],
        half_cell * old[w0]
            + bc.absorbed_solar
            + e * flux_in(old[g2], old[ag], old[w0], old[w0 + 1]),
    );

    for i in w0 + 1..last {
        let explicit = k * (old[i - 1] - 2.0 * old[i] + old[i + 1]);
        sys.set_row(
            i,
            "wall conduction",
            &[
                (i - 1, -s * k),
                (i, full_cell + 2.0 * s * k),
                (i + 1, -s * k),
            ],
            full_cell * old[i] + e * explicit,
        );
    }

    let room_in = |t_prev: f64, t_last: f64| {
        k * (t_prev - t_last)
            - c.h_c_room * (t_last - bc.room_air)
            - c.h_r_room * (t_last - bc.room_radiant)
    };
    sys.set_row(
        last,
        "room-side half cell",
        &[
            (last - 1, -s * k),
            (last, half_cell + s * (k + c.h_c_room + c.h_r_room)),
        ],
        half_cell * old[last]
            + s * (c.h_c_room * bc.room_air + c.h_r_room * bc.room_radiant)
            + e * room_in(old[last - 1], old[last]),
    );
    sys
}

/// Dense solution of one coupled linear step.
pub fn dense_step(step: &LinearStep) -> Result<Vec<f64>> {
    assemble_step(step).solve()
}

/// Plain slab with prescribed end temperatures at the new time level.
pub fn assemble_slab(
    previous: &[f64],
    sigma: f64,
    dt: f64,
    dx: f64,
    diffusivity: f64,
    left: f64,
    right: f64,
) -> DenseSystem {
    let n = previous.len();
    let mut sys = DenseSystem::zeros(n);
    let lambda = diffusivity * dt / (dx * dx);
    sys.set_row(0, "left end", &[(0, 1.0)], left);
    for i in 1..n - 1 {
        let explicit = previous[i - 1] - 2.0 * previous[i] + previous[i + 1];
        sys.set_row(
            i,
            "slab conduction",
            &[
                (i - 1, -sigma * lambda),
                (i, 1.0 + 2.0 * sigma * lambda),
                (i + 1, -sigma * lambda),
            ],
            previous[i] + (1.0 - sigma) * lambda * explicit,
        );
    }
    sys.set_row(n - 1, "right end", &[(n - 1, 1.0)], right);
    sys
}
