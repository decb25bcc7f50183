use crate::error::{Error, Result};

/// Node layout of the composite glazing/gap/wall mesh.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mesh {
    wall_nodes: usize,
    dx: f64,
}

impl Mesh {
    pub const OUTER_GLASS: usize = 0;
    pub const INNER_GLASS: usize = 1;
    pub const GAP_AIR: usize = 2;
    pub const OUTER_SURFACE: usize = 3;

    /// Uniform mesh with `wall_nodes` nodes across a wall of `thickness`.
    pub fn new(wall_nodes: usize, thickness: f64) -> Result<Self> {
        if wall_nodes < 3 {
            return Err(Error::config(
                "numerics.wall_nodes",
                "need at least 3 wall nodes",
            ));
        }
        if !(thickness > 0.0) {
            return Err(Error::config("wall.thickness", "must be positive"));
        }
        Ok(Self {
            wall_nodes,
            dx: thickness / (wall_nodes - 1) as f64,
        })
    }

    pub fn wall_nodes(&self) -> usize {
        self.wall_nodes
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn total_nodes(&self) -> usize {
        self.wall_nodes + 3
    }

    pub fn inner_surface(&self) -> usize {
        self.total_nodes() - 1
    }

    /// Wall node nearest mid-thickness.
    pub fn mid_wall(&self) -> usize {
        Self::OUTER_SURFACE + (self.wall_nodes - 1) / 2
    }

    /// Depth of mesh node `index` into the wall, measured from the absorber.
    pub fn depth(&self, index: usize) -> Option<f64> {
        (index >= Self::OUTER_SURFACE && index < self.total_nodes())
            .then(|| (index - Self::OUTER_SURFACE) as f64 * self.dx)
    }

    /// Control-volume width of each wall node (Δx/2 at the surfaces).
    pub fn wall_widths(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.wall_nodes).map(move |j| {
            if j == 0 || j + 1 == self.wall_nodes {
                0.5 * self.dx
            } else {
                self.dx
            }
        })
    }
}
