//! Finite-difference discretization of the wall system and its solvers.
//!
//! The unknowns of one time level are laid out on a composite mesh:
//!
//! ```text
//! 0        1        2        3     4 ..          n-1
//! g1 ----- g2 ~~~~ gap ~~~~ w0 --- interior --- wδ
//! outer    inner    air      wall surfaces and nodes
//! pane     pane
//! ```
//!
//! Panes and channel air are massless. Wall nodes are spaced uniformly and
//! the two surface nodes own half control volumes.

mod energy;
mod mesh;
mod simulate;
mod step;
pub mod sweep;

pub use energy::{energy_balance, stored_energy, EnergyBalance};
pub use mesh::Mesh;
pub use simulate::{simulate, Horizon, Simulation, StepRecord};
pub use step::{
    coefficients_for, initial_state, time_step, time_step_with, Boundary, LinearSolver, LinearStep,
    NumericsConfig, ThermalState,
};
pub use sweep::{
    assemble_interior, back_substitute, classical_sweep, close_inner_surface, forward_sweep,
    solve_extended, BoundaryClosure, InteriorRow, SweepCoefficients, TridiagonalRow,
};
