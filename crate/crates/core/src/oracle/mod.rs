//! Independent reference solutions for the solvers: dense elimination of
//! the same balances, and closed forms for manufactured problems.

mod analytic;
mod dense;

pub use analytic::{analytic_steady_profile, analytic_transient_slab, PeriodicSlab};
pub use dense::{assemble_slab, assemble_step, dense_step, DenseSystem};
