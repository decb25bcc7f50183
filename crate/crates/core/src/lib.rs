//! Transient thermal model of a vented Trombe wall.
//!
//! The wall is discretized in one dimension with a σ-weighted implicit
//! scheme. Glazing panes and channel air are appended to the wall mesh as
//! extra massless layers, and every time level is solved directly by an
//! extended double-pass sweep whose recurrence carries three coefficients
//! instead of two. Coefficients that depend on temperature or on the
//! buoyant channel flow are refreshed by a per-step fixpoint iteration.
//!
//! * [`model`]: configuration types and heat-transfer correlations.
//! * [`airgap`]: vertical march and algebraic reduction of the channel balance.
//! * [`fdm`]: mesh, sweeps, time stepping, energy accounting.
//! * [`oracle`]: dense and closed-form references.
//! * [`climate`]: CSV ingestion and synthetic diurnal climates.
//! * [`convergence`]: observed-order studies on a manufactured slab problem.
//! * [`verify`]: the field-runnable invariant suite.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod airgap;
pub mod climate;
pub mod convergence;
mod error;
pub mod fdm;
pub mod model;
pub mod oracle;
pub mod verify;

pub use climate::{ClimateSample, ClimateSeries, SyntheticClimate};
pub use error::{Error, Result};
pub use fdm::{
    simulate, time_step, EnergyBalance, Horizon, Mesh, NumericsConfig, Simulation, ThermalState,
};
pub use model::{
    CoefficientSet, GapConvection, GapSpec, GlazingSpec, RoomSpec, SkyModel, TrombeSystem,
    VentSchedule, WallSpec, WindConvection,
};
