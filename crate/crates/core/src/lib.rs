//! Semi-discrete Active Flux solver for the two-dimensional Euler equations on
//! Cartesian grids.
//!
//! The unknowns are cell averages together with point values at nodes and edge
//! midpoints that are shared between neighbouring cells. Averages are advanced with
//! Simpson-rule interface fluxes, point values with upwinded finite differences, and
//! both with SSP-RK3. An optional limiter replaces the biparabolic reconstruction in
//! cells where it would leave the range of the boundary point values.

pub mod average;
pub mod error;
pub mod exec;
pub mod fd;
pub mod grid;
pub mod integrate;
pub mod io;
pub mod physics;
pub mod problems;
pub mod reconstruction;

use std::fmt;

pub use error::{DofLocation, Error, PhysicsError, Result};
pub use exec::Parallelism;
pub use grid::{BoundaryCondition, BoundaryKind, DofField, GridSpec};
pub use integrate::{run, RunParams, RunSummary};
pub use physics::{ConservedState, GasParams, PrimitiveState};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
        })
    }
}
