use std::fmt;

use crate::physics::ConservedState;

/// Where on the grid something went wrong.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DofLocation {
    Average(isize, isize),
    Node(isize, isize),
    XEdge(isize, isize),
    YEdge(isize, isize),
    Face { axis: char, i: isize, j: isize },
    Unknown,
}

impl fmt::Display for DofLocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DofLocation::Average(i, j) => write!(f, "cell average ({i}, {j})"),
            DofLocation::Node(i, j) => write!(f, "node ({i}, {j})"),
            DofLocation::XEdge(i, j) => write!(f, "vertical-edge midpoint ({i}, {j})"),
            DofLocation::YEdge(i, j) => write!(f, "horizontal-edge midpoint ({i}, {j})"),
            DofLocation::Face { axis, i, j } => write!(f, "{axis}-face ({i}, {j})"),
            DofLocation::Unknown => write!(f, "unknown location"),
        }
    }
}

/// Failure of a pointwise physics evaluation. Carries the offending state.
#[derive(Clone, Copy, Debug, PartialEq, thiserror::Error)]
pub enum PhysicsError {
    #[error("non-positive density {rho} in state {state:?}")]
    NonPositiveDensity { rho: f64, state: ConservedState },
    #[error("non-positive pressure {p} in state {state:?}")]
    NonPositivePressure { p: f64, state: ConservedState },
    #[error("non-finite value in state {state:?}")]
    NonFinite { state: ConservedState },
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{source} at {location}")]
    Domain {
        location: DofLocation,
        #[source]
        source: PhysicsError,
    },
    #[error("step {step}, stage {stage}: {source}")]
    Step {
        step: usize,
        stage: usize,
        #[source]
        source: Box<Error>,
    },
    #[error("index ({i}, {j}) outside the stored range of {array}")]
    Index { array: &'static str, i: isize, j: isize },
    #[error("point ({x}, {y}) lies outside the cell")]
    OutsideCell { x: f64, y: f64 },
    #[error("invalid derivative request: {0}")]
    InvalidDerivative(String),
    #[error("plateau requested but m < mean < M does not hold (m = {m}, mean = {mean}, M = {max})")]
    PlateauPrecondition { m: f64, mean: f64, max: f64 },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid run parameters: {0}")]
    InvalidParams(String),
    #[error("non-finite time step (dt = {0})")]
    NonFiniteStep(f64),
    #[error("maximum number of steps ({0}) exceeded")]
    MaxStepsExceeded(usize),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("snapshot format error: {0}")]
    Format(String),
    #[error("usage error: {0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn domain(location: DofLocation, source: PhysicsError) -> Self {
        Error::Domain { location, source }
    }

    /// True for failures of the numerics (invalid states, blow-up, step limit),
    /// as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::Domain { .. } | Error::NonFiniteStep(_) | Error::MaxStepsExceeded(_) => true,
            Error::Step { source, .. } => source.is_numerical(),
            _ => false,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
