//! Per-cell continuous reconstruction from the 8 boundary point values and the cell
//! average, with the maximum-principle limiter.
//!
//! Coordinates inside a cell are reference coordinates `x, y in [-1/2, 1/2]` unless a
//! function says otherwise; derivatives returned by [`CellReconstruction::derivative`]
//! are in physical units.

mod basis;
mod plateau;

use std::ops::Index;

use arrayvec::ArrayVec;

pub use basis::{assemble_pw_biparabolic, edge_basis, edge_basis_w, Biparabolic, BiparabolicPiece, EdgeBasis, Region};
pub use plateau::{plateau, plateau_value_at};

use crate::error::{Error, Result};
use crate::Axis;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeKind {
    Parabolic,
    Hat,
}

/// The four edges of a cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Edge {
    W,
    S,
    N,
    E,
}

impl Edge {
    pub const ALL: [Edge; 4] = [Edge::W, Edge::S, Edge::N, Edge::E];

    /// Maps cell reference coordinates into the frame in which this edge plays the
    /// role of the W-edge.
    pub fn to_local(self, x: f64, y: f64) -> (f64, f64) {
        match self {
            Edge::W => (x, y),
            Edge::S => (y, -x),
            Edge::N => (-y, x),
            Edge::E => (-x, -y),
        }
    }

    /// Edges adjacent to the first and last point of this edge in its local frame
    /// (the S- and N-edge of the W-frame).
    pub fn frame_neighbours(self) -> (Edge, Edge) {
        match self {
            Edge::W => (Edge::S, Edge::N),
            Edge::S => (Edge::E, Edge::W),
            Edge::N => (Edge::W, Edge::E),
            Edge::E => (Edge::N, Edge::S),
        }
    }

    fn index(self) -> usize {
        self as usize
    }

    /// Midpoint of the edge.
    pub fn midpoint(self) -> BoundaryPoint {
        match self {
            Edge::W => BoundaryPoint::W,
            Edge::S => BoundaryPoint::S,
            Edge::N => BoundaryPoint::N,
            Edge::E => BoundaryPoint::E,
        }
    }
}

/// Kinds of the four edges of a cell, indexed by [`Edge`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgeKinds([EdgeKind; 4]);

impl EdgeKinds {
    pub fn new(w: EdgeKind, s: EdgeKind, n: EdgeKind, e: EdgeKind) -> Self {
        Self([w, s, n, e])
    }

    pub fn splat(kind: EdgeKind) -> Self {
        Self([kind; 4])
    }

    pub fn all_parabolic(&self) -> bool {
        self.0.iter().all(|k| *k == EdgeKind::Parabolic)
    }

    /// Classifies all four edges of `points`.
    pub fn classify(points: &CellPoints) -> Self {
        let mut kinds = [EdgeKind::Parabolic; 4];
        for e in Edge::ALL {
            let [a, m, b] = points.local_edge(e);
            kinds[e.index()] = classify_edge(EdgeData::new(a, m, b));
        }
        Self(kinds)
    }
}

impl Index<Edge> for EdgeKinds {
    type Output = EdgeKind;
    fn index(&self, e: Edge) -> &EdgeKind {
        &self.0[e.index()]
    }
}

/// The 8 point values on a cell boundary.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoundaryPoint {
    SW,
    S,
    SE,
    W,
    E,
    NW,
    N,
    NE,
}

impl BoundaryPoint {
    pub const ALL: [BoundaryPoint; 8] = [
        BoundaryPoint::SW,
        BoundaryPoint::S,
        BoundaryPoint::SE,
        BoundaryPoint::W,
        BoundaryPoint::E,
        BoundaryPoint::NW,
        BoundaryPoint::N,
        BoundaryPoint::NE,
    ];

    /// Reference coordinates of the point.
    pub fn coords(self) -> (f64, f64) {
        match self {
            BoundaryPoint::SW => (-0.5, -0.5),
            BoundaryPoint::S => (0.0, -0.5),
            BoundaryPoint::SE => (0.5, -0.5),
            BoundaryPoint::W => (-0.5, 0.0),
            BoundaryPoint::E => (0.5, 0.0),
            BoundaryPoint::NW => (-0.5, 0.5),
            BoundaryPoint::N => (0.0, 0.5),
            BoundaryPoint::NE => (0.5, 0.5),
        }
    }
}

/// Values at the 8 boundary points, ordered SW, S, SE, W, E, NW, N, NE.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CellPoints(pub [f64; 8]);

impl CellPoints {
    pub fn bounds(&self) -> (f64, f64) {
        self.0
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(*v), hi.max(*v)))
    }

    pub fn point_mean(&self) -> f64 {
        self.0.iter().sum::<f64>() / 8.0
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self(self.0.map(f))
    }

    /// Values of an edge in the order of its local frame
    /// (W: SW, W, NW; S: SE, S, SW; N: NW, N, NE; E: NE, E, SE).
    pub fn local_edge(&self, edge: Edge) -> [f64; 3] {
        use BoundaryPoint as P;
        let [a, b, c] = match edge {
            Edge::W => [P::SW, P::W, P::NW],
            Edge::S => [P::SE, P::S, P::SW],
            Edge::N => [P::NW, P::N, P::NE],
            Edge::E => [P::NE, P::E, P::SE],
        };
        [self[a], self[b], self[c]]
    }

    /// Edge values ordered along the increasing cell coordinate
    /// (N, S: along x; W, E: along y).
    pub fn edge(&self, edge: Edge) -> EdgeData {
        use BoundaryPoint as P;
        let [a, b, c] = match edge {
            Edge::W => [P::SW, P::W, P::NW],
            Edge::S => [P::SW, P::S, P::SE],
            Edge::N => [P::NW, P::N, P::NE],
            Edge::E => [P::SE, P::E, P::NE],
        };
        EdgeData::new(self[a], self[b], self[c])
    }
}

impl Index<BoundaryPoint> for CellPoints {
    type Output = f64;
    fn index(&self, p: BoundaryPoint) -> &f64 {
        &self.0[p as usize]
    }
}

/// Three values along one edge: both ends and the midpoint.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EdgeData {
    pub left: f64,
    pub mid: f64,
    pub right: f64,
}

impl EdgeData {
    pub fn new(left: f64, mid: f64, right: f64) -> Self {
        Self { left, mid, right }
    }

    /// Edge profile at `s in [-1/2, 1/2]`, `left` sitting at `s = -1/2`.
    pub fn value(&self, kind: EdgeKind, s: f64) -> f64 {
        let Self { left, mid, right } = *self;
        match kind {
            EdgeKind::Parabolic => mid + s * (right - left) + 2.0 * s * s * (right + left - 2.0 * mid),
            EdgeKind::Hat if s < 0.0 => mid + 2.0 * s * (mid - left),
            EdgeKind::Hat => mid + 2.0 * s * (right - mid),
        }
    }

    /// `d/ds` of the profile. At the hat apex `s = 0`, `Side::Lower` takes the left
    /// slope, anything else the right one.
    pub fn slope(&self, kind: EdgeKind, s: f64, side: Side) -> f64 {
        let Self { left, mid, right } = *self;
        match kind {
            EdgeKind::Parabolic => (right - left) + 4.0 * s * (right + left - 2.0 * mid),
            EdgeKind::Hat if s < 0.0 || (s == 0.0 && side == Side::Lower) => 2.0 * (mid - left),
            EdgeKind::Hat => 2.0 * (right - mid),
        }
    }
}

/// Decides whether the edge parabola through `e` is acceptable or must be replaced by
/// a hat.
pub fn classify_edge(e: EdgeData) -> EdgeKind {
    let EdgeData { left, mid, right } = e;
    let monotone = (left < mid && mid < right) || (left > mid && mid > right);
    let hat = if monotone {
        (mid - 0.5 * (left + right)).abs() > 0.25 * (right - left).abs()
    } else {
        left != right
    };
    if hat {
        EdgeKind::Hat
    } else {
        EdgeKind::Parabolic
    }
}

/// Which one-sided limit a derivative is taken from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// From smaller coordinate values.
    Lower,
    /// From larger coordinate values.
    Upper,
    Centered,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Shape {
    PiecewiseBiparabolic {
        pieces: ArrayVec<BiparabolicPiece, 4>,
        /// Value at the cell center.
        center: f64,
    },
    Plateau {
        eta: f64,
        value: f64,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct CellReconstruction {
    pub points: CellPoints,
    pub mean: f64,
    pub dx: f64,
    pub dy: f64,
    pub edge_kinds: EdgeKinds,
    pub shape: Shape,
}

impl CellReconstruction {
    pub fn is_plateau(&self) -> bool {
        matches!(self.shape, Shape::Plateau { .. })
    }

    /// Value at reference coordinates; no bounds check.
    pub fn eval_ref(&self, x: f64, y: f64) -> f64 {
        match &self.shape {
            Shape::PiecewiseBiparabolic { pieces, .. } => {
                let piece = pieces.iter().find(|p| p.region.contains(x, y)).unwrap_or(&pieces[0]);
                piece.poly.eval(x, y)
            }
            Shape::Plateau { eta, value } => plateau::eval_plateau(&self.points, self.edge_kinds, *eta, *value, x, y),
        }
    }

    /// Value at cell-local physical coordinates (origin at the cell center).
    pub fn evaluate(&self, x: f64, y: f64) -> Result<f64> {
        let (xr, yr) = (x / self.dx, y / self.dy);
        let slack = 1e-12;
        if !(xr.abs() <= 0.5 + slack && yr.abs() <= 0.5 + slack) {
            return Err(Error::OutsideCell { x, y });
        }
        Ok(self.eval_ref(xr.clamp(-0.5, 0.5), yr.clamp(-0.5, 0.5)))
    }

    /// Physical partial derivative along `axis` at one of the boundary points.
    ///
    /// Derivatives across the boundary are one-sided from the interior only. Along an
    /// edge, corners take the interior limit of the edge profile; at an edge midpoint
    /// `Lower`/`Upper` select the adjacent half and `Centered` is the two-point rule
    /// through the edge's corners.
    pub fn derivative(&self, at: BoundaryPoint, axis: Axis, side: Side) -> Result<f64> {
        let (px, py) = at.coords();
        let (along, across, h) = match axis {
            Axis::X => (px, py, self.dx),
            Axis::Y => (py, px, self.dy),
        };
        let invalid = || Error::InvalidDerivative(format!("d/d{axis} at {at:?} from {side:?}"));
        if along == 0.0 {
            // Tangential derivative at the midpoint of an N/S (for x) or W/E (for y) edge.
            let edge = edge_at(axis, across);
            let data = self.points.edge(edge);
            let d = match side {
                Side::Centered => data.right - data.left,
                _ => data.slope(self.edge_kinds[edge], 0.0, side),
            };
            return Ok(d / h);
        }
        let inner_side = if along > 0.0 { Side::Lower } else { Side::Upper };
        if side != inner_side {
            return Err(invalid());
        }
        if across != 0.0 {
            // Corner: along the edge that runs in the direction of `axis`.
            let edge = edge_at(axis, across);
            let data = self.points.edge(edge);
            return Ok(data.slope(self.edge_kinds[edge], along, side) / h);
        }
        // Normal derivative at an edge midpoint.
        let d = match &self.shape {
            Shape::PiecewiseBiparabolic { pieces, .. } => {
                let piece = pieces
                    .iter()
                    .find(|p| p.region.contains(px, py))
                    .expect("pieces tile the cell");
                match axis {
                    Axis::X => piece.poly.d_dx(px, py),
                    Axis::Y => piece.poly.d_dy(px, py),
                }
            }
            Shape::Plateau { eta, value } => {
                let q = self.points[at];
                // (q_p - q) / η grows towards the interior.
                let inward = (value - q) / eta;
                if along < 0.0 {
                    inward
                } else {
                    -inward
                }
            }
        };
        Ok(d / h)
    }

    /// The four one-sided normal derivatives at the edge midpoints, ordered W, E, S, N.
    pub fn normal_derivatives(&self) -> [f64; 4] {
        let d = |p, axis, side| self.derivative(p, axis, side).expect("valid interior-side request");
        [
            d(BoundaryPoint::W, Axis::X, Side::Upper),
            d(BoundaryPoint::E, Axis::X, Side::Lower),
            d(BoundaryPoint::S, Axis::Y, Side::Upper),
            d(BoundaryPoint::N, Axis::Y, Side::Lower),
        ]
    }

    /// Sample locations for the maximum-principle check, in reference coordinates.
    pub fn sample_points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        const N: usize = 17;
        let grid = (0..N * N).map(|k| {
            let h = 1.0 / (N - 1) as f64;
            (-0.5 + (k % N) as f64 * h, -0.5 + (k / N) as f64 * h)
        });
        let corners = match self.shape {
            Shape::Plateau { eta, .. } => {
                let c = 0.5 - eta;
                vec![(-c, -c), (c, -c), (-c, c), (c, c)]
            }
            // Region corners of the pieces are all on the uniform grid.
            Shape::PiecewiseBiparabolic { .. } => Vec::new(),
        };
        grid.chain(corners)
    }
}

fn edge_at(axis: Axis, across: f64) -> Edge {
    match (axis, across > 0.0) {
        (Axis::X, true) => Edge::N,
        (Axis::X, false) => Edge::S,
        (Axis::Y, true) => Edge::E,
        (Axis::Y, false) => Edge::W,
    }
}

/// Round-off allowance on comparisons against the point-value bounds.
fn bound_tolerance(m: f64, big_m: f64) -> f64 {
    1e-12 * 1f64.max(m.abs()).max(big_m.abs())
}

/// `m < mean < M`, with a mean within round-off of a bound counted as on it.
pub fn mean_strictly_inside(mean: f64, m: f64, big_m: f64) -> bool {
    let tol = bound_tolerance(m, big_m);
    m + tol < mean && mean < big_m - tol
}

/// True if the reconstruction leaves `[m, M]` at any sample location.
pub fn violates_max_principle(recon: &CellReconstruction, m: f64, big_m: f64) -> bool {
    let tol = bound_tolerance(m, big_m);
    let within = |v: &f64| *v >= m - tol && *v <= big_m + tol;
    if let Shape::PiecewiseBiparabolic { pieces, .. } = &recon.shape {
        // Bernstein hulls inside the bounds rule out every sample at once.
        let bounded = pieces.iter().all(|p| {
            let (xr, yr) = p.region.bounds();
            p.poly.bernstein(xr, yr).iter().all(within)
        });
        if bounded {
            return false;
        }
    }
    recon.sample_points().any(|(x, y)| {
        !within(&recon.eval_ref(x, y))
    })
}

/// Full limited reconstruction of one scalar quantity on one cell.
pub fn reconstruct_cell(points: CellPoints, mean: f64, dx: f64, dy: f64) -> CellReconstruction {
    let kinds = EdgeKinds::classify(&points);
    let pw = assemble_pw_biparabolic(points, mean, kinds, dx, dy);
    let (m, big_m) = points.bounds();
    if mean_strictly_inside(mean, m, big_m) && violates_max_principle(&pw, m, big_m) {
        plateau(points, mean, kinds, dx, dy).expect("precondition checked")
    } else {
        pw
    }
}
