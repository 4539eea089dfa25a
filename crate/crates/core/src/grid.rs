//! Degree-of-freedom storage for Active Flux on a Cartesian grid.
//!
//! Index conventions (`i` along x, `j` along y):
//!
//! * cell `(i, j)` covers `[x0 + i dx, x0 + (i+1) dx] x [y0 + j dy, y0 + (j+1) dy]`, `0 <= i < nx`;
//! * node `(i, j)` sits at `(x0 + i dx, y0 + j dy)`, `0 <= i <= nx`;
//! * x-edge `(i, j)` is the midpoint of the vertical face at `x0 + i dx`, `y0 + (j + 1/2) dy`;
//! * y-edge `(i, j)` is the midpoint of the horizontal face at `x0 + (i + 1/2) dx`, `y0 + j dy`.
//!
//! Every point value is stored once; the west node of cell `(i+1, j)` is the same slot as
//! the east node of cell `(i, j)`. All arrays carry [`GHOST`] layers on every side.

use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::physics::ConservedState;

/// Ghost layers on each side, in cells.
pub const GHOST: usize = 2;
const G: isize = GHOST as isize;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundaryKind {
    Periodic,
    /// Zeroth-order copy of the outermost physical slot along the outward normal.
    Extrapolate,
}

/// Boundary treatment, uniform along each axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundaryCondition {
    pub x: BoundaryKind,
    pub y: BoundaryKind,
}

impl BoundaryCondition {
    pub const PERIODIC: Self = Self::uniform(BoundaryKind::Periodic);
    pub const EXTRAPOLATE: Self = Self::uniform(BoundaryKind::Extrapolate);

    pub const fn uniform(kind: BoundaryKind) -> Self {
        Self { x: kind, y: kind }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub nx: usize,
    pub ny: usize,
    pub x0: f64,
    pub y0: f64,
    pub dx: f64,
    pub dy: f64,
    pub bc: BoundaryCondition,
}

impl GridSpec {
    pub fn new(nx: usize, ny: usize, x0: f64, y0: f64, dx: f64, dy: f64, bc: BoundaryCondition) -> Result<Self> {
        if nx < 3 || ny < 3 {
            return Err(Error::InvalidGrid(format!("need at least 3x3 cells, got {nx}x{ny}")));
        }
        if !(dx > 0.0 && dy > 0.0 && dx.is_finite() && dy.is_finite()) {
            return Err(Error::InvalidGrid(format!("spacings must be positive, got dx={dx}, dy={dy}")));
        }
        Ok(Self { nx, ny, x0, y0, dx, dy, bc })
    }

    /// Uniform grid covering `[x_lo, x_hi] x [y_lo, y_hi]`.
    pub fn on_domain(nx: usize, ny: usize, x: (f64, f64), y: (f64, f64), bc: BoundaryCondition) -> Result<Self> {
        Self::new(nx, ny, x.0, y.0, (x.1 - x.0) / nx as f64, (y.1 - y.0) / ny as f64, bc)
    }

    pub fn node_position(&self, i: isize, j: isize) -> (f64, f64) {
        (self.x0 + i as f64 * self.dx, self.y0 + j as f64 * self.dy)
    }

    pub fn xedge_position(&self, i: isize, j: isize) -> (f64, f64) {
        (self.x0 + i as f64 * self.dx, self.y0 + (j as f64 + 0.5) * self.dy)
    }

    pub fn yedge_position(&self, i: isize, j: isize) -> (f64, f64) {
        (self.x0 + (i as f64 + 0.5) * self.dx, self.y0 + j as f64 * self.dy)
    }

    pub fn cell_center(&self, i: isize, j: isize) -> (f64, f64) {
        (self.x0 + (i as f64 + 0.5) * self.dx, self.y0 + (j as f64 + 0.5) * self.dy)
    }

    pub fn area(&self) -> f64 {
        self.nx as f64 * self.dx * self.ny as f64 * self.dy
    }
}

/// Whether an array axis counts cells (n entries) or faces (n + 1 entries, sharing a seam).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Centering {
    Cell,
    Face,
}

/// A 2D array addressed by signed indices, including [`GHOST`] layers.
#[derive(Clone, Debug, PartialEq)]
pub struct Array2<T> {
    name: &'static str,
    ni: usize,
    nj: usize,
    stride: usize,
    data: Vec<T>,
}

impl<T: Copy + Default> Array2<T> {
    pub fn new(name: &'static str, ni: usize, nj: usize) -> Self {
        let stride = ni + 2 * GHOST;
        Self {
            name,
            ni,
            nj,
            stride,
            data: vec![T::default(); stride * (nj + 2 * GHOST)],
        }
    }
}

impl<T> Array2<T> {
    /// Physical extents (without ghosts).
    pub fn extents(&self) -> (usize, usize) {
        (self.ni, self.nj)
    }

    pub fn stride(&self) -> usize {
        self.stride
    }

    pub fn i_range(&self) -> std::ops::Range<isize> {
        -G..self.ni as isize + G
    }

    pub fn j_range(&self) -> std::ops::Range<isize> {
        -G..self.nj as isize + G
    }

    pub fn contains(&self, i: isize, j: isize) -> bool {
        self.i_range().contains(&i) && self.j_range().contains(&j)
    }

    #[inline]
    pub fn offset(&self, i: isize, j: isize) -> usize {
        debug_assert!(self.contains(i, j), "{} index ({i}, {j}) out of range", self.name);
        (j + G) as usize * self.stride + (i + G) as usize
    }

    pub fn try_get(&self, i: isize, j: isize) -> Result<&T> {
        if self.contains(i, j) {
            Ok(&self.data[self.offset(i, j)])
        } else {
            Err(Error::Index { array: self.name, i, j })
        }
    }

    pub fn try_get_mut(&mut self, i: isize, j: isize) -> Result<&mut T> {
        if self.contains(i, j) {
            let k = self.offset(i, j);
            Ok(&mut self.data[k])
        } else {
            Err(Error::Index { array: self.name, i, j })
        }
    }

    /// Raw storage, rows of length [`Self::stride`] starting at `j = -GHOST`.
    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.data
    }

    /// Storage row `j` (all `i` including ghosts).
    pub fn row(&self, j: isize) -> &[T] {
        let start = (j + G) as usize * self.stride;
        &self.data[start..start + self.stride]
    }

    /// Iterates over physical slots in row-major order, `i` fastest.
    pub fn physical(&self) -> impl Iterator<Item = ((isize, isize), &T)> + '_ {
        (0..self.nj as isize)
            .flat_map(move |j| (0..self.ni as isize).map(move |i| (i, j)))
            .map(move |(i, j)| ((i, j), &self.data[self.offset(i, j)]))
    }
}

impl<T: Copy> Array2<T> {
    #[inline]
    pub fn at(&self, i: isize, j: isize) -> T {
        self.data[self.offset(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: isize, j: isize, v: T) {
        let k = self.offset(i, j);
        self.data[k] = v;
    }

    pub fn fill_ghosts(&mut self, centering: (Centering, Centering), bc: BoundaryCondition) {
        // x pass over physical rows, then y pass over full rows so corners are covered.
        for j in 0..self.nj as isize {
            for i in self.i_range() {
                if let Some(src) = source_index(i, self.ni, centering.0, bc.x) {
                    let v = self.at(src, j);
                    self.set(i, j, v);
                }
            }
        }
        for j in self.j_range() {
            if let Some(src) = source_index(j, self.nj, centering.1, bc.y) {
                let from = self.offset(-G, src);
                let to = self.offset(-G, j);
                self.data.copy_within(from..from + self.stride, to);
            }
        }
    }
}

impl<T> Index<(isize, isize)> for Array2<T> {
    type Output = T;
    fn index(&self, (i, j): (isize, isize)) -> &T {
        &self.data[self.offset(i, j)]
    }
}

impl<T> IndexMut<(isize, isize)> for Array2<T> {
    fn index_mut(&mut self, (i, j): (isize, isize)) -> &mut T {
        let k = self.offset(i, j);
        &mut self.data[k]
    }
}

/// Which slot a ghost (or periodic seam) slot copies from; `None` for owned slots.
fn source_index(k: isize, n_phys: usize, centering: Centering, kind: BoundaryKind) -> Option<isize> {
    let n_phys = n_phys as isize;
    match kind {
        BoundaryKind::Periodic => {
            let period = match centering {
                Centering::Cell => n_phys,
                Centering::Face => n_phys - 1,
            };
            (k < 0 || k >= period).then(|| k.rem_euclid(period))
        }
        BoundaryKind::Extrapolate => {
            if k < 0 {
                Some(0)
            } else if k >= n_phys {
                Some(n_phys - 1)
            } else {
                None
            }
        }
    }
}

/// Boundary point values of one cell, in the order
/// `SW, S, SE, W, E, NW, N, NE`.
pub type CellBoundary<T> = [T; 8];

#[derive(Clone, Debug, PartialEq)]
pub struct DofField {
    pub spec: GridSpec,
    pub averages: Array2<ConservedState>,
    pub nodes: Array2<ConservedState>,
    pub xedges: Array2<ConservedState>,
    pub yedges: Array2<ConservedState>,
}

pub const AVERAGE_CENTERING: (Centering, Centering) = (Centering::Cell, Centering::Cell);
pub const NODE_CENTERING: (Centering, Centering) = (Centering::Face, Centering::Face);
pub const XEDGE_CENTERING: (Centering, Centering) = (Centering::Face, Centering::Cell);
pub const YEDGE_CENTERING: (Centering, Centering) = (Centering::Cell, Centering::Face);

impl DofField {
    /// Zero-initialized field.
    pub fn allocate(spec: GridSpec) -> Self {
        let (nx, ny) = (spec.nx, spec.ny);
        Self {
            spec,
            averages: Array2::new("averages", nx, ny),
            nodes: Array2::new("nodes", nx + 1, ny + 1),
            xedges: Array2::new("xedges", nx + 1, ny),
            yedges: Array2::new("yedges", nx, ny + 1),
        }
    }

    pub fn fill_ghosts(&mut self) {
        let bc = self.spec.bc;
        self.averages.fill_ghosts(AVERAGE_CENTERING, bc);
        self.nodes.fill_ghosts(NODE_CENTERING, bc);
        self.xedges.fill_ghosts(XEDGE_CENTERING, bc);
        self.yedges.fill_ghosts(YEDGE_CENTERING, bc);
    }

    /// The 8 point values on the boundary of cell `(i, j)`, ordered `SW, S, SE, W, E, NW, N, NE`.
    #[inline]
    pub fn cell_boundary_values(&self, i: isize, j: isize) -> CellBoundary<ConservedState> {
        [
            self.nodes.at(i, j),
            self.yedges.at(i, j),
            self.nodes.at(i + 1, j),
            self.xedges.at(i, j),
            self.xedges.at(i + 1, j),
            self.nodes.at(i, j + 1),
            self.yedges.at(i, j + 1),
            self.nodes.at(i + 1, j + 1),
        ]
    }

    /// Checked variant of [`Self::cell_boundary_values`]: the cell must lie within the
    /// physical range extended by one ghost layer.
    pub fn try_cell_boundary_values(&self, i: isize, j: isize) -> Result<CellBoundary<ConservedState>> {
        let (nx, ny) = (self.spec.nx as isize, self.spec.ny as isize);
        if i < -1 || j < -1 || i > nx || j > ny {
            return Err(Error::Index { array: "cells", i, j });
        }
        Ok(self.cell_boundary_values(i, j))
    }

    /// Applies `f` to the four storage vectors pairwise with `other`.
    pub fn zip_apply(&mut self, other: &DofField, f: impl Fn(&mut ConservedState, ConservedState)) {
        for (a, b) in self.storage_mut().into_iter().zip(other.storage()) {
            for (x, y) in a.iter_mut().zip(b) {
                f(x, *y);
            }
        }
    }

    pub fn storage(&self) -> [&[ConservedState]; 4] {
        [
            self.averages.as_slice(),
            self.nodes.as_slice(),
            self.xedges.as_slice(),
            self.yedges.as_slice(),
        ]
    }

    pub fn storage_mut(&mut self) -> [&mut [ConservedState]; 4] {
        [
            self.averages.as_mut_slice(),
            self.nodes.as_mut_slice(),
            self.xedges.as_mut_slice(),
            self.yedges.as_mut_slice(),
        ]
    }

    /// Visits every physical point value (nodes, x-edges, y-edges) with its position.
    pub fn for_each_point(&self, mut f: impl FnMut(crate::error::DofLocation, (f64, f64), ConservedState)) {
        use crate::error::DofLocation as L;
        for ((i, j), q) in self.nodes.physical() {
            f(L::Node(i, j), self.spec.node_position(i, j), *q);
        }
        for ((i, j), q) in self.xedges.physical() {
            f(L::XEdge(i, j), self.spec.xedge_position(i, j), *q);
        }
        for ((i, j), q) in self.yedges.physical() {
            f(L::YEdge(i, j), self.spec.yedge_position(i, j), *q);
        }
    }

    /// Total of the cell averages times the cell area (mass, momentum, energy).
    pub fn totals(&self) -> ConservedState {
        let area = self.spec.dx * self.spec.dy;
        let mut sum = ConservedState::ZERO;
        for (_, q) in self.averages.physical() {
            sum += *q;
        }
        sum * area
    }
}
