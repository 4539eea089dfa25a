//! Finite differences at the point-value locations and the upwinded point-value
//! right-hand side.
//!
//! `Side::Lower` is the difference taken from smaller coordinate values (the one used
//! for right-going waves), `Side::Upper` the one from larger values.

use crate::error::{DofLocation, Error, Result};
use crate::exec::{try_for_each_row, Parallelism};
use crate::grid::{Array2, CellBoundary, DofField};
use crate::physics::{jacobian_x, jacobian_y, mat_vec, ConservedState, EigenSystem, GasParams};
use crate::reconstruction::{classify_edge, reconstruct_cell, CellPoints, EdgeData, EdgeKind, Shape, Side};
use crate::Axis;

/// Per-cell one-sided normal derivatives at the edge midpoints, ordered W, E, S, N,
/// in physical units.
pub type NormalDerivatives = [ConservedState; 4];

const W: usize = 0;
const E: usize = 1;
const S: usize = 2;
const N: usize = 3;

/// Normal derivatives of the unlimited biparabolic reconstruction of one component.
#[inline]
fn closed_form_scalar(b: [f64; 8], mean: f64, dx: f64, dy: f64) -> [f64; 4] {
    let [sw, s, se, w, e, nw, n, ne] = b;
    let corners = sw + se + nw + ne;
    let d_e = (4.0 * (-9.0 * mean + 2.0 * (w + 2.0 * e)) + 4.0 * (s + n) + corners) / (4.0 * dx);
    let d_w = -(-36.0 * mean + 8.0 * (2.0 * w + e) + 4.0 * (s + n) + corners) / (4.0 * dx);
    let d_n = (4.0 * (w - 9.0 * mean + e) + corners + 8.0 * (s + 2.0 * n)) / (4.0 * dy);
    let d_s = -(4.0 * (w - 9.0 * mean + e) + corners + 8.0 * (2.0 * s + n)) / (4.0 * dy);
    [d_w, d_e, d_s, d_n]
}

fn component(b: &CellBoundary<ConservedState>, k: usize) -> [f64; 8] {
    b.map(|q| q[k])
}

/// Normal derivatives of cell `(i, j)` from the closed-form stencils.
pub fn closed_form_normal_derivatives(field: &DofField, i: isize, j: isize) -> NormalDerivatives {
    let b = field.cell_boundary_values(i, j);
    let mean = field.averages.at(i, j);
    let mut out = [ConservedState::ZERO; 4];
    for k in 0..4 {
        let d = closed_form_scalar(component(&b, k), mean[k], field.spec.dx, field.spec.dy);
        for (o, v) in out.iter_mut().zip(d) {
            o[k] = v;
        }
    }
    out
}

/// Mean slope of a plateau reconstruction along the straight rays from the edge
/// midpoints to the cell center, ordered W, E, S, N.
///
/// The exact normal derivative `(q_p - q) / (η h)` turns the point update into a
/// relaxation towards `q_p` whose rate grows without bound as `η -> 0`, which no
/// explicit step resolves. The ray-averaged slope has the same sign and target.
fn plateau_ray_slopes(b: &[f64; 8], q_p: f64, dx: f64, dy: f64) -> [f64; 4] {
    let [_, s, _, w, e, _, n, _] = *b;
    [
        2.0 * (q_p - w) / dx,
        2.0 * (e - q_p) / dx,
        2.0 * (q_p - s) / dy,
        2.0 * (n - q_p) / dy,
    ]
}

/// Normal derivatives of cell `(i, j)` from its active (possibly limited) reconstruction.
pub fn limited_normal_derivatives(field: &DofField, i: isize, j: isize) -> NormalDerivatives {
    let b = field.cell_boundary_values(i, j);
    let mean = field.averages.at(i, j);
    let (dx, dy) = (field.spec.dx, field.spec.dy);
    let mut out = [ConservedState::ZERO; 4];
    for k in 0..4 {
        let values = component(&b, k);
        let recon = reconstruct_cell(CellPoints(values), mean[k], dx, dy);
        let d = match recon.shape {
            Shape::Plateau { value, .. } => plateau_ray_slopes(&values, value, dx, dy),
            _ if recon.edge_kinds.all_parabolic() => closed_form_scalar(values, mean[k], dx, dy),
            _ => recon.normal_derivatives(),
        };
        for (o, v) in out.iter_mut().zip(d) {
            o[k] = v;
        }
    }
    out
}

/// Normal derivatives for every cell adjacent to a physical point value
/// (cells `-1..=n` in each direction).
pub fn cell_normal_derivatives(field: &DofField, limiter: bool, par: Parallelism) -> Array2<NormalDerivatives> {
    let (nx, ny) = (field.spec.nx as isize, field.spec.ny as isize);
    let mut out = Array2::new("cell derivatives", field.spec.nx, field.spec.ny);
    try_for_each_row(par, &mut out, -1..ny + 1, |j, row| {
        for i in -1..=nx {
            row[i] = if limiter {
                limited_normal_derivatives(field, i, j)
            } else {
                closed_form_normal_derivatives(field, i, j)
            };
        }
        Ok(())
    })
    .expect("infallible");
    out
}

/// Slope of an edge profile at one of its ends, `d/ds` with `s` running from `left` to `right`.
#[inline]
fn end_slope(left: f64, mid: f64, right: f64, kind: EdgeKind, at_right: bool) -> f64 {
    match (kind, at_right) {
        (EdgeKind::Parabolic, true) => left - 4.0 * mid + 3.0 * right,
        (EdgeKind::Parabolic, false) => 4.0 * mid - 3.0 * left - right,
        (EdgeKind::Hat, true) => 2.0 * (right - mid),
        (EdgeKind::Hat, false) => 2.0 * (mid - left),
    }
}

/// Derivative along an edge at one of its end nodes, per component.
#[inline]
fn edge_end_derivative(
    left: ConservedState,
    mid: ConservedState,
    right: ConservedState,
    at_right: bool,
    limiter: bool,
    h: f64,
) -> [f64; 4] {
    std::array::from_fn(|k| {
        let kind = if limiter {
            classify_edge(EdgeData::new(left[k], mid[k], right[k]))
        } else {
            EdgeKind::Parabolic
        };
        end_slope(left[k], mid[k], right[k], kind, at_right) / h
    })
}

/// The closed-form finite differences of the unlimited scheme.
///
/// Valid requests: at nodes, `Lower`/`Upper` along either axis; at x-edge midpoints
/// `Lower`/`Upper` along x and `Centered` along y; at y-edge midpoints the mirror.
pub fn closed_form_differences(field: &DofField, at: DofLocation, axis: Axis, side: Side) -> Result<ConservedState> {
    let (dx, dy) = (field.spec.dx, field.spec.dy);
    let nodes = &field.nodes;
    let invalid = || Error::InvalidDerivative(format!("d/d{axis} from {side:?} at {at}"));
    let d = match (at, axis, side) {
        (DofLocation::Node(i, j), Axis::X, Side::Lower) => {
            edge_end_derivative(nodes.at(i - 1, j), field.yedges.at(i - 1, j), nodes.at(i, j), true, false, dx)
        }
        (DofLocation::Node(i, j), Axis::X, Side::Upper) => {
            edge_end_derivative(nodes.at(i, j), field.yedges.at(i, j), nodes.at(i + 1, j), false, false, dx)
        }
        (DofLocation::Node(i, j), Axis::Y, Side::Lower) => {
            edge_end_derivative(nodes.at(i, j - 1), field.xedges.at(i, j - 1), nodes.at(i, j), true, false, dy)
        }
        (DofLocation::Node(i, j), Axis::Y, Side::Upper) => {
            edge_end_derivative(nodes.at(i, j), field.xedges.at(i, j), nodes.at(i, j + 1), false, false, dy)
        }
        (DofLocation::XEdge(i, j), Axis::X, Side::Lower) => closed_form_normal_derivatives(field, i - 1, j)[E].0,
        (DofLocation::XEdge(i, j), Axis::X, Side::Upper) => closed_form_normal_derivatives(field, i, j)[W].0,
        (DofLocation::XEdge(i, j), Axis::Y, Side::Centered) => ((nodes.at(i, j + 1) - nodes.at(i, j)) * (1.0 / dy)).0,
        (DofLocation::YEdge(i, j), Axis::Y, Side::Lower) => closed_form_normal_derivatives(field, i, j - 1)[N].0,
        (DofLocation::YEdge(i, j), Axis::Y, Side::Upper) => closed_form_normal_derivatives(field, i, j)[S].0,
        (DofLocation::YEdge(i, j), Axis::X, Side::Centered) => ((nodes.at(i + 1, j) - nodes.at(i, j)) * (1.0 / dx)).0,
        _ => return Err(invalid()),
    };
    Ok(ConservedState(d))
}

/// Time derivatives of the point values.
#[derive(Clone, Debug, PartialEq)]
pub struct PointRhs {
    pub nodes: Array2<ConservedState>,
    pub xedges: Array2<ConservedState>,
    pub yedges: Array2<ConservedState>,
}

/// Point-value right-hand side. Ghosts of `field` must be filled.
pub fn point_rhs(field: &DofField, limiter: bool, gas: GasParams, par: Parallelism) -> Result<PointRhs> {
    let mut out = DofField::allocate(field.spec);
    point_rhs_into(field, limiter, gas, par, &mut out)?;
    let DofField { nodes, xedges, yedges, .. } = out;
    Ok(PointRhs { nodes, xedges, yedges })
}

fn neg(v: [f64; 4]) -> ConservedState {
    ConservedState(v.map(|x| -x))
}

fn add(a: [f64; 4], b: [f64; 4]) -> [f64; 4] {
    std::array::from_fn(|k| a[k] + b[k])
}

/// Writes the point-value right-hand side into the node and edge arrays of `out`.
pub fn point_rhs_into(field: &DofField, limiter: bool, gas: GasParams, par: Parallelism, out: &mut DofField) -> Result<()> {
    let spec = field.spec;
    let (nx, ny) = (spec.nx as isize, spec.ny as isize);
    let (dx, dy) = (spec.dx, spec.dy);
    let derivs = cell_normal_derivatives(field, limiter, par);
    let nodes = &field.nodes;

    try_for_each_row(par, &mut out.xedges, 0..ny, |j, row| {
        for i in 0..=nx {
            let q = field.xedges.at(i, j);
            let loc = DofLocation::XEdge(i, j);
            let ex = EigenSystem::x(q, gas).map_err(|e| Error::domain(loc, e))?;
            let jy = jacobian_y(q, gas).map_err(|e| Error::domain(loc, e))?;
            let d_plus = derivs.at(i - 1, j)[E].0;
            let d_minus = derivs.at(i, j)[W].0;
            let d_y = ((nodes.at(i, j + 1) - nodes.at(i, j)) * (1.0 / dy)).0;
            row[i] = neg(add(ex.upwind(d_plus, d_minus), mat_vec(&jy, d_y)));
        }
        Ok(())
    })?;

    try_for_each_row(par, &mut out.yedges, 0..ny + 1, |j, row| {
        for i in 0..nx {
            let q = field.yedges.at(i, j);
            let loc = DofLocation::YEdge(i, j);
            let ey = EigenSystem::y(q, gas).map_err(|e| Error::domain(loc, e))?;
            let jx = jacobian_x(q, gas).map_err(|e| Error::domain(loc, e))?;
            let d_plus = derivs.at(i, j - 1)[N].0;
            let d_minus = derivs.at(i, j)[S].0;
            let d_x = ((nodes.at(i + 1, j) - nodes.at(i, j)) * (1.0 / dx)).0;
            row[i] = neg(add(ey.upwind(d_plus, d_minus), mat_vec(&jx, d_x)));
        }
        Ok(())
    })?;

    try_for_each_row(par, &mut out.nodes, 0..ny + 1, |j, row| {
        for i in 0..=nx {
            let q = nodes.at(i, j);
            let loc = DofLocation::Node(i, j);
            let ex = EigenSystem::x(q, gas).map_err(|e| Error::domain(loc, e))?;
            let ey = EigenSystem::y(q, gas).map_err(|e| Error::domain(loc, e))?;
            let dx_plus = edge_end_derivative(nodes.at(i - 1, j), field.yedges.at(i - 1, j), q, true, limiter, dx);
            let dx_minus = edge_end_derivative(q, field.yedges.at(i, j), nodes.at(i + 1, j), false, limiter, dx);
            let dy_plus = edge_end_derivative(nodes.at(i, j - 1), field.xedges.at(i, j - 1), q, true, limiter, dy);
            let dy_minus = edge_end_derivative(q, field.xedges.at(i, j), nodes.at(i, j + 1), false, limiter, dy);
            row[i] = neg(add(ex.upwind(dx_plus, dx_minus), ey.upwind(dy_plus, dy_minus)));
        }
        Ok(())
    })?;
    Ok(())
}
