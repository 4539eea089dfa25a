//! Plateau reconstruction: a constant rectangle in the cell interior, joined to the edge
//! profiles by linear interpolation along rays through the cell center.

use super::{CellPoints, CellReconstruction, Edge, EdgeKind, EdgeKinds, Shape};
use crate::error::{Error, Result};

/// `A(η)`: the mean of the plateau reconstruction is `A(η) q_p + η(2η − 3) K`,
/// with `K` summed from [`edge_weight`].
fn plateau_weight(eta: f64) -> f64 {
    (3.0 - 6.0 * eta + 4.0 * eta * eta) / 3.0
}

/// Edge contribution to the mean of the plateau reconstruction, per unit of `η(2η − 3)`.
fn edge_weight(values: [f64; 3], kind: EdgeKind) -> f64 {
    let [a, mid, b] = values;
    match kind {
        EdgeKind::Parabolic => -(4.0 * mid + a + b) / 36.0,
        EdgeKind::Hat => -(a + b + 2.0 * mid) / 24.0,
    }
}

fn plateau_value(mean: f64, k: f64, eta: f64) -> f64 {
    (mean - eta * (2.0 * eta - 3.0) * k) / plateau_weight(eta)
}

/// Real roots of `a t^2 + b t + c` that lie strictly inside `(0, 1/2)`.
fn roots_in_range(a: f64, b: f64, c: f64) -> impl Iterator<Item = f64> {
    let scale = a.abs().max(b.abs()).max(c.abs());
    let mut roots = [f64::NAN; 2];
    if scale > 0.0 {
        if a.abs() <= 1e-14 * scale {
            if b != 0.0 {
                roots[0] = -c / b;
            }
        } else {
            let disc = b * b - 4.0 * a * c;
            if disc >= 0.0 {
                let q = -0.5 * (b + b.signum() * disc.sqrt());
                roots[0] = q / a;
                if q != 0.0 {
                    roots[1] = c / q;
                }
            }
        }
    }
    roots.into_iter().filter(|r| *r > 0.0 && *r < 0.5)
}

/// Chooses `η` so that `m < q_p < M` and returns `(η, q_p)`.
pub(super) fn solve_plateau(mean: f64, k: f64, m: f64, big_m: f64) -> (f64, f64) {
    let smallest = [m, big_m]
        .into_iter()
        .flat_map(|mu| roots_in_range(4.0 * mu / 3.0 + 2.0 * k, -2.0 * mu - 3.0 * k, mu - mean))
        .fold(f64::INFINITY, f64::min);
    let eta = if smallest.is_finite() { smallest / 2.0 } else { 0.25 };
    (eta, plateau_value(mean, k, eta))
}

fn weight_sum(points: &CellPoints, kinds: EdgeKinds) -> f64 {
    Edge::ALL
        .into_iter()
        .map(|e| edge_weight(points.local_edge(e), kinds[e]))
        .sum()
}

/// The conservative plateau value for a given `η`, without any bound on it.
pub fn plateau_value_at(points: &CellPoints, mean: f64, kinds: EdgeKinds, eta: f64) -> f64 {
    plateau_value(mean, weight_sum(points, kinds), eta)
}

/// Builds the plateau reconstruction. Requires `m < mean < M` for the 8 point values.
pub fn plateau(points: CellPoints, mean: f64, kinds: EdgeKinds, dx: f64, dy: f64) -> Result<CellReconstruction> {
    let (m, big_m) = points.bounds();
    if !(m < mean && mean < big_m) {
        return Err(Error::PlateauPrecondition { m, mean, max: big_m });
    }
    let k = weight_sum(&points, kinds);
    let (eta, value) = solve_plateau(mean, k, m, big_m);
    Ok(CellReconstruction {
        points,
        mean,
        dx,
        dy,
        edge_kinds: kinds,
        shape: Shape::Plateau { eta, value },
    })
}

/// Plateau value at reference coordinates.
pub(super) fn eval_plateau(points: &CellPoints, kinds: EdgeKinds, eta: f64, value: f64, x: f64, y: f64) -> f64 {
    let inner = 0.5 - eta;
    if x.abs() <= inner && y.abs() <= inner {
        return value;
    }
    let edge = if x.abs() >= y.abs() {
        if x < 0.0 {
            Edge::W
        } else {
            Edge::E
        }
    } else if y < 0.0 {
        Edge::S
    } else {
        Edge::N
    };
    let (lx, ly) = edge.to_local(x, y);
    let [a, mid, b] = points.local_edge(edge);
    let s = -ly / (2.0 * lx);
    let t = (lx + 0.5) / eta;
    let e = super::EdgeData::new(a, mid, b).value(kinds[edge], s);
    e * (1.0 - t) + value * t
}
