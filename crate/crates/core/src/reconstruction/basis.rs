//! Edge-basis functions and the piecewise-biparabolic reconstruction built from them.
//!
//! Everything here works in reference coordinates `x, y in [-1/2, 1/2]`; the basis of
//! the W-edge is given explicitly and the other three are obtained by rotating the
//! W-edge construction into place.

use arrayvec::ArrayVec;

use super::{CellPoints, CellReconstruction, Edge, EdgeKind, EdgeKinds, Shape};

/// `(a0 + a1 x + a2 x^2) + (a3 + a4 x + a5 x^2) y + (a6 + a7 x + a8 x^2) y^2`;
/// coefficient `a[3k + i]` multiplies `x^i y^k`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Biparabolic(pub [f64; 9]);

impl Biparabolic {
    #[inline]
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let a = &self.0;
        let c0 = a[0] + x * (a[1] + x * a[2]);
        let c1 = a[3] + x * (a[4] + x * a[5]);
        let c2 = a[6] + x * (a[7] + x * a[8]);
        c0 + y * (c1 + y * c2)
    }

    #[inline]
    pub fn d_dx(&self, x: f64, y: f64) -> f64 {
        let a = &self.0;
        (a[1] + 2.0 * a[2] * x) + y * ((a[4] + 2.0 * a[5] * x) + y * (a[7] + 2.0 * a[8] * x))
    }

    #[inline]
    pub fn d_dy(&self, x: f64, y: f64) -> f64 {
        let a = &self.0;
        (a[3] + x * (a[4] + x * a[5])) + 2.0 * y * (a[6] + x * (a[7] + x * a[8]))
    }

    /// Tensor Bernstein coefficients on `[x0, x1] x [y0, y1]`. The polynomial stays
    /// within their range on that rectangle.
    pub fn bernstein(&self, (x0, x1): (f64, f64), (y0, y1): (f64, f64)) -> [f64; 9] {
        fn quad(c: [f64; 3], a: f64, b: f64) -> [f64; 3] {
            let pa = c[0] + a * (c[1] + a * c[2]);
            let pb = c[0] + b * (c[1] + b * c[2]);
            [pa, pa + 0.5 * (b - a) * (c[1] + 2.0 * c[2] * a), pb]
        }
        let a = &self.0;
        let rows: [[f64; 3]; 3] = std::array::from_fn(|k| quad([a[3 * k], a[3 * k + 1], a[3 * k + 2]], x0, x1));
        let mut out = [0.0; 9];
        for i in 0..3 {
            let col = quad([rows[0][i], rows[1][i], rows[2][i]], y0, y1);
            for (k, v) in col.into_iter().enumerate() {
                out[3 * k + i] = v;
            }
        }
        out
    }

    /// Re-expresses a polynomial given in the local frame of `edge` in cell coordinates.
    pub fn to_cell_frame(self, edge: Edge) -> Self {
        let c = &self.0;
        let mut out = [0.0; 9];
        for k in 0..3 {
            for i in 0..3 {
                let v = c[3 * k + i];
                match edge {
                    Edge::W => out[3 * k + i] = v,
                    // x' = y, y' = -x
                    Edge::S => out[3 * i + k] = if k % 2 == 1 { -v } else { v },
                    // x' = -y, y' = x
                    Edge::N => out[3 * i + k] = if i % 2 == 1 { -v } else { v },
                    // x' = -x, y' = -y
                    Edge::E => out[3 * k + i] = if (i + k) % 2 == 1 { -v } else { v },
                }
            }
        }
        Self(out)
    }

    fn add_assign(&mut self, other: &Self) {
        for (a, b) in self.0.iter_mut().zip(other.0) {
            *a += b;
        }
    }
}

/// Support of a polynomial piece.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Region {
    Whole,
    LeftHalf,
    RightHalf,
    TopHalf,
    BottomHalf,
    QuadrantNE,
    QuadrantNW,
    QuadrantSE,
    QuadrantSW,
}

impl Region {
    /// Sign constraints on `(x, y)`; zero means unconstrained.
    pub fn signs(self) -> (i8, i8) {
        match self {
            Region::Whole => (0, 0),
            Region::LeftHalf => (-1, 0),
            Region::RightHalf => (1, 0),
            Region::TopHalf => (0, 1),
            Region::BottomHalf => (0, -1),
            Region::QuadrantNE => (1, 1),
            Region::QuadrantNW => (-1, 1),
            Region::QuadrantSE => (1, -1),
            Region::QuadrantSW => (-1, -1),
        }
    }

    pub fn from_signs(s: (i8, i8)) -> Self {
        match s {
            (0, 0) => Region::Whole,
            (-1, 0) => Region::LeftHalf,
            (1, 0) => Region::RightHalf,
            (0, 1) => Region::TopHalf,
            (0, -1) => Region::BottomHalf,
            (1, 1) => Region::QuadrantNE,
            (-1, 1) => Region::QuadrantNW,
            (1, -1) => Region::QuadrantSE,
            (-1, -1) => Region::QuadrantSW,
            _ => unreachable!("invalid region signs {s:?}"),
        }
    }

    /// Closed-region membership in reference coordinates.
    pub fn contains(self, x: f64, y: f64) -> bool {
        let (sx, sy) = self.signs();
        (sx == 0 || f64::from(sx) * x >= 0.0) && (sy == 0 || f64::from(sy) * y >= 0.0)
    }

    /// `(x range, y range)` in reference coordinates.
    pub fn bounds(self) -> ((f64, f64), (f64, f64)) {
        let span = |s: i8| match s {
            -1 => (-0.5, 0.0),
            1 => (0.0, 0.5),
            _ => (-0.5, 0.5),
        };
        let (sx, sy) = self.signs();
        (span(sx), span(sy))
    }

    fn covers(self, other: Region) -> bool {
        let (a, b) = self.signs();
        let (c, d) = other.signs();
        (a == 0 || a == c) && (b == 0 || b == d)
    }

    pub fn to_cell_frame(self, edge: Edge) -> Self {
        let (a, b) = self.signs();
        Self::from_signs(match edge {
            Edge::W => (a, b),
            Edge::S => (-b, a),
            Edge::N => (b, -a),
            Edge::E => (-a, -b),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BiparabolicPiece {
    pub poly: Biparabolic,
    pub region: Region,
}

/// One edge-basis function: its pieces and its value at the cell center.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeBasis {
    pub pieces: ArrayVec<BiparabolicPiece, 4>,
    pub center: f64,
}

impl EdgeBasis {
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.pieces
            .iter()
            .find(|p| p.region.contains(x, y))
            .map(|p| p.poly.eval(x, y))
            .expect("edge-basis pieces tile the cell")
    }
}

/// Common part of every W-basis piece: the parabola through `q_W, q_C, 0` along `y = 0`
/// and `0, q_C, 0` along `x = 0`.
fn w_piece(qc: f64, qw: f64, a4: f64, a5: f64, a7: f64, a8: f64) -> Biparabolic {
    Biparabolic([qc, -qw, -2.0 * (2.0 * qc - qw), 0.0, a4, a5, -4.0 * qc, a7, a8])
}

/// The W-edge basis function in reference coordinates.
///
/// Interpolates `q_sw, q_w, q_nw` on the W-edge, vanishes at the other five boundary
/// points and has mean `mean`. `s_kind`/`n_kind` are the kinds of the neighbouring S-
/// and N-edges, `w_kind` that of the W-edge itself.
pub fn edge_basis_w(
    q_sw: f64,
    q_w: f64,
    q_nw: f64,
    s_kind: EdgeKind,
    n_kind: EdgeKind,
    w_kind: EdgeKind,
    mean: f64,
) -> EdgeBasis {
    use EdgeKind::{Hat, Parabolic};
    let (sw, w, nw) = (q_sw, q_w, q_nw);
    let mut pieces = ArrayVec::new();
    let mut push = |poly, region| pieces.push(BiparabolicPiece { poly, region });

    let center = match w_kind {
        Parabolic => match (s_kind, n_kind) {
            (Parabolic, Parabolic) => {
                let qc = (36.0 * mean - nw - sw - 4.0 * w) / 16.0;
                push(
                    w_piece(qc, w, -(nw - sw), 2.0 * (nw - sw), -2.0 * (nw + sw - 2.0 * w), 4.0 * (4.0 * qc + nw + sw - 2.0 * w)),
                    Region::Whole,
                );
                qc
            }
            (Hat, Hat) => {
                let qc = (72.0 * mean - 3.0 * (nw + sw) - 8.0 * w) / 32.0;
                let a8 = 8.0 * (2.0 * qc - w);
                push(w_piece(qc, w, -2.0 * (nw - sw), 0.0, -4.0 * (nw + sw - w), a8), Region::LeftHalf);
                push(w_piece(qc, w, 0.0, 0.0, 4.0 * w, a8), Region::RightHalf);
                qc
            }
            (Parabolic, Hat) => {
                let qc = (72.0 * mean - 3.0 * nw - 2.0 * sw - 8.0 * w) / 32.0;
                let a8 = 4.0 * (4.0 * qc + sw - 2.0 * w);
                push(
                    w_piece(qc, w, -(2.0 * nw - sw), -2.0 * sw, -2.0 * (2.0 * nw + sw - 2.0 * w), a8),
                    Region::LeftHalf,
                );
                push(w_piece(qc, w, sw, -2.0 * sw, -2.0 * (sw - 2.0 * w), a8), Region::RightHalf);
                qc
            }
            (Hat, Parabolic) => {
                let qc = (72.0 * mean - 2.0 * nw - 3.0 * sw - 8.0 * w) / 32.0;
                let a8 = 4.0 * (4.0 * qc + nw - 2.0 * w);
                push(
                    w_piece(qc, w, -(nw - 2.0 * sw), 2.0 * nw, -2.0 * (nw + 2.0 * sw - 2.0 * w), a8),
                    Region::LeftHalf,
                );
                push(w_piece(qc, w, -nw, 2.0 * nw, -2.0 * (nw - 2.0 * w), a8), Region::RightHalf);
                qc
            }
        },
        Hat => {
            // Mean of each half, minus its 2 q_C / 9 share.
            let top_rest = match n_kind {
                Parabolic => (nw + w) / 24.0,
                Hat => (35.0 * nw + sw + 22.0 * w) / 576.0,
            };
            let bottom_rest = match s_kind {
                Parabolic => (sw + w) / 24.0,
                Hat => (nw + 35.0 * sw + 22.0 * w) / 576.0,
            };
            let qc = 2.25 * (mean - top_rest - bottom_rest);
            match n_kind {
                Parabolic => push(w_piece(qc, w, -2.0 * (nw - w), 4.0 * (nw - w), 0.0, 16.0 * qc), Region::TopHalf),
                Hat => {
                    push(
                        w_piece(qc, w, -(3.0 * nw - 2.0 * w), 2.0 * (nw - 2.0 * w), -2.0 * nw, 4.0 * (4.0 * qc - nw)),
                        Region::QuadrantNW,
                    );
                    push(
                        w_piece(qc, w, sw, -2.0 * sw, -2.0 * (sw - 2.0 * w), 4.0 * (4.0 * qc + sw - 2.0 * w)),
                        Region::QuadrantNE,
                    );
                }
            }
            match s_kind {
                Parabolic => push(w_piece(qc, w, 2.0 * (sw - w), -4.0 * (sw - w), 0.0, 16.0 * qc), Region::BottomHalf),
                Hat => {
                    push(
                        w_piece(qc, w, 3.0 * sw - 2.0 * w, -2.0 * (sw - 2.0 * w), -2.0 * sw, 4.0 * (4.0 * qc - sw)),
                        Region::QuadrantSW,
                    );
                    push(
                        w_piece(qc, w, -nw, 2.0 * nw, -2.0 * (nw - 2.0 * w), 4.0 * (4.0 * qc + nw - 2.0 * w)),
                        Region::QuadrantSE,
                    );
                }
            }
            qc
        }
    };
    EdgeBasis { pieces, center }
}

/// Basis function of an arbitrary edge, expressed in cell reference coordinates.
///
/// `values` are the edge's three point values in the order used by its local frame
/// (W: SW, W, NW; S: SE, S, SW; N: NW, N, NE; E: NE, E, SE), and `kinds` holds the
/// kinds of all four edges of the cell.
pub fn edge_basis(edge: Edge, values: [f64; 3], kinds: EdgeKinds, mean: f64) -> EdgeBasis {
    let (first_neighbour, last_neighbour) = edge.frame_neighbours();
    let local = edge_basis_w(
        values[0],
        values[1],
        values[2],
        kinds[first_neighbour],
        kinds[last_neighbour],
        kinds[edge],
        mean,
    );
    EdgeBasis {
        pieces: local
            .pieces
            .into_iter()
            .map(|p| BiparabolicPiece {
                poly: p.poly.to_cell_frame(edge),
                region: p.region.to_cell_frame(edge),
            })
            .collect(),
        center: local.center,
    }
}

/// Sum of the four edge bases: interpolates all 8 point values and has mean `mean`.
///
/// The constant `c` (mean of the point values) is split off first, so that the bases
/// carry `q - c` and `mean - c`; uniform data therefore reconstruct to a constant.
pub fn assemble_pw_biparabolic(points: CellPoints, mean: f64, kinds: EdgeKinds, dx: f64, dy: f64) -> CellReconstruction {
    let c = points.point_mean();
    let share = (mean - c) / 4.0;
    let shifted = points.map(|q| q - c);

    let mut center = c;
    let all_parabolic = kinds.all_parabolic();
    let mut quads = [Biparabolic::default(); 4];
    const QUADRANTS: [Region; 4] = [Region::QuadrantSW, Region::QuadrantSE, Region::QuadrantNW, Region::QuadrantNE];

    for edge in Edge::ALL {
        let local = shifted.local_edge(edge);
        let [a, b, d] = local;
        let basis = edge_basis(edge, [a / 2.0, b, d / 2.0], kinds, share);
        center += basis.center;
        for (quad, region) in quads.iter_mut().zip(QUADRANTS) {
            let piece = basis
                .pieces
                .iter()
                .find(|p| p.region.covers(region))
                .expect("edge-basis pieces tile the cell");
            quad.add_assign(&piece.poly);
        }
    }
    for q in &mut quads {
        q.0[0] += c;
    }

    let pieces = if all_parabolic {
        std::iter::once(BiparabolicPiece { poly: quads[0], region: Region::Whole }).collect()
    } else {
        quads
            .into_iter()
            .zip(QUADRANTS)
            .map(|(poly, region)| BiparabolicPiece { poly, region })
            .collect()
    };

    CellReconstruction {
        points,
        mean,
        dx,
        dy,
        edge_kinds: kinds,
        shape: Shape::PiecewiseBiparabolic { pieces, center },
    }
}
