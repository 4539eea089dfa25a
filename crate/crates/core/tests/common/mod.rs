//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use active_flux::grid::DofField;
use active_flux::reconstruction::{CellReconstruction, Shape};
use active_flux::{BoundaryCondition, ConservedState, GridSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// 4-point Gauss-Legendre rule on `[-1, 1]`.
const GL4: [(f64, f64); 4] = [
    (-0.861_136_311_594_052_6, 0.347_854_845_137_453_86),
    (-0.339_981_043_584_856_26, 0.652_145_154_862_546_1),
    (0.339_981_043_584_856_26, 0.652_145_154_862_546_1),
    (0.861_136_311_594_052_6, 0.347_854_845_137_453_86),
];

/// Integral of `f` over `[a, b]`, composite Gauss-Legendre with `panels` panels.
pub fn gauss_1d(a: f64, b: f64, panels: usize, f: impl Fn(f64) -> f64) -> f64 {
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|p| {
            let c = a + (p as f64 + 0.5) * h;
            GL4.iter().map(|(x, w)| w * f(c + 0.5 * h * x)).sum::<f64>() * 0.5 * h
        })
        .sum()
}

/// Integral over `[x0, x1] x [y0, y1]`.
pub fn gauss_rect(x: (f64, f64), y: (f64, f64), panels: usize, f: impl Fn(f64, f64) -> f64) -> f64 {
    gauss_1d(x.0, x.1, panels, |xx| gauss_1d(y.0, y.1, panels, |yy| f(xx, yy)))
}

/// Average of a reconstruction over its cell, integrating piece by piece so that every
/// integrand is smooth. Plateau trapezes are mapped to `(u, v)` with the lateral
/// coordinate proportional to the distance from the center, split where a hat kinks.
pub fn cell_average(r: &CellReconstruction) -> f64 {
    match &r.shape {
        Shape::PiecewiseBiparabolic { pieces, .. } => pieces
            .iter()
            .map(|p| {
                let (xr, yr) = p.region.bounds();
                gauss_rect(xr, yr, 2, |x, y| p.poly.eval(x, y))
            })
            .sum(),
        Shape::Plateau { eta, .. } => {
            let c = 0.5 - eta;
            let mut total = gauss_rect((-c, c), (-c, c), 2, |x, y| r.eval_ref(x, y));
            // (sign of the normal coordinate, normal along x?)
            for (sign, along_x) in [(-1.0, true), (1.0, true), (-1.0, false), (1.0, false)] {
                let tr = |a: f64, v: f64| {
                    let (x, y) = if along_x { (sign * a, v * a) } else { (v * a, sign * a) };
                    r.eval_ref(x, y) * a
                };
                total += gauss_rect((c, 0.5), (-1.0, 0.0), 2, tr) + gauss_rect((c, 0.5), (0.0, 1.0), 2, tr);
            }
            total
        }
    }
}

/// `sum c[a][b] x^a y^b`, a global biquadratic.
#[derive(Clone, Copy, Debug)]
pub struct Biquadratic(pub [[f64; 3]; 3]);

impl Biquadratic {
    pub fn random(rng: &mut impl Rng) -> Self {
        Self(std::array::from_fn(|_| std::array::from_fn(|_| rng.random_range(-1.0..1.0))))
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let mut s = 0.0;
        for a in 0..3 {
            for b in 0..3 {
                s += self.0[a][b] * x.powi(a as i32) * y.powi(b as i32);
            }
        }
        s
    }

    pub fn d_dx(&self, x: f64, y: f64) -> f64 {
        let mut s = 0.0;
        for a in 1..3 {
            for b in 0..3 {
                s += self.0[a][b] * a as f64 * x.powi(a as i32 - 1) * y.powi(b as i32);
            }
        }
        s
    }

    pub fn d_dy(&self, x: f64, y: f64) -> f64 {
        let mut s = 0.0;
        for a in 0..3 {
            for b in 1..3 {
                s += self.0[a][b] * b as f64 * x.powi(a as i32) * y.powi(b as i32 - 1);
            }
        }
        s
    }

    /// Exact average over `[x0, x1] x [y0, y1]` from the antiderivative.
    pub fn average(&self, (x0, x1): (f64, f64), (y0, y1): (f64, f64)) -> f64 {
        let mono = |k: usize, a: f64, b: f64| (b.powi(k as i32 + 1) - a.powi(k as i32 + 1)) / (k as f64 + 1.0);
        let mut s = 0.0;
        for a in 0..3 {
            for b in 0..3 {
                s += self.0[a][b] * mono(a, x0, x1) * mono(b, y0, y1);
            }
        }
        s / ((x1 - x0) * (y1 - y0))
    }
}

/// Four independent biquadratics, one per conserved component.
pub type Field4 = [Biquadratic; 4];

pub fn random_field4(rng: &mut impl Rng) -> Field4 {
    std::array::from_fn(|_| Biquadratic::random(rng))
}

/// Dofs (including ghosts) sampled and averaged exactly from `f`.
pub fn dofs_from(spec: GridSpec, f: &Field4) -> DofField {
    let mut field = DofField::allocate(spec);
    let point = |x: f64, y: f64| ConservedState(std::array::from_fn(|k| f[k].eval(x, y)));
    for j in field.nodes.j_range() {
        for i in field.nodes.i_range() {
            let (x, y) = spec.node_position(i, j);
            field.nodes.set(i, j, point(x, y));
        }
    }
    for j in field.xedges.j_range() {
        for i in field.xedges.i_range() {
            let (x, y) = spec.xedge_position(i, j);
            field.xedges.set(i, j, point(x, y));
        }
    }
    for j in field.yedges.j_range() {
        for i in field.yedges.i_range() {
            let (x, y) = spec.yedge_position(i, j);
            field.yedges.set(i, j, point(x, y));
        }
    }
    for j in field.averages.j_range() {
        for i in field.averages.i_range() {
            let (cx, cy) = spec.cell_center(i, j);
            let (hx, hy) = (spec.dx / 2.0, spec.dy / 2.0);
            let avg = ConservedState(std::array::from_fn(|k| f[k].average((cx - hx, cx + hx), (cy - hy, cy + hy))));
            field.averages.set(i, j, avg);
        }
    }
    field
}

pub fn test_spec(nx: usize, ny: usize) -> GridSpec {
    GridSpec::new(nx, ny, -0.7, 0.2, 0.23, 0.17, BoundaryCondition::EXTRAPOLATE).unwrap()
}

/// One random set of 8 point values and a mean, drawn from a mix of generators that
/// covers generic, tied, nearly uniform and out-of-range data.
pub fn random_dofs(rng: &mut impl Rng) -> ([f64; 8], f64) {
    match rng.random_range(0..5) {
        0 => {
            let p = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
            (p, rng.random_range(-1.2..1.2))
        }
        1 => {
            // Few distinct levels: exercises ties and equal edge endpoints.
            let levels = [0.0, 0.5, 1.0];
            let p = std::array::from_fn(|_| levels[rng.random_range(0..3)]);
            (p, rng.random_range(-0.1..1.1))
        }
        2 => {
            // Samples of a smooth function with a random offset of the mean.
            let f = Biquadratic::random(rng);
            let coords = [(-0.5, -0.5), (0.0, -0.5), (0.5, -0.5), (-0.5, 0.0), (0.5, 0.0), (-0.5, 0.5), (0.0, 0.5), (0.5, 0.5)];
            let p = coords.map(|(x, y)| f.eval(x, y));
            (p, f.average((-0.5, 0.5), (-0.5, 0.5)) + rng.random_range(-0.3..0.3))
        }
        3 => {
            // Step-like data.
            let hi: f64 = rng.random_range(0.5..3.0);
            let lo: f64 = rng.random_range(-1.0..0.5);
            let p = std::array::from_fn(|_| if rng.random_bool(0.5) { hi } else { lo });
            (p, rng.random_range(lo..hi))
        }
        _ => {
            let scale = 10f64.powi(rng.random_range(-6..4));
            let p = std::array::from_fn(|_| scale * rng.random_range(-1.0..1.0));
            (p, scale * rng.random_range(-1.0..1.0))
        }
    }
}

/// Every stored dof (ghosts included) set to an independent random perturbation of a
/// uniform state; `amp` below 0.5 keeps density and pressure positive.
pub fn noisy_field(spec: GridSpec, rng: &mut impl Rng, amp: f64) -> DofField {
    let gas = active_flux::GasParams::default();
    let mut field = DofField::allocate(spec);
    for arr in field.storage_mut() {
        for q in arr.iter_mut() {
            let mut r = || rng.random_range(-amp..amp);
            *q = active_flux::PrimitiveState::new(1.0 + r(), r(), r(), 1.0 + r()).to_conserved(gas);
        }
    }
    field
}
