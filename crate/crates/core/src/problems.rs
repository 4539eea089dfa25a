//! Initial data and per-problem defaults.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{DofLocation, Error, Result};
use crate::grid::{BoundaryCondition, BoundaryKind, DofField, GridSpec};
use crate::physics::{validate, ConservedState, GasParams, PrimitiveState};

/// The shipped Riemann-problem table.
pub const LAXLIU_DATA: &str = include_str!("../data/laxliu.dat");

/// Quadrant states of the two-dimensional Riemann problems, indexed by configuration.
/// Quadrants are ordered NE, NW, SW, SE.
#[derive(Clone, Debug, PartialEq)]
pub struct LaxLiuData {
    configs: BTreeMap<u32, [PrimitiveState; 4]>,
}

impl LaxLiuData {
    pub fn builtin() -> Self {
        Self::parse(LAXLIU_DATA).expect("shipped data file parses")
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Parses lines `config quadrant rho u v p`; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut partial: BTreeMap<u32, [Option<PrimitiveState>; 4]> = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |what: &str| Error::Config(format!("Riemann data line {}: {what}: {raw:?}", n + 1));
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 6 {
                return Err(bad("expected 6 columns"));
            }
            let id: u32 = fields[0].parse().map_err(|_| bad("bad configuration id"))?;
            let quadrant: usize = fields[1].parse().map_err(|_| bad("bad quadrant"))?;
            if !(1..=4).contains(&quadrant) {
                return Err(bad("quadrant must be 1..4"));
            }
            let mut v = [0.0; 4];
            for (slot, s) in v.iter_mut().zip(&fields[2..]) {
                *slot = s.parse().map_err(|_| bad("bad number"))?;
            }
            let state = PrimitiveState::new(v[0], v[1], v[2], v[3]);
            if !(state.rho > 0.0 && state.p > 0.0 && v.iter().all(|x| x.is_finite())) {
                return Err(bad("non-physical state"));
            }
            let entry = partial.entry(id).or_default();
            if entry[quadrant - 1].replace(state).is_some() {
                return Err(bad("duplicate quadrant"));
            }
        }
        let mut configs = BTreeMap::new();
        for (id, q) in partial {
            let states = q.map(|s| s.ok_or_else(|| Error::Config(format!("configuration {id} lacks a quadrant"))));
            let [a, b, c, d] = states;
            configs.insert(id, [a?, b?, c?, d?]);
        }
        Ok(Self { configs })
    }

    pub fn ids(&self) -> impl Iterator<Item = u32> + '_ {
        self.configs.keys().copied()
    }

    pub fn config(&self, id: u32) -> Result<[PrimitiveState; 4]> {
        self.configs
            .get(&id)
            .copied()
            .ok_or_else(|| Error::Config(format!("Riemann configuration {id} not present in the data file")))
    }
}

pub fn gaussian_ic(x: f64, y: f64) -> PrimitiveState {
    let r = 1.0 + 0.5 * (-80.0 * (x * x + y * y)).exp();
    PrimitiveState::new(r, 0.0, 0.0, r)
}

pub fn sod_ic(x: f64, y: f64) -> PrimitiveState {
    let r = ((x - 0.5).powi(2) + (y - 0.5).powi(2)).sqrt();
    if r < 0.3 {
        PrimitiveState::new(1.0, 0.0, 0.0, 1.0)
    } else {
        PrimitiveState::new(0.125, 0.0, 0.0, 0.1)
    }
}

/// Constant states per quadrant around `(0.5, 0.5)`; points on a dividing line
/// belong to the east/north side.
pub fn laxliu_ic(states: &[PrimitiveState; 4], x: f64, y: f64) -> PrimitiveState {
    let quadrant = match (x >= 0.5, y >= 0.5) {
        (true, true) => 0,
        (false, true) => 1,
        (false, false) => 2,
        (true, false) => 3,
    };
    states[quadrant]
}

pub fn kh_psi(x: f64, mach: f64) -> f64 {
    1.0 + (std::f64::consts::PI * mach * x).cos()
}

pub fn kh_phi(y: f64, mach: f64) -> f64 {
    if y < 4.0 {
        2.0 * mach * y
    } else {
        2.0 * mach * (y - 4.0) - 0.4
    }
}

pub fn kh_ic(x: f64, y: f64, mach: f64, gas: GasParams) -> PrimitiveState {
    let psi = kh_psi(x, mach);
    PrimitiveState::new(
        1.0 + mach / 5.0 * psi + kh_phi(y, mach),
        gas.gamma.sqrt() * psi,
        0.0,
        1.0 / (mach * mach) + gas.gamma / mach * psi,
    )
}

#[derive(Clone, Debug, PartialEq)]
pub enum Problem {
    GaussianPulse,
    SodRadial,
    LaxLiu { id: u32, states: [PrimitiveState; 4] },
    KelvinHelmholtz { mach: f64 },
}

/// Domain, boundary treatment and end time used when the caller gives none.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProblemDefaults {
    pub x: (f64, f64),
    pub y: (f64, f64),
    pub bc: BoundaryCondition,
    pub t_end: f64,
}

pub const DEFAULT_KH_MACH: f64 = 0.05;

impl Problem {
    /// Looks up a problem by its command-line name: `gaussian`, `sod`, `kh` or
    /// `laxliu<N>`.
    pub fn from_name(name: &str, mach: Option<f64>, data: &LaxLiuData) -> Result<Self> {
        match name {
            "gaussian" => Ok(Problem::GaussianPulse),
            "sod" => Ok(Problem::SodRadial),
            "kh" => {
                let mach = mach.unwrap_or(DEFAULT_KH_MACH);
                if !(mach > 0.0 && mach.is_finite()) {
                    return Err(Error::Config(format!("Mach number must be positive, got {mach}")));
                }
                Ok(Problem::KelvinHelmholtz { mach })
            }
            _ => {
                let id = name
                    .strip_prefix("laxliu")
                    .and_then(|s| s.parse::<u32>().ok())
                    .ok_or_else(|| Error::Config(format!("unknown problem {name:?}")))?;
                Ok(Problem::LaxLiu { id, states: data.config(id)? })
            }
        }
    }

    pub fn name(&self) -> String {
        match self {
            Problem::GaussianPulse => "gaussian".into(),
            Problem::SodRadial => "sod".into(),
            Problem::LaxLiu { id, .. } => format!("laxliu{id}"),
            Problem::KelvinHelmholtz { .. } => "kh".into(),
        }
    }

    pub fn defaults(&self) -> ProblemDefaults {
        match self {
            Problem::GaussianPulse => ProblemDefaults {
                x: (-0.5, 0.5),
                y: (-0.5, 0.5),
                bc: BoundaryCondition::PERIODIC,
                t_end: 0.05,
            },
            Problem::SodRadial => ProblemDefaults {
                x: (0.0, 1.0),
                y: (0.0, 1.0),
                bc: BoundaryCondition::EXTRAPOLATE,
                t_end: 0.2,
            },
            Problem::LaxLiu { id, .. } => ProblemDefaults {
                x: (-0.25, 1.25),
                y: (-0.25, 1.25),
                bc: BoundaryCondition::EXTRAPOLATE,
                t_end: match id {
                    6 | 11 => 0.3,
                    16 => 0.2,
                    _ => 0.25,
                },
            },
            Problem::KelvinHelmholtz { mach } => ProblemDefaults {
                x: (0.0, 2.0 / mach),
                y: (0.0, 8.0),
                bc: BoundaryCondition {
                    x: BoundaryKind::Periodic,
                    y: BoundaryKind::Extrapolate,
                },
                t_end: 12.0,
            },
        }
    }

    /// Grid with `nx * ny` cells on the default domain.
    pub fn grid(&self, nx: usize, ny: usize) -> Result<GridSpec> {
        let d = self.defaults();
        GridSpec::on_domain(nx, ny, d.x, d.y, d.bc)
    }

    pub fn state_at(&self, x: f64, y: f64, gas: GasParams) -> PrimitiveState {
        match self {
            Problem::GaussianPulse => gaussian_ic(x, y),
            Problem::SodRadial => sod_ic(x, y),
            Problem::LaxLiu { states, .. } => laxliu_ic(states, x, y),
            Problem::KelvinHelmholtz { mach } => kh_ic(x, y, *mach, gas),
        }
    }

    /// Samples the point values and integrates the cell averages of the initial data.
    pub fn initialize(&self, spec: GridSpec, gas: GasParams) -> Result<DofField> {
        initialize_with(spec, gas, |x, y| self.state_at(x, y, gas))
    }
}

const GAUSS5: [(f64, f64); 5] = [
    (-0.453_089_922_969_332_2, 0.118_463_442_528_094_54),
    (-0.269_234_655_052_841_6, 0.239_314_335_249_683_23),
    (0.0, 0.284_444_444_444_444_45),
    (0.269_234_655_052_841_6, 0.239_314_335_249_683_23),
    (0.453_089_922_969_332_2, 0.118_463_442_528_094_54),
];

/// Point values sampled from `f`; averages by 5x5 Gauss quadrature of the conserved
/// variables, or the exact state where all quadrature samples coincide.
pub fn initialize_with(spec: GridSpec, gas: GasParams, f: impl Fn(f64, f64) -> PrimitiveState) -> Result<DofField> {
    let mut field = DofField::allocate(spec);
    let conserved = |x, y, loc| {
        let q = f(x, y).to_conserved(gas);
        validate(q, gas).map(|_| q).map_err(|e| Error::domain(loc, e))
    };
    let (nx, ny) = (spec.nx as isize, spec.ny as isize);
    for j in 0..=ny {
        for i in 0..=nx {
            let (x, y) = spec.node_position(i, j);
            field.nodes.set(i, j, conserved(x, y, DofLocation::Node(i, j))?);
            if j < ny {
                let (x, y) = spec.xedge_position(i, j);
                field.xedges.set(i, j, conserved(x, y, DofLocation::XEdge(i, j))?);
            }
            if i < nx {
                let (x, y) = spec.yedge_position(i, j);
                field.yedges.set(i, j, conserved(x, y, DofLocation::YEdge(i, j))?);
            }
            if i < nx && j < ny {
                let (xc, yc) = spec.cell_center(i, j);
                let mut sum = ConservedState::ZERO;
                let mut first = None;
                let mut uniform = true;
                for (a, wa) in GAUSS5 {
                    for (b, wb) in GAUSS5 {
                        let q = conserved(xc + a * spec.dx, yc + b * spec.dy, DofLocation::Average(i, j))?;
                        uniform &= *first.get_or_insert(q) == q;
                        sum += q * (wa * wb);
                    }
                }
                let avg = if uniform { first.expect("25 samples") } else { sum };
                field.averages.set(i, j, avg);
            }
        }
    }
    field.fill_ghosts();
    Ok(field)
}
