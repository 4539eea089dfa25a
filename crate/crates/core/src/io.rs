//! Snapshots on disk, point-value error norms, convergence studies and figure data.
//!
//! Binary layout (little-endian): magic `AFX2`, `u32` version, `u64` nx, ny, `f64`
//! dx, dy, x0, y0, time, gamma, `u64` limiter flag, then the physical averages,
//! nodes, x-edge and y-edge values, each array row-major with `i` fastest and four
//! `f64` per entry.
//!
//! The text form is a directory holding `averages.csv`, `nodes.csv`, `xedges.csv`,
//! `yedges.csv` (columns `i,j,x,y,rho,rhou,rhov,e`) and `snapshot.meta` with
//! `key = value` header lines.

use std::fs;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::grid::{Array2, BoundaryCondition, DofField, GridSpec};
use crate::integrate::{run, NullSink, RunParams};
use crate::physics::{ConservedState, GasParams};
use crate::problems::Problem;
use crate::Axis;

pub const MAGIC: &[u8; 4] = b"AFX2";
pub const VERSION: u32 = 1;
pub const HEADER_BYTES: usize = 80;

/// Physical dof values of one solution state.
#[derive(Clone, Debug, PartialEq)]
pub struct Snapshot {
    pub nx: usize,
    pub ny: usize,
    pub dx: f64,
    pub dy: f64,
    pub x0: f64,
    pub y0: f64,
    pub time: f64,
    pub gamma: f64,
    pub limiter: bool,
    pub averages: Vec<ConservedState>,
    pub nodes: Vec<ConservedState>,
    pub xedges: Vec<ConservedState>,
    pub yedges: Vec<ConservedState>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Averages,
    Nodes,
    XEdges,
    YEdges,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::Averages, Family::Nodes, Family::XEdges, Family::YEdges];

    fn file_name(self) -> &'static str {
        match self {
            Family::Averages => "averages.csv",
            Family::Nodes => "nodes.csv",
            Family::XEdges => "xedges.csv",
            Family::YEdges => "yedges.csv",
        }
    }
}

fn physical(arr: &Array2<ConservedState>) -> Vec<ConservedState> {
    arr.physical().map(|(_, q)| *q).collect()
}

impl Snapshot {
    pub fn from_field(field: &DofField, time: f64, gas: GasParams, limiter: bool) -> Self {
        let s = field.spec;
        Self {
            nx: s.nx,
            ny: s.ny,
            dx: s.dx,
            dy: s.dy,
            x0: s.x0,
            y0: s.y0,
            time,
            gamma: gas.gamma,
            limiter,
            averages: physical(&field.averages),
            nodes: physical(&field.nodes),
            xedges: physical(&field.xedges),
            yedges: physical(&field.yedges),
        }
    }

    /// Rebuilds a field with filled ghosts; snapshots do not record the boundary
    /// treatment, so it has to be supplied.
    pub fn to_field(&self, bc: BoundaryCondition) -> Result<DofField> {
        let spec = GridSpec::new(self.nx, self.ny, self.x0, self.y0, self.dx, self.dy, bc)?;
        let mut field = DofField::allocate(spec);
        for fam in Family::ALL {
            let (ni, _) = self.extents(fam);
            let arr = match fam {
                Family::Averages => &mut field.averages,
                Family::Nodes => &mut field.nodes,
                Family::XEdges => &mut field.xedges,
                Family::YEdges => &mut field.yedges,
            };
            for (k, q) in self.family(fam).iter().enumerate() {
                arr.set((k % ni) as isize, (k / ni) as isize, *q);
            }
        }
        field.fill_ghosts();
        Ok(field)
    }

    pub fn extents(&self, fam: Family) -> (usize, usize) {
        match fam {
            Family::Averages => (self.nx, self.ny),
            Family::Nodes => (self.nx + 1, self.ny + 1),
            Family::XEdges => (self.nx + 1, self.ny),
            Family::YEdges => (self.nx, self.ny + 1),
        }
    }

    pub fn family(&self, fam: Family) -> &[ConservedState] {
        match fam {
            Family::Averages => &self.averages,
            Family::Nodes => &self.nodes,
            Family::XEdges => &self.xedges,
            Family::YEdges => &self.yedges,
        }
    }

    fn family_mut(&mut self, fam: Family) -> &mut Vec<ConservedState> {
        match fam {
            Family::Averages => &mut self.averages,
            Family::Nodes => &mut self.nodes,
            Family::XEdges => &mut self.xedges,
            Family::YEdges => &mut self.yedges,
        }
    }

    pub fn get(&self, fam: Family, i: usize, j: usize) -> ConservedState {
        let (ni, _) = self.extents(fam);
        self.family(fam)[j * ni + i]
    }

    /// Position of entry `(i, j)` of a family.
    pub fn position(&self, fam: Family, i: usize, j: usize) -> (f64, f64) {
        let (hx, hy) = match fam {
            Family::Averages => (0.5, 0.5),
            Family::Nodes => (0.0, 0.0),
            Family::XEdges => (0.0, 0.5),
            Family::YEdges => (0.5, 0.0),
        };
        (self.x0 + (i as f64 + hx) * self.dx, self.y0 + (j as f64 + hy) * self.dy)
    }

    /// Point value at half-index `(a, b)`, i.e. at `(x0 + a dx/2, y0 + b dy/2)`.
    /// `None` at cell centers.
    pub fn point_at_half_index(&self, a: usize, b: usize) -> Option<ConservedState> {
        match (a % 2, b % 2) {
            (0, 0) => Some(self.get(Family::Nodes, a / 2, b / 2)),
            (0, 1) => Some(self.get(Family::XEdges, a / 2, b / 2)),
            (1, 0) => Some(self.get(Family::YEdges, a / 2, b / 2)),
            _ => None,
        }
    }

    fn check(&self) -> Result<()> {
        if self.nx < 3 || self.ny < 3 || !(self.dx > 0.0) || !(self.dy > 0.0) {
            return Err(Error::Format(format!("invalid grid {}x{} (dx = {}, dy = {})", self.nx, self.ny, self.dx, self.dy)));
        }
        for fam in Family::ALL {
            let (a, b) = self.extents(fam);
            if self.family(fam).len() != a * b {
                return Err(Error::Format(format!("{fam:?}: expected {} entries, found {}", a * b, self.family(fam).len())));
            }
        }
        Ok(())
    }

    fn empty(nx: usize, ny: usize) -> Self {
        Self {
            nx,
            ny,
            dx: 0.0,
            dy: 0.0,
            x0: 0.0,
            y0: 0.0,
            time: 0.0,
            gamma: 0.0,
            limiter: false,
            averages: Vec::new(),
            nodes: Vec::new(),
            xedges: Vec::new(),
            yedges: Vec::new(),
        }
    }

    /// Number of bytes of the binary form.
    pub fn binary_size(&self) -> usize {
        let n: usize = Family::ALL.iter().map(|f| self.extents(*f)).map(|(a, b)| a * b).sum();
        HEADER_BYTES + 32 * n
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.binary_size());
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        out.extend_from_slice(&(self.nx as u64).to_le_bytes());
        out.extend_from_slice(&(self.ny as u64).to_le_bytes());
        for v in [self.dx, self.dy, self.x0, self.y0, self.time, self.gamma] {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out.extend_from_slice(&u64::from(self.limiter).to_le_bytes());
        for fam in Family::ALL {
            for q in self.family(fam) {
                for v in q.0 {
                    out.extend_from_slice(&v.to_le_bytes());
                }
            }
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader { bytes, pos: 0 };
        if r.take(4)? != MAGIC {
            return Err(Error::Format("bad magic (not a snapshot file)".into()));
        }
        let version = u32::from_le_bytes(r.take(4)?.try_into().expect("4 bytes"));
        if version != VERSION {
            return Err(Error::Format(format!("unsupported snapshot version {version}")));
        }
        let nx = r.u64()? as usize;
        let ny = r.u64()? as usize;
        if nx > 1 << 24 || ny > 1 << 24 {
            return Err(Error::Format(format!("implausible grid size {nx}x{ny}")));
        }
        let mut s = Self::empty(nx, ny);
        s.dx = r.f64()?;
        s.dy = r.f64()?;
        s.x0 = r.f64()?;
        s.y0 = r.f64()?;
        s.time = r.f64()?;
        s.gamma = r.f64()?;
        s.limiter = match r.u64()? {
            0 => false,
            1 => true,
            v => return Err(Error::Format(format!("bad limiter flag {v}"))),
        };
        if bytes.len() != s.binary_size() {
            return Err(Error::Format(format!(
                "expected {} bytes for a {nx}x{ny} snapshot, found {}",
                s.binary_size(),
                bytes.len()
            )));
        }
        for fam in Family::ALL {
            let (a, b) = s.extents(fam);
            let mut v = Vec::with_capacity(a * b);
            for _ in 0..a * b {
                v.push(ConservedState([r.f64()?, r.f64()?, r.f64()?, r.f64()?]));
            }
            *s.family_mut(fam) = v;
        }
        s.check()?;
        Ok(s)
    }

    pub fn write_binary(&self, path: &Path) -> Result<()> {
        let mut w = BufWriter::new(fs::File::create(path)?);
        w.write_all(&self.to_bytes())?;
        w.flush()?;
        Ok(())
    }

    pub fn read_binary(path: &Path) -> Result<Self> {
        let mut bytes = Vec::new();
        fs::File::open(path)?.read_to_end(&mut bytes)?;
        Self::from_bytes(&bytes)
    }

    /// Writes the text form into directory `dir`, creating it if needed.
    pub fn write_csv(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        let meta = format!(
            "magic = AFX2\nversion = {VERSION}\nnx = {}\nny = {}\ndx = {:?}\ndy = {:?}\nx0 = {:?}\ny0 = {:?}\ntime = {:?}\ngamma = {:?}\nlimiter = {}\n",
            self.nx,
            self.ny,
            self.dx,
            self.dy,
            self.x0,
            self.y0,
            self.time,
            self.gamma,
            u8::from(self.limiter)
        );
        fs::write(dir.join("snapshot.meta"), meta)?;
        for fam in Family::ALL {
            let mut w = csv::Writer::from_path(dir.join(fam.file_name()))?;
            w.write_record(["i", "j", "x", "y", "rho", "rhou", "rhov", "e"])?;
            let (ni, nj) = self.extents(fam);
            for j in 0..nj {
                for i in 0..ni {
                    let (x, y) = self.position(fam, i, j);
                    let q = self.get(fam, i, j);
                    let mut rec = vec![i.to_string(), j.to_string(), format!("{x:?}"), format!("{y:?}")];
                    rec.extend(q.0.iter().map(|v| format!("{v:?}")));
                    w.write_record(&rec)?;
                }
            }
            w.flush()?;
        }
        Ok(())
    }

    pub fn read_csv(dir: &Path) -> Result<Self> {
        let meta = crate::io::parse_key_values(&fs::read_to_string(dir.join("snapshot.meta"))?)?;
        let get = |k: &str| {
            meta.iter()
                .find(|(key, _)| key == k)
                .map(|(_, v)| v.as_str())
                .ok_or_else(|| Error::Format(format!("snapshot.meta lacks {k}")))
        };
        let num = |k: &str| -> Result<f64> { get(k)?.parse().map_err(|_| Error::Format(format!("bad value for {k}"))) };
        let int = |k: &str| -> Result<usize> { get(k)?.parse().map_err(|_| Error::Format(format!("bad value for {k}"))) };
        if get("magic")? != "AFX2" || int("version")? != VERSION as usize {
            return Err(Error::Format("unsupported snapshot metadata".into()));
        }
        let mut s = Self::empty(int("nx")?, int("ny")?);
        s.dx = num("dx")?;
        s.dy = num("dy")?;
        s.x0 = num("x0")?;
        s.y0 = num("y0")?;
        s.time = num("time")?;
        s.gamma = num("gamma")?;
        s.limiter = int("limiter")? != 0;
        for fam in Family::ALL {
            let (ni, nj) = s.extents(fam);
            let mut values = vec![None; ni * nj];
            let mut r = csv::Reader::from_path(dir.join(fam.file_name()))?;
            for rec in r.records() {
                let rec = rec?;
                let field = |k: usize| rec.get(k).ok_or_else(|| Error::Format(format!("{}: short row", fam.file_name())));
                let bad = || Error::Format(format!("{}: malformed row {:?}", fam.file_name(), rec));
                let i: usize = field(0)?.parse().map_err(|_| bad())?;
                let j: usize = field(1)?.parse().map_err(|_| bad())?;
                if i >= ni || j >= nj {
                    return Err(bad());
                }
                let mut q = [0.0; 4];
                for (k, v) in q.iter_mut().enumerate() {
                    *v = field(4 + k)?.parse().map_err(|_| bad())?;
                }
                values[j * ni + i] = Some(ConservedState(q));
            }
            let values: Option<Vec<_>> = values.into_iter().collect();
            *s.family_mut(fam) = values.ok_or_else(|| Error::Format(format!("{}: missing rows", fam.file_name())))?;
        }
        s.check()?;
        Ok(s)
    }

    /// Reads either form: a directory is taken as the text form.
    pub fn read(path: &Path) -> Result<Self> {
        if path.is_dir() {
            Self::read_csv(path)
        } else {
            Self::read_binary(path)
        }
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn take(&mut self, n: usize) -> Result<&[u8]> {
        let end = self.pos + n;
        let s = self
            .bytes
            .get(self.pos..end)
            .ok_or_else(|| Error::Format("snapshot file is truncated".into()))?;
        self.pos = end;
        Ok(s)
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_key_values(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected key = value, got {raw:?}", n + 1)))?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1e-300)
}

/// L1 difference of the point values per conserved component, each point weighted by
/// the coarse cell area `dx dy`.
///
/// The reference must be an integer refinement of `coarse` on the same domain.
pub fn l1_point_error(coarse: &Snapshot, reference: &Snapshot) -> Result<[f64; 4]> {
    let r = reference.nx / coarse.nx;
    let nested = r >= 1
        && reference.nx == r * coarse.nx
        && reference.ny == r * coarse.ny
        && close(coarse.dx, r as f64 * reference.dx)
        && close(coarse.dy, r as f64 * reference.dy)
        && (coarse.x0 - reference.x0).abs() <= 1e-9 * coarse.dx
        && (coarse.y0 - reference.y0).abs() <= 1e-9 * coarse.dy;
    if !nested {
        return Err(Error::Usage(format!(
            "reference grid {}x{} is not a refinement of {}x{} on the same domain",
            reference.nx, reference.ny, coarse.nx, coarse.ny
        )));
    }
    let weight = coarse.dx * coarse.dy;
    let mut err = [0.0; 4];
    for b in 0..=2 * coarse.ny {
        for a in 0..=2 * coarse.nx {
            let Some(q) = coarse.point_at_half_index(a, b) else { continue };
            let q_ref = reference
                .point_at_half_index(a * r, b * r)
                .expect("refined half-index of a point is a point");
            for k in 0..4 {
                err[k] += (q[k] - q_ref[k]).abs() * weight;
            }
        }
    }
    Ok(err)
}

/// L1 errors of a sequence of grids against a common reference, with observed orders.
#[derive(Clone, Debug, PartialEq)]
pub struct ErrorReport {
    pub grids: Vec<usize>,
    pub errors: Vec<[f64; 4]>,
}

impl ErrorReport {
    /// `log2(E_k / E_{k+1})` for consecutive grids (assumed to double).
    pub fn orders(&self) -> Vec<[f64; 4]> {
        self.errors
            .windows(2)
            .zip(self.grids.windows(2))
            .map(|(e, g)| {
                let ratio = (g[1] as f64 / g[0] as f64).log2();
                std::array::from_fn(|k| (e[0][k] / e[1][k]).log2() / ratio)
            })
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,l1_rho,l1_rhou,l1_rhov,l1_e,order_rho,order_rhou,order_rhov,order_e\n");
        let orders = self.orders();
        for (k, (n, e)) in self.grids.iter().zip(&self.errors).enumerate() {
            s.push_str(&format!("{n},{:e},{:e},{:e},{:e}", e[0], e[1], e[2], e[3]));
            match k.checked_sub(1).and_then(|p| orders.get(p)) {
                Some(o) => s.push_str(&format!(",{:.4},{:.4},{:.4},{:.4}\n", o[0], o[1], o[2], o[3])),
                None => s.push_str(",,,,\n"),
            }
        }
        s
    }
}

/// Runs `problem` on square grids `grids` (ascending); the last one is the reference.
pub fn convergence_study(
    problem: &Problem,
    grids: &[usize],
    params: &RunParams,
    mut on_snapshot: impl FnMut(usize, &Snapshot) -> Result<()>,
) -> Result<ErrorReport> {
    if grids.len() < 2 {
        return Err(Error::Usage("a convergence study needs at least two grids".into()));
    }
    if grids.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Usage("grid sizes must be increasing".into()));
    }
    let mut snaps = Vec::with_capacity(grids.len());
    for &n in grids {
        let summary = run(problem, problem.grid(n, n)?, params, &mut NullSink)?;
        let snap = Snapshot::from_field(&summary.field, summary.time, params.gas, params.limiter);
        on_snapshot(n, &snap)?;
        snaps.push(snap);
    }
    let (reference, rest) = snaps.split_last().expect("at least two grids");
    let errors = rest.iter().map(|s| l1_point_error(s, reference)).collect::<Result<Vec<_>>>()?;
    Ok(ErrorReport {
        grids: grids[..grids.len() - 1].to_vec(),
        errors,
    })
}

/// `(distance to center, density)` for every cell average.
pub fn radial_scatter(snap: &Snapshot, center: (f64, f64)) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(snap.nx * snap.ny);
    for j in 0..snap.ny {
        for i in 0..snap.nx {
            let (x, y) = snap.position(Family::Averages, i, j);
            out.push(((x - center.0).hypot(y - center.1), snap.get(Family::Averages, i, j).rho()));
        }
    }
    out
}

/// Point values along the dof line closest to `axis = coordinate`.
#[derive(Clone, Debug, PartialEq)]
pub struct LineCut {
    /// Coordinate of the line actually used.
    pub coordinate: f64,
    /// `(position along the line, value)`.
    pub values: Vec<(f64, ConservedState)>,
}

/// Cut along the line `x = coordinate` (`Axis::X`) or `y = coordinate` (`Axis::Y`).
pub fn line_cut(snap: &Snapshot, axis: Axis, coordinate: f64) -> Result<LineCut> {
    let (origin, h, n, other_origin, other_h, other_n) = match axis {
        Axis::X => (snap.x0, snap.dx, snap.nx, snap.y0, snap.dy, snap.ny),
        Axis::Y => (snap.y0, snap.dy, snap.ny, snap.x0, snap.dx, snap.nx),
    };
    let half = (2.0 * (coordinate - origin) / h).round();
    if !(half >= 0.0 && half <= 2.0 * n as f64) {
        return Err(Error::Usage(format!("{axis} = {coordinate} lies outside the domain")));
    }
    let a = half as usize;
    let mut values = Vec::new();
    for b in 0..=2 * other_n {
        let (ia, ib) = match axis {
            Axis::X => (a, b),
            Axis::Y => (b, a),
        };
        if let Some(q) = snap.point_at_half_index(ia, ib) {
            values.push((other_origin + b as f64 * other_h / 2.0, q));
        }
    }
    Ok(LineCut {
        coordinate: origin + a as f64 * h / 2.0,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;

    fn snap(nx: usize, ny: usize, f: impl Fn(f64, f64) -> f64) -> Snapshot {
        let spec = GridSpec::new(nx, ny, -0.5, 0.25, 1.0 / nx as f64, 2.0 / ny as f64, BoundaryCondition::PERIODIC).unwrap();
        let mut field = DofField::allocate(spec);
        for j in 0..=ny as isize {
            for i in 0..=nx as isize {
                let st = |(x, y): (f64, f64)| ConservedState::new(f(x, y), x, y, 1.0);
                field.nodes.set(i, j, st(spec.node_position(i, j)));
                if (j as usize) < ny {
                    field.xedges.set(i, j, st(spec.xedge_position(i, j)));
                }
                if (i as usize) < nx {
                    field.yedges.set(i, j, st(spec.yedge_position(i, j)));
                }
                if (i as usize) < nx && (j as usize) < ny {
                    field.averages.set(i, j, st(spec.cell_center(i, j)));
                }
            }
        }
        Snapshot::from_field(&field, 0.125, GasParams::default(), true)
    }

    #[test]
    fn binary_round_trip_and_size() {
        let s = snap(3, 3, |x, y| x * y + 0.1);
        assert_eq!(s.binary_size(), 80 + 8 * 4 * (9 + 16 + 12 + 12));
        let bytes = s.to_bytes();
        assert_eq!(bytes.len(), s.binary_size());
        assert_eq!(Snapshot::from_bytes(&bytes).unwrap(), s);
    }

    #[test]
    fn binary_errors() {
        let s = snap(3, 4, |x, _| x);
        let mut bytes = s.to_bytes();
        assert!(matches!(Snapshot::from_bytes(&bytes[..100]), Err(Error::Format(_))));
        bytes[0] = b'X';
        assert!(matches!(Snapshot::from_bytes(&bytes), Err(Error::Format(_))));
        let mut bytes = s.to_bytes();
        bytes[4] = 9;
        assert!(matches!(Snapshot::from_bytes(&bytes), Err(Error::Format(_))));
    }

    #[test]
    fn csv_round_trip() {
        let s = snap(4, 3, |x, y| (x * 3.1).sin() + y / 7.0);
        let dir = tempfile::tempdir().unwrap();
        s.write_csv(dir.path()).unwrap();
        let text = fs::read_to_string(dir.path().join("averages.csv")).unwrap();
        assert_eq!(text.lines().count(), 4 * 3 + 1);
        assert!(text.starts_with("i,j,x,y,rho,rhou,rhov,e"));
        assert_eq!(Snapshot::read(dir.path()).unwrap(), s);
    }

    #[test]
    fn self_error_is_zero_and_offset_error_is_counted() {
        let s = snap(4, 4, |x, y| x + y);
        assert_eq!(l1_point_error(&s, &s).unwrap(), [0.0; 4]);
        let mut shifted = s.clone();
        for fam in [Family::Nodes, Family::XEdges, Family::YEdges] {
            for q in shifted.family_mut(fam) {
                q[0] += 1e-3;
            }
        }
        let e = l1_point_error(&shifted, &s).unwrap();
        // (nx+1)(ny+1) + (nx+1)ny + nx(ny+1) points of weight dx dy
        let count = 25.0 + 20.0 + 20.0;
        assert!((e[0] - 1e-3 * count * s.dx * s.dy).abs() < 1e-15);
        assert_eq!(e[1], 0.0);
    }

    #[test]
    fn nested_error_uses_coincident_points() {
        let f = |x: f64, y: f64| x * x - y;
        let coarse = snap(4, 4, f);
        let fine = snap(16, 16, f);
        let e = l1_point_error(&coarse, &fine).unwrap();
        assert!(e.iter().all(|v| v.abs() < 1e-14), "{e:?}");
        assert!(matches!(l1_point_error(&coarse, &snap(6, 6, f)), Err(Error::Usage(_))));
        assert!(matches!(l1_point_error(&coarse, &snap(8, 12, f)), Err(Error::Usage(_))));
    }

    #[test]
    fn orders_from_exact_ratios() {
        let r = ErrorReport {
            grids: vec![32, 64, 128],
            errors: vec![[8.0; 4], [1.0; 4], [0.125; 4]],
        };
        assert_eq!(r.orders(), vec![[3.0; 4], [3.0; 4]]);
        assert!(r.to_csv().contains("64,1e0,1e0,1e0,1e0,3.0000"));
    }

    #[test]
    fn radial_symmetric_field() {
        let s = snap(8, 8, |x, y| (x * x + (y - 1.25) * (y - 1.25)).sqrt());
        for (r, v) in radial_scatter(&s, (0.0, 1.25)) {
            assert!((r - v).abs() < 1e-12);
        }
    }

    #[test]
    fn line_cut_picks_nearest_column() {
        let s = snap(8, 8, |_, y| y);
        let cut = line_cut(&s, Axis::X, 0.01).unwrap();
        assert!((cut.coordinate - 0.0).abs() < 1e-15);
        assert_eq!(cut.values.len(), 17);
        for (pos, q) in &cut.values {
            assert!((q.rho() - pos).abs() < 1e-14);
        }
        let odd = line_cut(&s, Axis::X, -0.5 + 1.5 / 8.0 + 0.01).unwrap();
        assert!((odd.coordinate - (-0.5 + 1.5 / 8.0)).abs() < 1e-15);
        assert_eq!(odd.values.len(), 9);
        assert!(line_cut(&s, Axis::Y, 10.0).is_err());
    }

    #[test]
    fn quarter_offset_cuts_hit_edge_midpoint_columns() {
        // 200 cells on the unit square: 0.4325 = 86.5 dx, 0.7525 = 150.5 dx.
        for x in [0.4325f64, 0.7525] {
            let half = 2.0 * x * 200.0;
            assert!((half - half.round()).abs() < 1e-9);
            assert_eq!(half.round() as usize % 2, 1);
        }
    }

    #[test]
    fn key_values() {
        let kv = parse_key_values("a = 1\n# c\n\nb=two # trailing\n").unwrap();
        assert_eq!(kv, vec![("a".into(), "1".into()), ("b".into(), "two".into())]);
        assert!(parse_key_values("novalue").is_err());
    }
}
