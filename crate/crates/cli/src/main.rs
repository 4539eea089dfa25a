//! `afx`: command-line driver for the Active Flux Euler solver.

mod config;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use active_flux::integrate::{Progress, Sink};
use active_flux::io::{convergence_study, l1_point_error, line_cut, radial_scatter, Snapshot};
use active_flux::problems::{LaxLiuData, Problem};
use active_flux::{run, Axis, DofField, GasParams, Parallelism, RunParams};
use clap::{Args, Parser, Subcommand};

use config::{ConfigFile, Format, List, Switch};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Solver(#[from] active_flux::Error),
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Solver(e) if e.is_numerical() => 3,
            _ => 2,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "afx", version, about = "Active Flux solver for the 2D Euler equations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one problem and write snapshots.
    Run(RunArgs),
    /// Grid refinement study against the finest grid.
    Convergence(ConvergenceArgs),
    /// L1 point-value error of a snapshot against a refined reference.
    Norms(NormsArgs),
    /// Radial scatter or line cut from a snapshot, as CSV.
    Extract(ExtractArgs),
}

#[derive(Args, Debug)]
struct RunArgs {
    /// gaussian, sod, kh or laxliu<N>.
    #[arg(long)]
    problem: Option<String>,
    #[arg(long)]
    nx: Option<usize>,
    /// Defaults to nx.
    #[arg(long)]
    ny: Option<usize>,
    #[arg(long)]
    cfl: Option<f64>,
    /// Defaults to the problem's end time.
    #[arg(long)]
    t_end: Option<f64>,
    #[arg(long)]
    limiter: Option<Switch>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    format: Option<Format>,
    /// Extra output times, comma separated.
    #[arg(long)]
    snapshot_times: Option<List<f64>>,
    /// Mach number of the Kelvin-Helmholtz setup.
    #[arg(long)]
    mach: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    /// Lax-Liu quadrant data; the bundled table is used otherwise.
    #[arg(long)]
    laxliu_data: Option<PathBuf>,
    #[arg(long)]
    max_steps: Option<usize>,
    /// Use the thread pool (on) or the sequential path (off).
    #[arg(long)]
    parallel: Option<Switch>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct ConvergenceArgs {
    #[arg(long)]
    problem: Option<String>,
    /// Grid sizes, ascending; the last is the reference.
    #[arg(long)]
    grids: Option<List<usize>>,
    #[arg(long)]
    t_end: Option<f64>,
    #[arg(long)]
    cfl: Option<f64>,
    #[arg(long)]
    limiter: Option<Switch>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    parallel: Option<Switch>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct Common {
    /// `key = value` file mirroring the flags; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// No progress output on stderr.
    #[arg(long, short)]
    quiet: bool,
}

#[derive(Args, Debug)]
struct NormsArgs {
    #[arg(long)]
    coarse: PathBuf,
    #[arg(long)]
    reference: PathBuf,
}

#[derive(Clone, Copy, Debug, clap::ValueEnum)]
enum Mode {
    Radial,
    Line,
}

#[derive(Args, Debug)]
struct ExtractArgs {
    /// Binary snapshot file or CSV snapshot directory.
    #[arg(long)]
    snapshot: PathBuf,
    #[arg(long, value_enum)]
    mode: Mode,
    /// Line mode: the coordinate of the cut. Radial mode: the center as `x,y`
    /// (domain center if omitted).
    #[arg(long, allow_hyphen_values = true)]
    at: Option<String>,
    /// Line mode: `x` cuts along x = at, `y` along y = at.
    #[arg(long, value_enum, default_value = "x")]
    axis: AxisArg,
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, clap::ValueEnum)]
enum AxisArg {
    X,
    Y,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Convergence(a) => cmd_convergence(a),
        Command::Norms(a) => cmd_norms(a),
        Command::Extract(a) => cmd_extract(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("afx: error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn io_err(context: impl Into<String>) -> impl FnOnce(std::io::Error) -> CliError {
    let context = context.into();
    move |source| CliError::Io { context, source }
}

fn parallelism(s: Option<Switch>) -> Parallelism {
    match s {
        Some(Switch::Off) => Parallelism::Serial,
        _ => Parallelism::Parallel,
    }
}

const RUN_KEYS: &[&str] = &[
    "problem",
    "nx",
    "ny",
    "cfl",
    "t-end",
    "limiter",
    "out",
    "format",
    "snapshot-times",
    "mach",
    "gamma",
    "laxliu-data",
    "max-steps",
    "parallel",
];

fn cmd_run(a: RunArgs) -> Result<(), CliError> {
    let cfg = ConfigFile::load(a.common.config.as_deref())?;
    cfg.check_keys(RUN_KEYS)?;
    let name: String = cfg.require(a.problem, "problem")?;
    let nx: usize = cfg.require(a.nx, "nx")?;
    let ny = cfg.pick(a.ny, "ny")?.unwrap_or(nx);
    let data = match cfg.pick(a.laxliu_data, "laxliu-data")? {
        Some(path) => LaxLiuData::load(&path)?,
        None => LaxLiuData::builtin(),
    };
    let problem = Problem::from_name(&name, cfg.pick(a.mach, "mach")?, &data)?;
    let gamma = cfg.pick(a.gamma, "gamma")?.unwrap_or(1.4);
    let gas = GasParams::new(gamma).ok_or_else(|| CliError::Usage(format!("gamma must exceed 1, got {gamma}")))?;
    let defaults = RunParams::default();
    let params = RunParams {
        cfl: cfg.pick(a.cfl, "cfl")?.unwrap_or(defaults.cfl),
        t_end: cfg.pick(a.t_end, "t-end")?.unwrap_or(problem.defaults().t_end),
        limiter: cfg.pick(a.limiter, "limiter")?.unwrap_or(Switch::Off) == Switch::On,
        max_steps: cfg.pick(a.max_steps, "max-steps")?.unwrap_or(defaults.max_steps),
        snapshot_times: cfg.pick(a.snapshot_times, "snapshot-times")?.map(|l| l.0).unwrap_or_default(),
        gas,
        parallelism: parallelism(cfg.pick(a.parallel, "parallel")?),
    };
    params.validate()?;
    let out: PathBuf = cfg.pick(a.out, "out")?.unwrap_or_else(|| PathBuf::from("out"));
    let format = cfg.pick(a.format, "format")?.unwrap_or(Format::Bin);
    std::fs::create_dir_all(&out).map_err(io_err(format!("creating {}", out.display())))?;

    let spec = problem.grid(nx, ny)?;
    let mut sink = CliSink {
        out: out.clone(),
        format,
        gas,
        limiter: params.limiter,
        quiet: a.common.quiet,
        last_report: None,
        written: Vec::new(),
    };
    let started = Instant::now();
    let summary = run(&problem, spec, &params, &mut sink)?;
    let x = summary.extremes;
    let report = format!(
        "problem = {}\nnx = {nx}\nny = {ny}\ncfl = {}\nt_end = {}\nlimiter = {}\nsteps = {}\ntime = {}\n\
         min_rho = {}\nmax_rho = {}\nmin_p = {}\nmax_p = {}\nwall_seconds = {:.3}\nsnapshots = {}\n",
        problem.name(),
        params.cfl,
        params.t_end,
        if params.limiter { "on" } else { "off" },
        summary.steps,
        summary.time,
        x.min_rho,
        x.max_rho,
        x.min_p,
        x.max_p,
        started.elapsed().as_secs_f64(),
        sink.written.join(","),
    );
    let path = out.join("run.txt");
    std::fs::write(&path, &report).map_err(io_err(format!("writing {}", path.display())))?;
    print!("{report}");
    Ok(())
}

/// Writes snapshots into the output directory and reports progress on stderr.
struct CliSink {
    out: PathBuf,
    format: Format,
    gas: GasParams,
    limiter: bool,
    quiet: bool,
    last_report: Option<Instant>,
    written: Vec<String>,
}

impl Sink for CliSink {
    fn snapshot(&mut self, field: &DofField, time: f64, _step: usize) -> active_flux::Result<()> {
        let snap = Snapshot::from_field(field, time, self.gas, self.limiter);
        let name = match self.format {
            Format::Bin => {
                let name = format!("t{time:.6}.afx");
                snap.write_binary(&self.out.join(&name))?;
                name
            }
            Format::Csv => {
                let name = format!("t{time:.6}");
                snap.write_csv(&self.out.join(&name))?;
                name
            }
        };
        if !self.quiet {
            eprintln!("wrote {}", self.out.join(&name).display());
        }
        self.written.push(name);
        Ok(())
    }

    fn progress(&mut self, p: &Progress) {
        if self.quiet || self.last_report.is_some_and(|t| t.elapsed() < Duration::from_secs(1)) {
            return;
        }
        self.last_report = Some(Instant::now());
        let c = p.current;
        eprintln!(
            "step {:>6}  t = {:.6}  dt = {:.3e}  rho [{:.4}, {:.4}]  p [{:.4}, {:.4}]",
            p.step, p.time, p.dt, c.min_rho, c.max_rho, c.min_p, c.max_p
        );
    }
}

const CONVERGENCE_KEYS: &[&str] = &["problem", "grids", "t-end", "cfl", "limiter", "out", "parallel"];

fn cmd_convergence(a: ConvergenceArgs) -> Result<(), CliError> {
    let cfg = ConfigFile::load(a.common.config.as_deref())?;
    cfg.check_keys(CONVERGENCE_KEYS)?;
    let name = cfg.pick(a.problem, "problem")?.unwrap_or_else(|| "gaussian".to_string());
    let problem = Problem::from_name(&name, None, &LaxLiuData::builtin())?;
    let grids = cfg.pick(a.grids, "grids")?.map(|l| l.0).unwrap_or_else(|| vec![32, 64, 128, 256]);
    let params = RunParams {
        cfl: cfg.pick(a.cfl, "cfl")?.unwrap_or(RunParams::default().cfl),
        t_end: cfg.pick(a.t_end, "t-end")?.unwrap_or(problem.defaults().t_end),
        limiter: cfg.pick(a.limiter, "limiter")?.unwrap_or(Switch::Off) == Switch::On,
        parallelism: parallelism(cfg.pick(a.parallel, "parallel")?),
        ..RunParams::default()
    };
    params.validate()?;
    let out: PathBuf = cfg.pick(a.out, "out")?.unwrap_or_else(|| PathBuf::from("out"));
    std::fs::create_dir_all(&out).map_err(io_err(format!("creating {}", out.display())))?;

    let quiet = a.common.quiet;
    let report = convergence_study(&problem, &grids, &params, |n, snap| {
        let path = out.join(format!("n{n}.afx"));
        snap.write_binary(&path)?;
        if !quiet {
            eprintln!("{n}x{n} done, wrote {}", path.display());
        }
        Ok(())
    })?;
    let csv = report.to_csv();
    let path = out.join("convergence.csv");
    std::fs::write(&path, &csv).map_err(io_err(format!("writing {}", path.display())))?;
    print!("{csv}");
    Ok(())
}

fn cmd_norms(a: NormsArgs) -> Result<(), CliError> {
    let coarse = read_snapshot(&a.coarse)?;
    let reference = read_snapshot(&a.reference)?;
    let e = l1_point_error(&coarse, &reference)?;
    println!("l1_rho,l1_rhou,l1_rhov,l1_e");
    println!("{:e},{:e},{:e},{:e}", e[0], e[1], e[2], e[3]);
    Ok(())
}

fn read_snapshot(path: &Path) -> Result<Snapshot, CliError> {
    if !path.exists() {
        return Err(CliError::Usage(format!("{} does not exist", path.display())));
    }
    Ok(Snapshot::read(path)?)
}

fn cmd_extract(a: ExtractArgs) -> Result<(), CliError> {
    let snap = read_snapshot(&a.snapshot)?;
    let mut text = String::new();
    match a.mode {
        Mode::Radial => {
            let center = match &a.at {
                Some(s) => {
                    let List(c) = s.parse::<List<f64>>().map_err(CliError::Usage)?;
                    match c[..] {
                        [x, y] => (x, y),
                        _ => return Err(CliError::Usage(format!("--at for radial mode takes x,y, got {s:?}"))),
                    }
                }
                None => (
                    snap.x0 + 0.5 * snap.nx as f64 * snap.dx,
                    snap.y0 + 0.5 * snap.ny as f64 * snap.dy,
                ),
            };
            text.push_str(&format!("# center = {},{}\nr,rho\n", center.0, center.1));
            for (r, rho) in radial_scatter(&snap, center) {
                text.push_str(&format!("{r},{rho}\n"));
            }
        }
        Mode::Line => {
            let at = a.at.as_deref().ok_or_else(|| CliError::Usage("--at is required in line mode".into()))?;
            let at: f64 = at.parse().map_err(|e| CliError::Usage(format!("--at: {e}")))?;
            let axis = match a.axis {
                AxisArg::X => Axis::X,
                AxisArg::Y => Axis::Y,
            };
            let cut = line_cut(&snap, axis, at)?;
            text.push_str(&format!("# {axis} = {}\ns,rho,rhou,rhov,e\n", cut.coordinate));
            for (s, q) in cut.values {
                text.push_str(&format!("{s},{},{},{},{}\n", q[0], q[1], q[2], q[3]));
            }
        }
    }
    match a.out {
        Some(path) => std::fs::write(&path, text).map_err(io_err(format!("writing {}", path.display())))?,
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(io_err("writing to stdout"))?,
    }
    Ok(())
}
