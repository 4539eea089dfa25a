//! SSP-RK3 time stepping with a CFL-limited step.

use crate::average::average_rhs_into;
use crate::error::{DofLocation, Error, Result};
use crate::exec::{zip3_apply, Parallelism};
use crate::fd::point_rhs_into;
use crate::grid::{Array2, DofField};
use crate::physics::{max_wave_speeds, pressure, ConservedState, GasParams};
use crate::problems::Problem;

pub const DEFAULT_CFL: f64 = 0.2;
pub const MAX_CFL: f64 = 0.41;

#[derive(Clone, Debug, PartialEq)]
pub struct RunParams {
    pub cfl: f64,
    pub t_end: f64,
    pub limiter: bool,
    pub max_steps: usize,
    /// Extra output times; `t_end` is always emitted.
    pub snapshot_times: Vec<f64>,
    pub gas: GasParams,
    pub parallelism: Parallelism,
}

impl Default for RunParams {
    fn default() -> Self {
        Self {
            cfl: DEFAULT_CFL,
            t_end: 0.0,
            limiter: false,
            max_steps: 1_000_000,
            snapshot_times: Vec::new(),
            gas: GasParams::default(),
            parallelism: Parallelism::default(),
        }
    }
}

impl RunParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.cfl > 0.0 && self.cfl <= MAX_CFL) {
            return Err(Error::InvalidParams(format!("cfl must lie in (0, {MAX_CFL}], got {}", self.cfl)));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(Error::InvalidParams(format!("t_end must be finite and non-negative, got {}", self.t_end)));
        }
        if let Some(t) = self.snapshot_times.iter().find(|t| !(**t >= 0.0 && t.is_finite())) {
            return Err(Error::InvalidParams(format!("invalid snapshot time {t}")));
        }
        Ok(())
    }
}

/// Largest stable step: `cfl` times the smallest `dx/sx`, `dy/sy` over all physical dofs.
pub fn compute_dt(field: &DofField, cfl: f64, gas: GasParams) -> Result<f64> {
    let (dx, dy) = (field.spec.dx, field.spec.dy);
    let mut min_t = f64::INFINITY;
    let mut visit = |arr: &Array2<ConservedState>, loc: fn(isize, isize) -> DofLocation| -> Result<()> {
        for ((i, j), q) in arr.physical() {
            let (sx, sy) = max_wave_speeds(*q, gas).map_err(|e| Error::domain(loc(i, j), e))?;
            min_t = min_t.min((dx / sx).min(dy / sy));
        }
        Ok(())
    };
    visit(&field.averages, DofLocation::Average)?;
    visit(&field.nodes, DofLocation::Node)?;
    visit(&field.xedges, DofLocation::XEdge)?;
    visit(&field.yedges, DofLocation::YEdge)?;
    let dt = cfl * min_t;
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::NonFiniteStep(dt));
    }
    Ok(dt)
}

/// Shortens `dt` so that a step starting at `t` does not pass `stop`.
pub fn clip_dt(t: f64, dt: f64, stop: f64) -> f64 {
    if t + dt * (1.0 + 1e-12) >= stop {
        stop - t
    } else {
        dt
    }
}

/// One SSP-RK3 stage in Shu-Osher form, written so that a vanishing right-hand side
/// leaves the state bitwise unchanged.
#[inline]
pub fn stage_update(u: &mut f64, base: f64, rhs: f64, dt: f64, stage: usize) {
    *u = match stage {
        0 => *u + dt * rhs,
        1 => base + 0.25 * (*u + dt * rhs - base),
        _ => base + (2.0 / 3.0) * (*u + dt * rhs - base),
    };
}

/// Full right-hand side (averages, nodes, edge midpoints) into `out`. Ghosts of
/// `field` must be filled.
pub fn rhs_into(field: &DofField, limiter: bool, gas: GasParams, par: Parallelism, out: &mut DofField) -> Result<()> {
    average_rhs_into(field, gas, par, &mut out.averages)?;
    point_rhs_into(field, limiter, gas, par, out)
}

/// Reusable SSP-RK3 integrator state.
#[derive(Clone, Debug)]
pub struct Stepper {
    pub limiter: bool,
    pub gas: GasParams,
    pub parallelism: Parallelism,
    /// Number of completed steps; used for error context.
    pub steps: usize,
    base: DofField,
    rhs: DofField,
}

impl Stepper {
    pub fn new(field: &DofField, limiter: bool, gas: GasParams, parallelism: Parallelism) -> Self {
        Self {
            limiter,
            gas,
            parallelism,
            steps: 0,
            base: field.clone(),
            rhs: DofField::allocate(field.spec),
        }
    }

    /// Advances `field` by `dt`. On error `field` holds a partially updated state.
    pub fn step(&mut self, field: &mut DofField, dt: f64) -> Result<()> {
        if self.base.spec != field.spec {
            *self = Self::new(field, self.limiter, self.gas, self.parallelism);
        }
        field.fill_ghosts();
        self.base.clone_from(field);
        for stage in 0..3 {
            rhs_into(field, self.limiter, self.gas, self.parallelism, &mut self.rhs).map_err(|e| Error::Step {
                step: self.steps + 1,
                stage: stage + 1,
                source: Box::new(e),
            })?;
            combine(field, &self.base, &self.rhs, dt, stage, self.parallelism);
            field.fill_ghosts();
        }
        self.steps += 1;
        Ok(())
    }
}

fn combine(field: &mut DofField, base: &DofField, rhs: &DofField, dt: f64, stage: usize, par: Parallelism) {
    for ((u, b), r) in field.storage_mut().into_iter().zip(base.storage()).zip(rhs.storage()) {
        zip3_apply(par, u, b, r, |u, b, r| {
            for k in 0..4 {
                stage_update(&mut u[k], b[k], r[k], dt, stage);
            }
        });
    }
}

/// One SSP-RK3 step with a throwaway [`Stepper`].
pub fn rk3_step(field: &mut DofField, dt: f64, limiter: bool, gas: GasParams, par: Parallelism) -> Result<()> {
    Stepper::new(field, limiter, gas, par).step(field, dt)
}

/// Extremes of density and pressure.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Extremes {
    pub min_rho: f64,
    pub max_rho: f64,
    pub min_p: f64,
    pub max_p: f64,
}

impl Default for Extremes {
    fn default() -> Self {
        Self {
            min_rho: f64::INFINITY,
            max_rho: f64::NEG_INFINITY,
            min_p: f64::INFINITY,
            max_p: f64::NEG_INFINITY,
        }
    }
}

impl Extremes {
    /// Over all physical averages and point values.
    pub fn of(field: &DofField, gas: GasParams) -> Self {
        let mut e = Self::default();
        for arr in [&field.averages, &field.nodes, &field.xedges, &field.yedges] {
            for (_, q) in arr.physical() {
                e.include(q.rho(), pressure(*q, gas).unwrap_or(f64::NAN));
            }
        }
        e
    }

    fn include(&mut self, rho: f64, p: f64) {
        // NaN propagates into the extremes so that blow-up is visible.
        let lo = |a: f64, b: f64| if a.is_nan() || b.is_nan() { f64::NAN } else { a.min(b) };
        let hi = |a: f64, b: f64| if a.is_nan() || b.is_nan() { f64::NAN } else { a.max(b) };
        self.min_rho = lo(self.min_rho, rho);
        self.max_rho = hi(self.max_rho, rho);
        self.min_p = lo(self.min_p, p);
        self.max_p = hi(self.max_p, p);
    }

    pub fn merge(&mut self, other: Extremes) {
        self.include(other.min_rho, other.min_p);
        self.include(other.max_rho, other.max_p);
    }

    pub fn is_physical(&self) -> bool {
        self.min_rho > 0.0 && self.min_p > 0.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Progress {
    pub step: usize,
    pub time: f64,
    pub dt: f64,
    pub current: Extremes,
}

/// Receives output during a [`run`].
pub trait Sink {
    fn snapshot(&mut self, _field: &DofField, _time: f64, _step: usize) -> Result<()> {
        Ok(())
    }

    fn progress(&mut self, _progress: &Progress) {}
}

/// Discards everything.
pub struct NullSink;

impl Sink for NullSink {}

#[derive(Clone, Debug)]
pub struct RunSummary {
    pub field: DofField,
    pub time: f64,
    pub steps: usize,
    /// Extremes over all steps, including the initial data.
    pub extremes: Extremes,
}

/// Initializes `problem` on `spec` and integrates to `params.t_end`.
pub fn run(problem: &Problem, spec: crate::GridSpec, params: &RunParams, sink: &mut dyn Sink) -> Result<RunSummary> {
    params.validate()?;
    let field = problem.initialize(spec, params.gas)?;
    run_from(field, params, sink)
}

/// Integrates an already initialized field from `t = 0`.
pub fn run_from(mut field: DofField, params: &RunParams, sink: &mut dyn Sink) -> Result<RunSummary> {
    params.validate()?;
    let gas = params.gas;
    field.fill_ghosts();
    let mut stops: Vec<f64> = params
        .snapshot_times
        .iter()
        .copied()
        .filter(|t| *t > 0.0 && *t < params.t_end)
        .collect();
    stops.push(params.t_end);
    stops.sort_by(f64::total_cmp);
    stops.dedup();

    let mut extremes = Extremes::of(&field, gas);
    if params.snapshot_times.contains(&0.0) || params.t_end == 0.0 {
        sink.snapshot(&field, 0.0, 0)?;
    }

    let mut stepper = Stepper::new(&field, params.limiter, gas, params.parallelism);
    let mut t = 0.0;
    for stop in stops {
        while t < stop {
            if stepper.steps >= params.max_steps {
                return Err(Error::MaxStepsExceeded(params.max_steps));
            }
            let dt = compute_dt(&field, params.cfl, gas).map_err(|e| Error::Step {
                step: stepper.steps + 1,
                stage: 0,
                source: Box::new(e),
            })?;
            let dt = clip_dt(t, dt, stop);
            stepper.step(&mut field, dt)?;
            t = if t + dt >= stop { stop } else { t + dt };
            let current = Extremes::of(&field, gas);
            extremes.merge(current);
            sink.progress(&Progress {
                step: stepper.steps,
                time: t,
                dt,
                current,
            });
            if !(current.min_rho.is_finite() && current.min_p.is_finite()) {
                return Err(Error::Step {
                    step: stepper.steps,
                    stage: 3,
                    source: Box::new(Error::NonFiniteStep(dt)),
                });
            }
        }
        if stop > 0.0 {
            sink.snapshot(&field, t, stepper.steps)?;
        }
    }
    Ok(RunSummary {
        field,
        time: t,
        steps: stepper.steps,
        extremes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{BoundaryCondition, GridSpec};
    use crate::PrimitiveState;

    fn uniform(q: ConservedState, dx: f64) -> DofField {
        let spec = GridSpec::new(4, 4, 0.0, 0.0, dx, dx, BoundaryCondition::PERIODIC).unwrap();
        let mut f = DofField::allocate(spec);
        for arr in f.storage_mut() {
            arr.fill(q);
        }
        f
    }

    #[test]
    fn rest_gas_dt() {
        let gas = GasParams::default();
        let q = PrimitiveState::new(1.0, 0.0, 0.0, 1.0).to_conserved(gas);
        let f = uniform(q, 1.0);
        let dt = compute_dt(&f, 0.41, gas).unwrap();
        assert!((dt - 0.41 / 1.4f64.sqrt()).abs() < 1e-15);
        let dt2 = compute_dt(&f, 0.2, gas).unwrap();
        assert!((compute_dt(&f, 0.4, gas).unwrap() - 2.0 * dt2).abs() < 1e-15);
    }

    #[test]
    fn clipping() {
        let t_end = 2.0;
        let dt = clip_dt(0.99 * t_end, 0.05 * t_end, t_end);
        assert!((dt - 0.01 * t_end).abs() < 1e-14);
        assert_eq!(clip_dt(0.0, 0.1, 1.0), 0.1);
    }

    #[test]
    fn scalar_decay_stage_recursion() {
        let (dt, mut q) = (0.1, 1.0f64);
        let base = q;
        for stage in 0..3 {
            let rhs = -q;
            stage_update(&mut q, base, rhs, dt, stage);
        }
        let h = dt;
        assert!((q - (1.0 - h + h * h / 2.0 - h * h * h / 6.0)).abs() < 1e-15);
        assert!((q - 0.904_833_333_333_333_3).abs() < 1e-15);
    }

    #[test]
    fn zero_rhs_leaves_field_bitwise() {
        let gas = GasParams::default();
        let q = PrimitiveState::new(1.3, 0.1, -0.2, 0.7).to_conserved(gas);
        let mut f = uniform(q, 0.1);
        f.averages.set(1, 2, ConservedState::new(0.1, 0.2, 0.3, 0.7));
        let before = f.clone();
        let zero = DofField::allocate(f.spec);
        for stage in 0..3 {
            combine(&mut f, &before, &zero, 0.37, stage, Parallelism::Serial);
        }
        assert_eq!(f, before);
    }

    #[test]
    fn uniform_flow_stays_uniform() {
        let gas = GasParams::default();
        let q = PrimitiveState::new(1.3, 0.4, -0.2, 0.7).to_conserved(gas);
        let mut f = uniform(q, 0.1);
        rk3_step(&mut f, 0.01, true, gas, Parallelism::Serial).unwrap();
        for s in f.storage() {
            for v in s {
                assert!((0..4).all(|k| (v[k] - q[k]).abs() < 1e-14));
            }
        }
    }

    #[test]
    fn invalid_params() {
        let p = RunParams { cfl: 0.5, ..RunParams::default() };
        assert!(p.validate().is_err());
        let p = RunParams { t_end: -1.0, ..RunParams::default() };
        assert!(p.validate().is_err());
    }

    #[test]
    fn zero_end_time_emits_once() {
        struct Count(usize);
        impl Sink for Count {
            fn snapshot(&mut self, _: &DofField, time: f64, step: usize) -> Result<()> {
                assert_eq!((time, step), (0.0, 0));
                self.0 += 1;
                Ok(())
            }
        }
        let gas = GasParams::default();
        let q = PrimitiveState::new(1.0, 0.0, 0.0, 1.0).to_conserved(gas);
        let mut sink = Count(0);
        let s = run_from(uniform(q, 0.1), &RunParams::default(), &mut sink).unwrap();
        assert_eq!(sink.0, 1);
        assert_eq!(s.steps, 0);
    }

    #[test]
    fn step_limit() {
        let gas = GasParams::default();
        let q = PrimitiveState::new(1.0, 0.0, 0.0, 1.0).to_conserved(gas);
        let params = RunParams { t_end: 10.0, max_steps: 2, ..RunParams::default() };
        let err = run_from(uniform(q, 0.1), &params, &mut NullSink).unwrap_err();
        assert!(matches!(err, Error::MaxStepsExceeded(2)));
        assert!(err.is_numerical());
    }

    #[test]
    fn snapshots_land_on_requested_times() {
        struct Times(Vec<f64>);
        impl Sink for Times {
            fn snapshot(&mut self, _: &DofField, time: f64, _: usize) -> Result<()> {
                self.0.push(time);
                Ok(())
            }
        }
        let gas = GasParams::default();
        let q = PrimitiveState::new(1.0, 0.1, 0.0, 1.0).to_conserved(gas);
        let params = RunParams {
            t_end: 0.1,
            snapshot_times: vec![0.0, 0.03, 0.1],
            ..RunParams::default()
        };
        let mut sink = Times(Vec::new());
        let s = run_from(uniform(q, 0.1), &params, &mut sink).unwrap();
        assert_eq!(sink.0, vec![0.0, 0.03, 0.1]);
        assert_eq!(s.time, 0.1);
    }
}
