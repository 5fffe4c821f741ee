//! Method-of-lines solver for `u_t + uⁿ u_x + [(u_x)^m]_xx = 0` on a
//! periodic interval, with classical RK4 in time.

mod operator;
mod peak;

use alloc::vec::Vec;

pub use self::operator::{NonlinearForm, SpatialOperator};
pub use self::peak::{mollify, track_peak, Mollified};

use crate::diagnostics::{self, DiagnosticsRecord};
use crate::math::{floor, powi};
use crate::model::HierarchyParams;
use crate::{Error, Result};

/// Smallest supported number of grid points.
pub const MIN_POINTS: usize = 16;

/// A run is aborted once `max|u|` exceeds this multiple of its initial value.
pub const BLOW_UP_FACTOR: f64 = 1e3;

/// Coefficient `C` in `dt ≤ C h³ / max(1, |u|ⁿ, m|u_x|^(m−1))`, calibrated on
/// the dealiased spectral KdV soliton run. RK4 stays stable up to roughly
/// 0.3 with dealiasing and 0.09 without; the default leaves headroom for both.
pub const DEFAULT_DT_COEFFICIENT: f64 = 0.08;

/// Uniform periodic mesh `x_j = j h`, `j = 0..N`, `h = L/N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    length: f64,
    npoints: usize,
    spacing: f64,
}

impl Grid {
    pub fn new(length: f64, npoints: usize) -> Result<Self> {
        Self::validate(length, npoints)?;
        Ok(Self {
            length,
            npoints,
            spacing: length / npoints as f64,
        })
    }

    /// Builds the grid from its spacing, keeping `h` bit-exact (used when a
    /// grid is reconstructed from sampled coordinates).
    pub fn from_spacing(spacing: f64, npoints: usize) -> Result<Self> {
        let length = spacing * npoints as f64;
        Self::validate(length, npoints)?;
        Ok(Self {
            length,
            npoints,
            spacing,
        })
    }

    fn validate(length: f64, npoints: usize) -> Result<()> {
        if !(length > 0.0) || !length.is_finite() {
            return Err(Error::InvalidGrid("length must be positive and finite"));
        }
        if npoints < MIN_POINTS {
            return Err(Error::InvalidGrid("need at least 16 points"));
        }
        if !npoints.is_multiple_of(2) {
            return Err(Error::InvalidGrid("number of points must be even"));
        }
        Ok(())
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn npoints(&self) -> usize {
        self.npoints
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn x(&self, j: usize) -> f64 {
        j as f64 * self.spacing
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.npoints).map(|j| self.x(j)).collect()
    }

    /// Samples `f` at every grid point.
    pub fn sample<F: FnMut(f64) -> f64>(&self, mut f: F) -> Vec<f64> {
        (0..self.npoints).map(|j| f(self.x(j))).collect()
    }

    /// Signed minimal-image offset `x − center` in `[−L/2, L/2)`.
    pub fn periodic_offset(&self, x: f64, center: f64) -> f64 {
        let d = x - center + 0.5 * self.length;
        d - self.length * floor(d / self.length) - 0.5 * self.length
    }

    /// Reduces `x` into `[0, L)`.
    pub fn wrap(&self, x: f64) -> f64 {
        let r = x - self.length * floor(x / self.length);
        if r >= self.length {
            0.0
        } else {
            r
        }
    }
}

/// Field samples `u(x_j, t)` at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct State {
    pub time: f64,
    pub values: Vec<f64>,
}

impl State {
    pub fn new(time: f64, values: Vec<f64>) -> Self {
        Self { time, values }
    }

    pub fn zeros(grid: &Grid) -> Self {
        Self::new(0.0, alloc::vec![0.0; grid.npoints()])
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |a, v| a.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    fn check(&self, grid: &Grid) -> Result<()> {
        if self.values.len() != grid.npoints() {
            return Err(Error::LengthMismatch {
                expected: grid.npoints(),
                got: self.values.len(),
            });
        }
        if !self.is_finite() {
            return Err(Error::NonFinite { time: self.time });
        }
        Ok(())
    }
}

/// Spatial discretization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    FourierCollocation,
    CenteredFd4,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub dt: f64,
    pub scheme: Scheme,
    /// Two-thirds-rule truncation of the right-hand side (spectral only).
    /// [`run`] also projects the initial state onto the kept modes.
    pub dealias: bool,
    /// Hyperdiffusion coefficient `ν` in `− ν ∂⁴u`.
    pub smoothing: f64,
    /// Use `|u_x|^(m−1) u_x` instead of `(u_x)^m` for even `m`.
    pub signed_power: bool,
    pub form: NonlinearForm,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            dt: 1e-4,
            scheme: Scheme::FourierCollocation,
            dealias: true,
            smoothing: 0.0,
            signed_power: false,
            form: NonlinearForm::Primitive,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.dt == 0.0 || !self.dt.is_finite() {
            return Err(Error::Domain {
                name: "dt",
                value: self.dt,
                reason: "time step must be non-zero and finite",
            });
        }
        if !(self.smoothing >= 0.0) || !self.smoothing.is_finite() {
            return Err(Error::Domain {
                name: "smoothing",
                value: self.smoothing,
                reason: "hyperdiffusion coefficient must be non-negative",
            });
        }
        Ok(())
    }
}

/// Time-step guidance `C h³ / max(1, |u|ⁿ, m |u_x|^(m−1))` for the given state.
pub fn stable_dt(state: &State, grid: &Grid, p: HierarchyParams, scheme: Scheme, coefficient: f64) -> Result<f64> {
    state.check(grid)?;
    let ux = derivative(&state.values, 1, grid, scheme)?;
    let umax = state.max_abs();
    let uxmax = ux.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let stiffness = 1.0f64
        .max(powi(umax, p.n()))
        .max(f64::from(p.m()) * powi(uxmax, p.m() - 1));
    let h = grid.spacing();
    Ok(coefficient * h * h * h / stiffness)
}

/// Periodic derivative of order 1 or 2.
pub fn derivative(values: &[f64], order: u32, grid: &Grid, scheme: Scheme) -> Result<Vec<f64>> {
    SpatialOperator::new(*grid, scheme)?.derivative(values, order)
}

/// Right-hand side `u_t` of the semi-discrete system.
pub fn rhs(state: &State, p: HierarchyParams, grid: &Grid, config: &SolverConfig) -> Result<Vec<f64>> {
    state.check(grid)?;
    SpatialOperator::new(*grid, config.scheme)?.rhs(&state.values, p, config)
}

/// One classical RK4 step of size `config.dt` (negative steps integrate
/// backwards).
pub fn step_rk4(state: &State, p: HierarchyParams, grid: &Grid, config: &SolverConfig) -> Result<State> {
    config.validate()?;
    state.check(grid)?;
    let mut op = SpatialOperator::new(*grid, config.scheme)?;
    rk4(&mut op, state, p, config, config.dt)
}

fn axpy(base: &[f64], scale: f64, dir: &[f64]) -> Vec<f64> {
    base.iter().zip(dir).map(|(&b, &d)| b + scale * d).collect()
}

fn stage(op: &mut SpatialOperator, u: &[f64], p: HierarchyParams, config: &SolverConfig, time: f64) -> Result<Vec<f64>> {
    let k = op.rhs(u, p, config)?;
    if k.iter().all(|v| v.is_finite()) {
        Ok(k)
    } else {
        Err(Error::NonFinite { time })
    }
}

pub(crate) fn rk4(op: &mut SpatialOperator, state: &State, p: HierarchyParams, config: &SolverConfig, dt: f64) -> Result<State> {
    let t = state.time;
    let u = &state.values;
    let k1 = stage(op, u, p, config, t)?;
    let k2 = stage(op, &axpy(u, 0.5 * dt, &k1), p, config, t + 0.5 * dt)?;
    let k3 = stage(op, &axpy(u, 0.5 * dt, &k2), p, config, t + 0.5 * dt)?;
    let k4 = stage(op, &axpy(u, dt, &k3), p, config, t + dt)?;
    let sixth = dt / 6.0;
    let values: Vec<f64> = u
        .iter()
        .enumerate()
        .map(|(j, &uj)| uj + sixth * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]))
        .collect();
    let next = State::new(t + dt, values);
    if !next.is_finite() {
        return Err(Error::NonFinite { time: next.time });
    }
    Ok(next)
}

/// Receives read-only snapshots during [`run`].
pub trait Observer {
    fn observe(&mut self, state: &State, grid: &Grid);
}

impl<F: FnMut(&State, &Grid)> Observer for F {
    fn observe(&mut self, state: &State, grid: &Grid) {
        self(state, grid)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    pub t_end: f64,
    /// Record diagnostics every this many steps (and always at both ends).
    pub sample_every: usize,
    /// Call observers every this many steps (and always at both ends).
    pub observe_every: usize,
    /// Orders `k` for which `I_k` is recorded.
    pub ik_orders: Vec<u32>,
}

impl RunOptions {
    pub fn new(t_end: f64) -> Self {
        Self {
            t_end,
            sample_every: 1,
            observe_every: usize::MAX,
            ik_orders: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RunStatus {
    Completed,
    /// The run stopped early; the record and state are those of the last
    /// good step.
    BlowUp { time: f64, reason: BlowUpReason },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlowUpReason {
    NonFinite,
    AmplitudeGrowth,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub record: DiagnosticsRecord,
    pub final_state: State,
    pub status: RunStatus,
    pub steps: usize,
}

/// Number of uniform steps used to cover `span` with steps no longer than `dt`.
pub fn step_count(span: f64, dt: f64) -> usize {
    let raw = span / dt;
    let whole = crate::math::round(raw);
    if (raw - whole).abs() <= 1e-9 * raw.max(1.0) {
        (whole as usize).max(1)
    } else {
        (floor(raw) as usize + 1).max(1)
    }
}

/// Integrates from `initial.time` to `options.t_end`.
///
/// The interval is covered by uniform steps of size `≤ config.dt` so the last
/// step lands exactly on `t_end`. Diagnostics are sampled into the returned
/// record; observers see the state at their cadence. On blow-up the run stops
/// and returns what it has, flagged in [`RunOutcome::status`].
pub fn run(
    initial: &State,
    p: HierarchyParams,
    grid: &Grid,
    config: &SolverConfig,
    options: &RunOptions,
    observers: &mut [&mut dyn Observer],
) -> Result<RunOutcome> {
    config.validate()?;
    if config.dt < 0.0 {
        return Err(Error::Domain {
            name: "dt",
            value: config.dt,
            reason: "run needs a positive time step",
        });
    }
    initial.check(grid)?;
    if !(options.t_end > initial.time) {
        return Err(Error::Domain {
            name: "t_end",
            value: options.t_end,
            reason: "must be later than the initial time",
        });
    }
    for &k in &options.ik_orders {
        if k == 0 {
            return Err(Error::Domain {
                name: "k",
                value: 0.0,
                reason: "I_k needs k >= 1",
            });
        }
    }
    let mut op = SpatialOperator::new(*grid, config.scheme)?;
    let t0 = initial.time;
    let span = options.t_end - t0;
    let steps = step_count(span, config.dt);
    let dt = span / steps as f64;
    let sample_every = options.sample_every.max(1);
    let observe_every = options.observe_every.max(1);

    let mut state = initial.clone();
    if config.dealias {
        state.values = op.project(&state.values)?;
    }
    let mut record = DiagnosticsRecord::new(&options.ik_orders);
    record.push(&mut op, &state, p)?;
    for obs in observers.iter_mut() {
        obs.observe(&state, grid);
    }

    let limit = BLOW_UP_FACTOR * state.max_abs();
    let mut status = RunStatus::Completed;
    let mut taken = 0;
    for step in 1..=steps {
        let next = match rk4(&mut op, &state, p, config, dt) {
            Ok(s) => s,
            Err(Error::NonFinite { time }) => {
                status = RunStatus::BlowUp {
                    time,
                    reason: BlowUpReason::NonFinite,
                };
                break;
            }
            Err(e) => return Err(e),
        };
        if limit > 0.0 && next.max_abs() > limit {
            status = RunStatus::BlowUp {
                time: next.time,
                reason: BlowUpReason::AmplitudeGrowth,
            };
            break;
        }
        state = next;
        // Pin the clock to the uniform lattice instead of accumulating dt.
        state.time = if step == steps { options.t_end } else { t0 + step as f64 * dt };
        taken = step;
        let last = step == steps;
        if last || step % sample_every == 0 {
            record.push(&mut op, &state, p)?;
        }
        if last || step % observe_every == 0 {
            for obs in observers.iter_mut() {
                obs.observe(&state, grid);
            }
        }
    }
    if status != RunStatus::Completed && record.times.last() != Some(&state.time) {
        record.push(&mut op, &state, p)?;
    }
    Ok(RunOutcome {
        record,
        final_state: state,
        status,
        steps: taken,
    })
}

/// Samples diagnostics for a state using an existing operator.
pub(crate) fn energy_with(op: &mut SpatialOperator, state: &State, p: HierarchyParams) -> Result<f64> {
    let ux = op.derivative(&state.values, 1)?;
    Ok(diagnostics::energy_from_slope(&state.values, &ux, op.grid().spacing(), p))
}
