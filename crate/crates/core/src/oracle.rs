//! Brute-force light transport on a discretized screen.
//!
//! Each screen sample `(Y, T)` is reached by exactly one straight ray from
//! the projector. That ray crosses the occluder plane `x = l` at height
//! `l Y / L`, a distance `d(Y) = (L - l) / L * hypot(L, Y)` before the
//! screen, so the light arriving at `(Y, T)` passed the occluder plane at
//! the retarded time `T - d(Y) / c`. The sample is dark when the occluder
//! was within `eps` of the crossing point at that moment. Nothing here uses
//! the closed-form kinematics; only the scene geometry is shared.

use crate::exec::{map_range, Execution};
use crate::scene::{Scene, Trajectory};
use serde::{Deserialize, Serialize};
use std::io::{self, Write};
use thiserror::Error;

/// When the projector's light exists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EmissionConvention {
    /// No light is emitted before `t = 0`; a screen point sees nothing until
    /// the first wavefront arrives at `hypot(L, Y) / c`.
    #[default]
    #[serde(rename = "projector-on")]
    ProjectorOnAtZero,
    /// The beam has always been on.
    SteadyBeam,
}

impl EmissionConvention {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::ProjectorOnAtZero => "projector-on",
            Self::SteadyBeam => "steady-beam",
        }
    }
}

impl std::fmt::Display for EmissionConvention {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for EmissionConvention {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "projector-on" => Ok(Self::ProjectorOnAtZero),
            "steady-beam" => Ok(Self::SteadyBeam),
            other => Err(format!(
                "unknown convention `{other}` (expected projector-on or steady-beam)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum SampleState {
    Lit,
    Dark,
    NoLightYet,
}

impl SampleState {
    pub fn as_str(self) -> &'static str {
        match self {
            SampleState::Lit => "lit",
            SampleState::Dark => "dark",
            SampleState::NoLightYet => "no-light-yet",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("grid parameter {name} must be a positive finite number (got {value})")]
    InvalidGrid { name: &'static str, value: f64 },
    #[error("grid of {samples} samples exceeds the budget of {budget}")]
    GridBudget { samples: u128, budget: usize },
    #[error("timeline is empty")]
    EmptyTimeline,
    #[error("timeline contains no dark sample")]
    NoShadow,
    #[error(
        "no dark sample at T = {time} after shadow onset; eps = {eps} is too small for the grid"
    )]
    WorldlineGap { time: f64, eps: f64 },
}

/// Screen state for the single sample `(screen_y, time)`.
pub fn classify_sample(
    scene: &Scene,
    traj: &Trajectory,
    convention: EmissionConvention,
    screen_y: f64,
    time: f64,
    eps: f64,
) -> SampleState {
    let screen_x = scene.screen_distance;
    let plane_x = scene.occluder_distance;
    let c = scene.light_speed;
    let path = screen_x.hypot(screen_y);
    if convention == EmissionConvention::ProjectorOnAtZero && time < path / c {
        return SampleState::NoLightYet;
    }
    let crossing_y = plane_x * screen_y / screen_x;
    let to_screen = (screen_x - plane_x) / screen_x * path;
    let crossing_time = time - to_screen / c;
    match traj.position(crossing_time) {
        Some(y) if (y - crossing_y).abs() <= eps => SampleState::Dark,
        _ => SampleState::Lit,
    }
}

/// Sample spacings and occluder matching tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub dy: f64,
    pub dt: f64,
    pub eps: f64,
}

/// Number of screen intervals across the shadow's range in the default grid.
pub const DEFAULT_Y_DIVISIONS: f64 = 2000.0;
/// Number of time steps across the motion in the default grid.
pub const DEFAULT_T_DIVISIONS: f64 = 4000.0;
/// Default cap on `rows * columns`.
pub const DEFAULT_SAMPLE_BUDGET: usize = 50_000_000;

impl GridSpec {
    pub fn new(dy: f64, dt: f64, eps: f64) -> Result<Self, OracleError> {
        for (name, value) in [("dy", dy), ("dt", dt), ("eps", eps)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(OracleError::InvalidGrid { name, value });
            }
        }
        Ok(GridSpec { dy, dt, eps })
    }

    /// `eps` wide enough that neither a time step nor a screen step can skip
    /// over the occluder: `max(v dt, dy l / L)`.
    pub fn default_eps(scene: &Scene, traj: &Trajectory, dy: f64, dt: f64) -> f64 {
        (traj.max_speed() * dt).max(dy / scene.magnification())
    }

    /// Default grid with optional overrides for each spacing.
    pub fn resolve(
        scene: &Scene,
        traj: &Trajectory,
        convention: EmissionConvention,
        dy: Option<f64>,
        dt: Option<f64>,
        eps: Option<f64>,
    ) -> Result<Self, OracleError> {
        let (lo, hi) = screen_extent(scene, traj);
        let dy = dy.unwrap_or_else(|| {
            let span = hi - lo;
            if span > 0.0 {
                span / DEFAULT_Y_DIVISIONS
            } else {
                scene.displacement * scene.magnification() / DEFAULT_Y_DIVISIONS
            }
        });
        let dt =
            dt.unwrap_or_else(|| last_event_time(scene, traj, convention) / DEFAULT_T_DIVISIONS);
        let eps = match eps {
            Some(eps) => eps,
            None => Self::default_eps(scene, traj, dy, dt),
        };
        GridSpec::new(dy, dt, eps)
    }
}

/// Screen heights reached by the occluder's shadow.
fn screen_extent(scene: &Scene, traj: &Trajectory) -> (f64, f64) {
    let (lo, hi) = traj.y_extent();
    (scene.magnification() * lo, scene.magnification() * hi)
}

/// Latest time at which the screen can still change: the occluder's final
/// position imaged on the screen, or the wavefront reaching the top.
fn last_event_time(scene: &Scene, traj: &Trajectory, convention: EmissionConvention) -> f64 {
    let (lo, hi) = screen_extent(scene, traj);
    let ymax = lo.abs().max(hi.abs());
    let path = scene.screen_distance.hypot(ymax);
    let to_screen =
        (scene.screen_distance - scene.occluder_distance) / scene.screen_distance * path;
    let shadow_done = traj.stop_time() + to_screen / scene.light_speed;
    match convention {
        EmissionConvention::SteadyBeam => shadow_done,
        EmissionConvention::ProjectorOnAtZero => shadow_done.max(path / scene.light_speed),
    }
}

/// Lit/dark state of every `(Y, T)` sample, stored T-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ScreenTimeline {
    pub grid: GridSpec,
    pub convention: EmissionConvention,
    y_values: Vec<f64>,
    t_values: Vec<f64>,
    states: Vec<SampleState>,
}

impl ScreenTimeline {
    pub fn y_values(&self) -> &[f64] {
        &self.y_values
    }

    pub fn t_values(&self) -> &[f64] {
        &self.t_values
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn state(&self, t_index: usize, y_index: usize) -> SampleState {
        self.states[t_index * self.y_values.len() + y_index]
    }

    pub fn row(&self, t_index: usize) -> &[SampleState] {
        let n = self.y_values.len();
        &self.states[t_index * n..(t_index + 1) * n]
    }

    /// Index of the screen column closest to `y`.
    pub fn nearest_column(&self, y: f64) -> Option<usize> {
        (0..self.y_values.len()).min_by(|&a, &b| {
            let da = (self.y_values[a] - y).abs();
            let db = (self.y_values[b] - y).abs();
            da.total_cmp(&db)
        })
    }

    fn first_time_where(&self, y: f64, pred: impl Fn(SampleState) -> bool) -> Option<f64> {
        let col = self.nearest_column(y)?;
        (0..self.t_values.len())
            .find(|&i| pred(self.state(i, col)))
            .map(|i| self.t_values[i])
    }

    /// Earliest sampled time at which the column nearest `y` is dark.
    pub fn first_dark_time(&self, y: f64) -> Option<f64> {
        self.first_time_where(y, |s| s == SampleState::Dark)
    }

    /// Earliest sampled time at which any light (or its absence by
    /// blocking) can be observed in the column nearest `y`.
    pub fn first_light_time(&self, y: f64) -> Option<f64> {
        self.first_time_where(y, |s| s != SampleState::NoLightYet)
    }

    pub fn count(&self, state: SampleState) -> usize {
        self.states.iter().filter(|&&s| s == state).count()
    }

    /// CSV with columns `Y,T,state`, T-major then Y.
    pub fn write_csv<W: Write>(&self, out: W) -> io::Result<()> {
        let mut out = io::BufWriter::new(out);
        let mut ybuf = ryu::Buffer::new();
        let mut tbuf = ryu::Buffer::new();
        writeln!(out, "Y,T,state")?;
        for (i, &t) in self.t_values.iter().enumerate() {
            let t = tbuf.format(t);
            for (y, state) in self.y_values.iter().zip(self.row(i)) {
                writeln!(out, "{},{},{}", ybuf.format(*y), t, state.as_str())?;
            }
        }
        out.flush()
    }
}

/// Classifies every sample of the grid covering the shadow's screen range
/// and `T` from 0 to just past the last screen event.
pub fn simulate_transport(
    scene: &Scene,
    traj: &Trajectory,
    convention: EmissionConvention,
    grid: GridSpec,
    budget: usize,
    exec: Execution,
) -> Result<ScreenTimeline, OracleError> {
    let GridSpec { dy, dt, eps } = GridSpec::new(grid.dy, grid.dt, grid.eps)?;
    let (lo, hi) = screen_extent(scene, traj);
    let t_end = last_event_time(scene, traj, convention) + 2.0 * dt;

    let ny = ((hi - lo) / dy).ceil() as u128 + 1;
    let nt = (t_end / dt).ceil() as u128 + 1;
    let samples = ny.saturating_mul(nt);
    if samples > budget as u128 {
        return Err(OracleError::GridBudget { samples, budget });
    }
    let (ny, nt) = (ny as usize, nt as usize);

    let y_values: Vec<f64> = if ny == 1 {
        vec![lo]
    } else {
        let step = (hi - lo) / (ny - 1) as f64;
        (0..ny)
            .map(|j| {
                if j + 1 == ny {
                    hi
                } else {
                    lo + j as f64 * step
                }
            })
            .collect()
    };
    let t_values: Vec<f64> = (0..nt).map(|i| i as f64 * dt).collect();

    let states = map_range(nt * ny, exec, |k| {
        classify_sample(
            scene,
            traj,
            convention,
            y_values[k % ny],
            t_values[k / ny],
            eps,
        )
    });

    Ok(ScreenTimeline {
        grid: GridSpec {
            dy: if ny > 1 {
                y_values[1] - y_values[0]
            } else {
                dy
            },
            dt,
            eps,
        },
        convention,
        y_values,
        t_values,
        states,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WorldlinePoint {
    #[serde(rename = "T")]
    pub t: f64,
    #[serde(rename = "Y")]
    pub y: f64,
}

/// Positions of the dark point on the screen over time.
///
/// One point per contiguous dark run per time row, so a trajectory that
/// produces several simultaneous shadow images yields several points for
/// the same `T` (ascending in `Y`).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ShadowWorldline {
    pub points: Vec<WorldlinePoint>,
}

impl ShadowWorldline {
    pub fn first(&self) -> Option<WorldlinePoint> {
        self.points.first().copied()
    }

    /// First sampled time at which the dark point sits at `y` (within `tol`).
    pub fn arrival_time(&self, y: f64, tol: f64) -> Option<f64> {
        self.points
            .iter()
            .find(|p| (p.y - y).abs() <= tol)
            .map(|p| p.t)
    }

    /// CSV with columns `T,Y`.
    pub fn write_csv<W: Write>(&self, out: W) -> io::Result<()> {
        let mut out = io::BufWriter::new(out);
        let mut tbuf = ryu::Buffer::new();
        let mut ybuf = ryu::Buffer::new();
        writeln!(out, "T,Y")?;
        for p in &self.points {
            writeln!(out, "{},{}", tbuf.format(p.t), ybuf.format(p.y))?;
        }
        out.flush()
    }
}

pub fn extract_worldline(timeline: &ScreenTimeline) -> Result<ShadowWorldline, OracleError> {
    if timeline.is_empty() {
        return Err(OracleError::EmptyTimeline);
    }
    let ys = timeline.y_values();
    let mut points = Vec::new();
    let mut started = false;
    for (i, &t) in timeline.t_values().iter().enumerate() {
        let row = timeline.row(i);
        let before = points.len();
        let mut j = 0;
        while j < row.len() {
            if row[j] != SampleState::Dark {
                j += 1;
                continue;
            }
            let first = j;
            while j + 1 < row.len() && row[j + 1] == SampleState::Dark {
                j += 1;
            }
            points.push(WorldlinePoint {
                t,
                y: 0.5 * (ys[first] + ys[j]),
            });
            j += 1;
        }
        if points.len() > before {
            started = true;
        } else if started {
            return Err(OracleError::WorldlineGap {
                time: t,
                eps: timeline.grid.eps,
            });
        }
    }
    if !started {
        return Err(OracleError::NoShadow);
    }
    Ok(ShadowWorldline { points })
}

/// Screen arrival time of the darkness cast while the occluder sits at
/// height `y` (`0 <= y <= s`) on its way up.
pub fn retarded_screen_time(scene: &Scene, y: f64) -> f64 {
    let l = scene.occluder_distance;
    y / scene.occluder_speed + (scene.screen_distance - l) * l.hypot(y) / (l * scene.light_speed)
}

/// Shadow speed at the moment the occluder passes height `y`, by central
/// difference of screen height against [`retarded_screen_time`].
///
/// Requires `0 < h <= y` and `y + h <= s`. Tends to `(L/l) v` as `y -> 0`.
pub fn instantaneous_speed(scene: &Scene, y: f64, h: f64) -> f64 {
    debug_assert!(h > 0.0 && h <= y && y + h <= scene.displacement);
    let rise = scene.magnification() * 2.0 * h;
    rise / (retarded_screen_time(scene, y + h) - retarded_screen_time(scene, y - h))
}

/// Average speed over the shadow's visible transit, `S / (T - L/c)`.
pub fn screen_transit_speed(scene: &Scene) -> f64 {
    let target = crate::kinematics::shadow_target(scene);
    target / (crate::kinematics::total_time(scene) - crate::kinematics::initial_latency(scene))
}

/// Large-`L` limit of [`screen_transit_speed`]: `c (l + hypot(l, s)) / s`.
pub fn screen_transit_limit(scene: &Scene) -> f64 {
    let (l, s) = (scene.occluder_distance, scene.displacement);
    scene.light_speed * (l + l.hypot(s)) / s
}
