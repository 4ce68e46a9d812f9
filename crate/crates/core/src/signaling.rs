//! Signaling through a shadow that is assumed to move at `(L/l) v`.
//!
//! Sender X sits at `(L, 0)`, recipient Y at `(L, S)` and a mediator Z next
//! to the occluder. Within the window `t = s / v` X tells Z, over some
//! channel no faster than `c`, whether to let the occluder finish its rise;
//! Y then sees the shadow arrive or not. If the shadow really moved at
//! `(L/l) v > c`, X would reach Y faster than light. Combining the two
//! conditions gives `l^2 ((L - l)^2 + s^2) < L^2 s^2`, the inequality that
//! any such feasible configuration satisfies.

use crate::exec::{map_range, Execution};
use crate::kinematics::{self, BOUNDARY_TOL};
use crate::scene::Scene;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Feasible,
    Infeasible,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SignalingReport {
    pub naive_superluminal: bool,
    /// Decision window `s / v`.
    pub t: f64,
    /// Upper bound `hypot(L - l, s)` on the X to Z distance.
    pub xz_distance: f64,
    /// Slowest X to Z channel that still fits the window.
    pub v_dd_min: f64,
    pub channel_feasible: bool,
    pub ineq21_lhs: f64,
    pub ineq21_rhs: f64,
    pub anti_bell_holds: bool,
    /// `l < s`, the large-`L` reduction of the inequality.
    pub asymptotic_ls: bool,
    pub verdict: Verdict,
    /// Some comparison above sits within relative `1e-12` of equality.
    pub boundary: bool,
    /// Direct light time from X to Y, `S / c`, for reference.
    pub xy_light_time: f64,
}

/// Both sides of `l^2 ((L - l)^2 + s^2) < L^2 s^2`.
pub fn anti_bell_sides(occluder: f64, displacement: f64, screen: f64) -> (f64, f64) {
    let across = screen - occluder;
    let lhs = occluder * occluder * (across * across + displacement * displacement);
    let rhs = screen * screen * displacement * displacement;
    (lhs, rhs)
}

pub fn anti_bell_check(occluder: f64, displacement: f64, screen: f64) -> bool {
    let (lhs, rhs) = anti_bell_sides(occluder, displacement, screen);
    lhs < rhs
}

fn near(a: f64, b: f64) -> bool {
    (a - b).abs() <= BOUNDARY_TOL * a.abs().max(b.abs())
}

pub fn analyze(scene: &Scene) -> SignalingReport {
    let (big_l, l, s) = (
        scene.screen_distance,
        scene.occluder_distance,
        scene.displacement,
    );
    let c = scene.light_speed;
    let threshold = kinematics::griffiths_threshold(scene);
    let window = kinematics::bug_stop_time(scene);
    let xz_distance = (big_l - l).hypot(s);
    let v_dd_min = xz_distance / window;
    let channel_feasible = v_dd_min <= c;
    let (ineq21_lhs, ineq21_rhs) = anti_bell_sides(l, s, big_l);
    let verdict = if threshold.naive_superluminal && channel_feasible {
        Verdict::Feasible
    } else {
        Verdict::Infeasible
    };
    SignalingReport {
        naive_superluminal: threshold.naive_superluminal,
        t: window,
        xz_distance,
        v_dd_min,
        channel_feasible,
        ineq21_lhs,
        ineq21_rhs,
        anti_bell_holds: ineq21_lhs < ineq21_rhs,
        asymptotic_ls: l < s,
        verdict,
        boundary: near(big_l, threshold.min_screen_distance)
            || near(v_dd_min, c)
            || near(ineq21_lhs, ineq21_rhs),
        xy_light_time: kinematics::shadow_target(scene) / c,
    }
}

/// Closed interval `lo..=hi` sampled at `steps` evenly spaced points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisRange {
    pub lo: f64,
    pub hi: f64,
}

impl AxisRange {
    pub fn new(lo: f64, hi: f64) -> Self {
        AxisRange { lo, hi }
    }

    pub fn is_empty(&self) -> bool {
        self.lo.partial_cmp(&self.hi).is_none_or(|o| o.is_gt())
    }

    pub fn points(&self, steps: usize) -> Vec<f64> {
        if self.is_empty() || steps == 0 {
            return Vec::new();
        }
        if steps == 1 {
            return vec![self.lo];
        }
        let step = (self.hi - self.lo) / (steps - 1) as f64;
        (0..steps)
            .map(|i| {
                if i + 1 == steps {
                    self.hi
                } else {
                    self.lo + i as f64 * step
                }
            })
            .collect()
    }
}

impl std::str::FromStr for AxisRange {
    type Err = String;

    /// Parses `a:b`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (a, b) = s
            .split_once(':')
            .ok_or_else(|| format!("range `{s}` is not of the form a:b"))?;
        let parse = |x: &str| {
            x.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| format!("range `{s}`: `{x}` is not a finite number"))
        };
        Ok(AxisRange::new(parse(a)?, parse(b)?))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepSpec {
    pub occluder: AxisRange,
    pub displacement: AxisRange,
    pub screen: AxisRange,
    pub speed: f64,
    pub light_speed: f64,
    pub steps: usize,
}

/// One sweep grid point, in the sweep CSV column order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub l: f64,
    pub s: f64,
    #[serde(rename = "L")]
    pub screen: f64,
    pub v: f64,
    pub naive_superluminal: bool,
    pub v_dd_min: f64,
    pub channel_feasible: bool,
    pub ineq21_lhs: f64,
    pub ineq21_rhs: f64,
    pub anti_bell_holds: bool,
    pub asymptotic_ls: bool,
    pub verdict: Verdict,
}

impl SweepRow {
    fn new(scene: &Scene, report: &SignalingReport) -> Self {
        SweepRow {
            l: scene.occluder_distance,
            s: scene.displacement,
            screen: scene.screen_distance,
            v: scene.occluder_speed,
            naive_superluminal: report.naive_superluminal,
            v_dd_min: report.v_dd_min,
            channel_feasible: report.channel_feasible,
            ineq21_lhs: report.ineq21_lhs,
            ineq21_rhs: report.ineq21_rhs,
            anti_bell_holds: report.anti_bell_holds,
            asymptotic_ls: report.asymptotic_ls,
            verdict: report.verdict,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bounds {
    pub min: f64,
    pub max: f64,
}

impl Bounds {
    fn include(this: Option<Bounds>, x: f64) -> Option<Bounds> {
        Some(match this {
            None => Bounds { min: x, max: x },
            Some(b) => Bounds {
                min: b.min.min(x),
                max: b.max.max(x),
            },
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FeasibleBox {
    pub l: Bounds,
    pub s: Bounds,
    #[serde(rename = "L")]
    pub screen: Bounds,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSummary {
    pub points: usize,
    /// Grid points with `l >= L`, which are not valid scenes.
    pub skipped: usize,
    pub feasible_count: usize,
    pub feasible_fraction: f64,
    pub any_feasible: bool,
    pub message: String,
    pub feasible_box: Option<FeasibleBox>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub rows: Vec<SweepRow>,
    pub summary: SweepSummary,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SweepError {
    #[error("invalid speeds: need 0 < v < c (got v = {speed}, c = {light})")]
    InvalidSpeed { speed: f64, light: f64 },
    #[error("sweep grid of {points} points exceeds the budget of {budget}")]
    GridBudget { points: u128, budget: usize },
}

pub const DEFAULT_SWEEP_BUDGET: usize = 10_000_000;

/// Evaluates [`analyze`] on every grid point, `l`-major, then `s`, then `L`.
pub fn sweep(spec: &SweepSpec, budget: usize, exec: Execution) -> Result<Sweep, SweepError> {
    let (v, c) = (spec.speed, spec.light_speed);
    if !(v.is_finite() && c.is_finite() && v > 0.0 && c > 0.0 && v < c) {
        return Err(SweepError::InvalidSpeed { speed: v, light: c });
    }
    let ls = spec.occluder.points(spec.steps);
    let ss = spec.displacement.points(spec.steps);
    let big_ls = spec.screen.points(spec.steps);
    let total = ls.len() as u128 * ss.len() as u128 * big_ls.len() as u128;
    if total > budget as u128 {
        return Err(SweepError::GridBudget {
            points: total,
            budget,
        });
    }
    let total = total as usize;
    let (ns, nl) = (ss.len(), big_ls.len());
    let evaluated = map_range(total, exec, |k| {
        let (i, j, m) = (k / (ns * nl), (k / nl) % ns, k % nl);
        Scene::new(big_ls[m], ls[i], ss[j], v, c)
            .ok()
            .map(|scene| SweepRow::new(&scene, &analyze(&scene)))
    });
    let rows: Vec<SweepRow> = evaluated.into_iter().flatten().collect();

    let mut boxes: (Option<Bounds>, Option<Bounds>, Option<Bounds>) = (None, None, None);
    let mut feasible_count = 0;
    for row in rows.iter().filter(|r| r.verdict == Verdict::Feasible) {
        feasible_count += 1;
        boxes = (
            Bounds::include(boxes.0, row.l),
            Bounds::include(boxes.1, row.s),
            Bounds::include(boxes.2, row.screen),
        );
    }
    let feasible_box = match boxes {
        (Some(l), Some(s), Some(screen)) => Some(FeasibleBox { l, s, screen }),
        _ => None,
    };
    let summary = SweepSummary {
        points: rows.len(),
        skipped: total - rows.len(),
        feasible_count,
        feasible_fraction: if rows.is_empty() {
            0.0
        } else {
            feasible_count as f64 / rows.len() as f64
        },
        any_feasible: feasible_count > 0,
        message: if feasible_count > 0 {
            format!("{feasible_count} feasible point(s)")
        } else {
            "no feasible point".to_string()
        },
        feasible_box,
    };
    Ok(Sweep { rows, summary })
}
