//! Closed-form shadow kinematics and the subluminality certificate.
//!
//! The shadow of an occluder rising from `(l, 0)` to `(l, s)` moves on the
//! screen from `(L, 0)` to `(L, S)` with `S = (L/l) s`. Its average speed
//! is taken over `T = s/v + |(l, s) -> (L, S)| / c`, i.e. from the moment
//! the occluder departs until the darkness caused by its final position
//! reaches the screen. That average never reaches `c`, while the
//! similar-triangles estimate `(L/l) v` exceeds `c` once `L > l c / v`.

use crate::scene::Scene;
use serde::Serialize;
use thiserror::Error;

/// Relative tolerance used to classify a comparison as sitting on its
/// boundary instead of on one side of it.
pub const BOUNDARY_TOL: f64 = 1e-12;

/// Occluder arrival time `t = s / v` at its final height.
pub fn bug_stop_time(scene: &Scene) -> f64 {
    scene.displacement / scene.occluder_speed
}

/// Initial latency `t1 = L / c`.
pub fn initial_latency(scene: &Scene) -> f64 {
    scene.screen_distance / scene.light_speed
}

/// Final screen height `S = (L / l) s` of the shadow.
pub fn shadow_target(scene: &Scene) -> f64 {
    scene.magnification() * scene.displacement
}

/// Distance from the occluder's stopping point `(l, s)` to `(L, S)`.
fn stop_ray_length(scene: &Scene) -> f64 {
    let across = scene.screen_distance - scene.occluder_distance;
    let rise = shadow_target(scene) - scene.displacement;
    across.hypot(rise)
}

/// Stop latency `t2`: light travel time from `(l, s)` to `(L, S)`.
pub fn stop_latency(scene: &Scene) -> f64 {
    stop_ray_length(scene) / scene.light_speed
}

/// Total shadow motion time `T = t + t2`, measured from the occluder's departure.
pub fn total_time(scene: &Scene) -> f64 {
    bug_stop_time(scene) + stop_latency(scene)
}

/// Average shadow speed `S / T`.
pub fn average_shadow_speed(scene: &Scene) -> f64 {
    shadow_target(scene) / total_time(scene)
}

/// Similar-triangles estimate `(L / l) v`, valid only when both latencies
/// are negligible against `t`.
pub fn naive_shadow_speed(scene: &Scene) -> f64 {
    scene.magnification() * scene.occluder_speed
}

/// How many times `t` must exceed `t1` and `t2` for the naive estimate to
/// count as applicable. Always at least 1.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct DominanceRatio(f64);

#[derive(Debug, Clone, PartialEq, Error)]
#[error("dominance ratio must be a finite number >= 1 (got {0})")]
pub struct DominanceRatioError(pub f64);

impl DominanceRatio {
    pub const DEFAULT: DominanceRatio = DominanceRatio(100.0);

    pub fn new(ratio: f64) -> Result<Self, DominanceRatioError> {
        if ratio.is_finite() && ratio >= 1.0 {
            Ok(DominanceRatio(ratio))
        } else {
            Err(DominanceRatioError(ratio))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }

    /// Worst relative gap between the naive and average speeds once `t`
    /// dominates `t2` by this ratio: `1 / (ratio + 1)`.
    pub fn error_bound(self) -> f64 {
        1.0 / (self.0 + 1.0)
    }
}

impl Default for DominanceRatio {
    fn default() -> Self {
        Self::DEFAULT
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegimeCheck {
    /// `(v_naive - v_avg) / v_naive`, which equals `t2 / (t + t2)`.
    pub relative_error: f64,
    /// `t >= ratio * t1` and `t >= ratio * t2`.
    pub regime_ok: bool,
}

pub fn naive_regime_error(scene: &Scene, ratio: DominanceRatio) -> RegimeCheck {
    let t = bug_stop_time(scene);
    let t1 = initial_latency(scene);
    let t2 = stop_latency(scene);
    RegimeCheck {
        relative_error: t2 / (t + t2),
        regime_ok: t >= ratio.get() * t1 && t >= ratio.get() * t2,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GriffithsThreshold {
    /// `l c / v`: screen distance beyond which `(L / l) v > c`.
    pub min_screen_distance: f64,
    pub naive_superluminal: bool,
}

pub fn griffiths_threshold(scene: &Scene) -> GriffithsThreshold {
    let min_screen_distance = scene.occluder_distance * scene.light_speed / scene.occluder_speed;
    GriffithsThreshold {
        min_screen_distance,
        naive_superluminal: scene.screen_distance > min_screen_distance,
    }
}

/// Relative signed distance of `L` from the threshold `l c / v`.
pub fn threshold_margin(scene: &Scene) -> f64 {
    let th = griffiths_threshold(scene).min_screen_distance;
    (scene.screen_distance - th) / scene.screen_distance.max(th)
}

/// Every closed-form scalar for one scene.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KinematicsReport {
    pub t: f64,
    pub t1: f64,
    pub t2: f64,
    #[serde(rename = "T")]
    pub total_time: f64,
    #[serde(rename = "S")]
    pub shadow_target: f64,
    pub v_avg: f64,
    pub v_naive: f64,
    pub naive_superluminal: bool,
    pub regime_ok: bool,
}

impl KinematicsReport {
    pub fn evaluate(scene: &Scene, ratio: DominanceRatio) -> Self {
        KinematicsReport {
            t: bug_stop_time(scene),
            t1: initial_latency(scene),
            t2: stop_latency(scene),
            total_time: total_time(scene),
            shadow_target: shadow_target(scene),
            v_avg: average_shadow_speed(scene),
            v_naive: naive_shadow_speed(scene),
            naive_superluminal: griffiths_threshold(scene).naive_superluminal,
            regime_ok: naive_regime_error(scene, ratio).regime_ok,
        }
    }
}

/// The inequality chain behind `v_avg <= c`, evaluated for one scene.
///
/// `v_avg <= c` is equivalent to `S - (c/v) s <= rhs`. Since `c/v >= 1` the
/// chain `S - (c/v) s <= S - s <= rhs` proves it without squaring. Squaring
/// the first link is only order-preserving when `S - (c/v) s >= 0`, which
/// holds exactly when `L >= l c / v`; `squared_form_valid` records whether
/// the scene lies in that branch and the squared chain then holds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SubluminalityCertificate {
    pub lhs_linear: f64,
    pub mid: f64,
    pub rhs: f64,
    pub chain_holds: bool,
    pub squared_form_valid: bool,
    pub v_ratio: f64,
}

impl SubluminalityCertificate {
    /// The squared chain `(S - (c/v) s)^2 <= (S - s)^2 <= rhs^2` taken
    /// literally, with no regard to the sign of `lhs_linear`.
    ///
    /// This can hold outside the branch: when `S` is below `(c/v) s` but
    /// above `((c/v) s + s) / 2` the squares still compare correctly.
    pub fn literal_squared_chain(&self) -> bool {
        let lhs2 = self.lhs_linear * self.lhs_linear;
        let mid2 = self.mid * self.mid;
        le_tol(lhs2, mid2) && le_tol(mid2, self.rhs * self.rhs)
    }
}

/// `a <= b` up to [`BOUNDARY_TOL`] relative slack.
fn le_tol(a: f64, b: f64) -> bool {
    a <= b + BOUNDARY_TOL * a.abs().max(b.abs())
}

pub fn subluminality_certificate(scene: &Scene) -> SubluminalityCertificate {
    let target = shadow_target(scene);
    let s = scene.displacement;
    let lhs_linear = target - scene.light_speed / scene.occluder_speed * s;
    let mid = target - s;
    let rhs = stop_ray_length(scene);
    let chain_holds = le_tol(lhs_linear, mid) && le_tol(mid, rhs);
    let in_branch = lhs_linear >= 0.0;
    let lhs2 = lhs_linear * lhs_linear;
    let squared_form_valid = in_branch && le_tol(lhs2, mid * mid) && le_tol(mid * mid, rhs * rhs);
    SubluminalityCertificate {
        lhs_linear,
        mid,
        rhs,
        chain_holds,
        squared_form_valid,
        v_ratio: average_shadow_speed(scene) / scene.light_speed,
    }
}
