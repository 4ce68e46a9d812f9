//! Randomized check of the kinematic invariants over seeded scenes.
//!
//! Scene `i` of a run is drawn from its own ChaCha stream (`seed`, stream
//! `i`), so a run is reproducible and independent of how trials are
//! scheduled across threads.

use crate::exec::{map_range, Execution};
use crate::kinematics::{
    griffiths_threshold, naive_regime_error, subluminality_certificate, threshold_margin,
    DominanceRatio, KinematicsReport, BOUNDARY_TOL,
};
use crate::scene::Scene;
use crate::signaling;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Lengths are drawn log-uniformly from this interval, in meters.
pub const LENGTH_RANGE: (f64, f64) = (1e-3, 1e6);
/// `v / c` is drawn uniformly from this open interval.
pub const SPEED_RATIO_RANGE: (f64, f64) = (1e-3, 1.0 - 1e-3);
/// Length scalings under which every ratio and verdict must be unchanged.
pub const SCALE_FACTORS: [f64; 2] = [1e-3, 1e3];

fn log_uniform(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)) -> f64 {
    (rng.random_range(lo.ln()..hi.ln())).exp()
}

/// Scene `index` of the run seeded with `seed`.
pub fn sample_scene(seed: u64, index: u64, light_speed: f64) -> Scene {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    loop {
        let a = log_uniform(&mut rng, LENGTH_RANGE);
        let b = log_uniform(&mut rng, LENGTH_RANGE);
        let s = log_uniform(&mut rng, LENGTH_RANGE);
        let ratio = loop {
            let r = rng.random_range(SPEED_RATIO_RANGE.0..SPEED_RATIO_RANGE.1);
            if r > SPEED_RATIO_RANGE.0 {
                break r;
            }
        };
        if let Ok(scene) = Scene::new(a.max(b), a.min(b), s, ratio * light_speed, light_speed) {
            return scene;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Subluminal,
    AverageBelowNaive,
    Chain,
    SquaredBranch,
    ScaleInvariance,
    RegimeBound,
    ApproximationGap,
}

/// Test-only corruption of one check, used to exercise the failure path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Fault {
    #[default]
    None,
    /// Compares the average speed against `c / 2` instead of `c`.
    HalvedLightSpeed,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    pub trials: usize,
    pub seed: u64,
    pub light_speed: f64,
    pub ratio: DominanceRatio,
    pub fault: Fault,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            trials: 100_000,
            seed: 42,
            light_speed: crate::scene::DEFAULT_LIGHT_SPEED,
            ratio: DominanceRatio::DEFAULT,
            fault: Fault::None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Counterexample {
    pub trial: usize,
    pub check: Check,
    pub detail: String,
    pub scene: Scene,
}

/// Result of all checks on one scene.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub failure: Option<(Check, String)>,
    /// Some comparison sat within `1e-12` of its boundary and was not judged.
    pub boundary: bool,
    pub above_threshold: bool,
    pub regime_ok: bool,
    /// `t >= ratio * t2`, the condition under which the gap bound applies.
    pub stop_latency_dominated: bool,
    pub v_ratio: f64,
    pub gap: f64,
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    a == b || (a - b).abs() <= tol * a.abs().max(b.abs())
}

fn near(a: f64, b: f64) -> bool {
    rel_close(a, b, BOUNDARY_TOL)
}

/// Runs every invariant check on one scene.
pub fn check_scene(scene: &Scene, ratio: DominanceRatio, fault: Fault) -> TrialOutcome {
    let c = scene.light_speed();
    let report = KinematicsReport::evaluate(scene, ratio);
    let cert = subluminality_certificate(scene);
    let regime = naive_regime_error(scene, ratio);
    let threshold = griffiths_threshold(scene);
    let mut boundary = false;
    let mut failure: Option<(Check, String)> = None;
    let mut fail = |check: Check, detail: String| {
        if failure.is_none() {
            failure = Some((check, detail));
        }
    };

    let limit = match fault {
        Fault::None => c,
        Fault::HalvedLightSpeed => 0.5 * c,
    };
    if report.v_avg >= limit {
        if near(report.v_avg, limit) {
            boundary = true;
        } else {
            fail(
                Check::Subluminal,
                format!("v_avg = {} >= c = {limit}", report.v_avg),
            );
        }
    }

    if report.v_avg > report.v_naive * (1.0 + BOUNDARY_TOL) {
        fail(
            Check::AverageBelowNaive,
            format!("v_avg = {} > v_naive = {}", report.v_avg, report.v_naive),
        );
    }

    if !cert.chain_holds {
        fail(
            Check::Chain,
            format!(
                "lhs_linear = {}, mid = {}, rhs = {}",
                cert.lhs_linear, cert.mid, cert.rhs
            ),
        );
    }

    let above_threshold = scene.screen_distance() >= threshold.min_screen_distance;
    if threshold_margin(scene).abs() <= BOUNDARY_TOL {
        boundary = true;
    } else if cert.squared_form_valid != above_threshold {
        fail(
            Check::SquaredBranch,
            format!(
                "squared_form_valid = {} but L = {} vs l c / v = {}",
                cert.squared_form_valid,
                scene.screen_distance(),
                threshold.min_screen_distance
            ),
        );
    }

    let t = report.t;
    if regime.regime_ok && regime.relative_error > ratio.error_bound() * (1.0 + BOUNDARY_TOL) {
        fail(
            Check::RegimeBound,
            format!(
                "relative_error = {} > {}",
                regime.relative_error,
                ratio.error_bound()
            ),
        );
    }
    let gap = (report.v_naive - report.v_avg) / report.v_naive;
    let stop_latency_dominated = t >= ratio.get() * report.t2;
    if stop_latency_dominated && gap > ratio.error_bound() + BOUNDARY_TOL {
        fail(
            Check::ApproximationGap,
            format!("gap = {gap} > {}", ratio.error_bound()),
        );
    }
    if (gap - regime.relative_error).abs() > 1e-12 {
        fail(
            Check::ApproximationGap,
            format!(
                "direct gap {gap} differs from t2 / T = {}",
                regime.relative_error
            ),
        );
    }

    let signal = signaling::analyze(scene);
    boundary |= signal.boundary;
    let regime_edge = near(t, ratio.get() * report.t1) || near(t, ratio.get() * report.t2);
    boundary |= regime_edge;
    for k in SCALE_FACTORS {
        let Ok(scaled) = scene.scaled(k) else {
            fail(
                Check::ScaleInvariance,
                format!("scaling by {k} gives an invalid scene"),
            );
            continue;
        };
        let r2 = KinematicsReport::evaluate(&scaled, ratio);
        let c2 = subluminality_certificate(&scaled);
        let g2 = naive_regime_error(&scaled, ratio);
        let s2 = signaling::analyze(&scaled);
        let mut mismatches = Vec::new();
        if !rel_close(report.v_avg, r2.v_avg, BOUNDARY_TOL) {
            mismatches.push(format!("v_avg {} vs {}", report.v_avg, r2.v_avg));
        }
        if !rel_close(report.v_naive, r2.v_naive, BOUNDARY_TOL) {
            mismatches.push(format!("v_naive {} vs {}", report.v_naive, r2.v_naive));
        }
        if !rel_close(regime.relative_error, g2.relative_error, 1e-10) {
            mismatches.push(format!(
                "relative_error {} vs {}",
                regime.relative_error, g2.relative_error
            ));
        }
        if cert.chain_holds != c2.chain_holds {
            mismatches.push("chain_holds".into());
        }
        let on_edge =
            threshold_margin(scene).abs() <= BOUNDARY_TOL || signal.boundary || s2.boundary;
        if !on_edge {
            let flags = [
                (
                    "naive_superluminal",
                    report.naive_superluminal,
                    r2.naive_superluminal,
                ),
                (
                    "squared_form_valid",
                    cert.squared_form_valid,
                    c2.squared_form_valid,
                ),
                (
                    "channel_feasible",
                    signal.channel_feasible,
                    s2.channel_feasible,
                ),
                (
                    "anti_bell_holds",
                    signal.anti_bell_holds,
                    s2.anti_bell_holds,
                ),
                ("asymptotic_ls", signal.asymptotic_ls, s2.asymptotic_ls),
                ("verdict", signal.verdict == s2.verdict, true),
            ];
            mismatches.extend(
                flags
                    .iter()
                    .filter(|(_, a, b)| a != b)
                    .map(|(n, _, _)| n.to_string()),
            );
        }
        if !regime_edge && report.regime_ok != r2.regime_ok {
            mismatches.push("regime_ok".into());
        }
        if !mismatches.is_empty() {
            fail(
                Check::ScaleInvariance,
                format!("k = {k}: {}", mismatches.join(", ")),
            );
        }
    }

    TrialOutcome {
        failure,
        boundary,
        above_threshold,
        regime_ok: regime.regime_ok,
        stop_latency_dominated,
        v_ratio: cert.v_ratio,
        gap,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifySummary {
    pub trials: usize,
    pub seed: u64,
    pub passed: usize,
    pub boundary_flagged: usize,
    pub above_threshold: usize,
    pub regime_ok: usize,
    pub stop_latency_dominated: usize,
    pub max_v_ratio: f64,
    pub max_dominated_gap: f64,
    pub first_failure: Option<Counterexample>,
}

impl VerifySummary {
    pub fn all_passed(&self) -> bool {
        self.first_failure.is_none()
    }
}

pub fn run_verify(config: &VerifyConfig, exec: Execution) -> VerifySummary {
    let outcomes = map_range(config.trials, exec, |i| {
        let scene = sample_scene(config.seed, i as u64, config.light_speed);
        (scene, check_scene(&scene, config.ratio, config.fault))
    });
    let mut summary = VerifySummary {
        trials: config.trials,
        seed: config.seed,
        passed: 0,
        boundary_flagged: 0,
        above_threshold: 0,
        regime_ok: 0,
        stop_latency_dominated: 0,
        max_v_ratio: 0.0,
        max_dominated_gap: 0.0,
        first_failure: None,
    };
    for (trial, (scene, outcome)) in outcomes.into_iter().enumerate() {
        summary.boundary_flagged += outcome.boundary as usize;
        summary.above_threshold += outcome.above_threshold as usize;
        summary.regime_ok += outcome.regime_ok as usize;
        summary.stop_latency_dominated += outcome.stop_latency_dominated as usize;
        summary.max_v_ratio = summary.max_v_ratio.max(outcome.v_ratio);
        if outcome.stop_latency_dominated {
            summary.max_dominated_gap = summary.max_dominated_gap.max(outcome.gap);
        }
        match outcome.failure {
            None => summary.passed += 1,
            Some((check, detail)) if summary.first_failure.is_none() => {
                summary.first_failure = Some(Counterexample {
                    trial,
                    check,
                    detail,
                    scene,
                });
            }
            Some(_) => {}
        }
    }
    summary
}
