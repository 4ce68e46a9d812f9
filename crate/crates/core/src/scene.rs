//! Projector / occluder / screen geometry.
//!
//! The projector sits at the origin of the `xOy` plane, the screen is the
//! vertical line `x = L` and the occluder (a point) moves along the line
//! `x = l`, starting at `(l, 0)` at `t = 0`. Every quantity in this crate is
//! a function of the five scalars held by [`Scene`].

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Speed of light in vacuum used when a scene omits `c`, in m/s.
pub const DEFAULT_LIGHT_SPEED: f64 = 3e8;

/// A validated scene. Immutable once built.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Scene {
    #[serde(rename = "L")]
    pub(crate) screen_distance: f64,
    #[serde(rename = "l")]
    pub(crate) occluder_distance: f64,
    #[serde(rename = "s")]
    pub(crate) displacement: f64,
    #[serde(rename = "v")]
    pub(crate) occluder_speed: f64,
    #[serde(rename = "c")]
    pub(crate) light_speed: f64,
}

/// Unvalidated scene parameters, as read from JSON or the command line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawScene {
    #[serde(rename = "L")]
    pub screen_distance: f64,
    #[serde(rename = "l")]
    pub occluder_distance: f64,
    #[serde(rename = "s")]
    pub displacement: f64,
    #[serde(rename = "v")]
    pub occluder_speed: f64,
    #[serde(rename = "c", default = "default_light_speed")]
    pub light_speed: f64,
}

fn default_light_speed() -> f64 {
    DEFAULT_LIGHT_SPEED
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SceneError {
    #[error("{field} must be a finite number (got {value})")]
    NonFinite { field: &'static str, value: f64 },
    #[error("c must be > 0 (got {0})")]
    LightSpeedNotPositive(f64),
    #[error("l must be > 0 (got {0})")]
    OccluderDistanceNotPositive(f64),
    #[error("l must be < L (got l = {occluder}, L = {screen})")]
    OccluderBeyondScreen { occluder: f64, screen: f64 },
    #[error("s must be > 0 (got {0})")]
    DisplacementNotPositive(f64),
    #[error("v must be > 0 (got {0})")]
    SpeedNotPositive(f64),
    #[error("v must be < c (got v = {speed}, c = {light})")]
    SpeedNotSubluminal { speed: f64, light: f64 },
}

impl SceneError {
    /// Name of the offending scene field.
    pub fn field(&self) -> &'static str {
        match self {
            SceneError::NonFinite { field, .. } => field,
            SceneError::LightSpeedNotPositive(_) => "c",
            SceneError::OccluderDistanceNotPositive(_)
            | SceneError::OccluderBeyondScreen { .. } => "l",
            SceneError::DisplacementNotPositive(_) => "s",
            SceneError::SpeedNotPositive(_) | SceneError::SpeedNotSubluminal { .. } => "v",
        }
    }
}

impl RawScene {
    pub fn new(screen: f64, occluder: f64, displacement: f64, speed: f64, light: f64) -> Self {
        RawScene {
            screen_distance: screen,
            occluder_distance: occluder,
            displacement,
            occluder_speed: speed,
            light_speed: light,
        }
    }

    pub fn validate(self) -> Result<Scene, SceneError> {
        validate_scene(self)
    }
}

impl From<Scene> for RawScene {
    fn from(s: Scene) -> Self {
        RawScene::new(
            s.screen_distance,
            s.occluder_distance,
            s.displacement,
            s.occluder_speed,
            s.light_speed,
        )
    }
}

impl<'de> Deserialize<'de> for Scene {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        RawScene::deserialize(d)?
            .validate()
            .map_err(serde::de::Error::custom)
    }
}

/// Checks every scene invariant and returns the first violation found.
pub fn validate_scene(raw: RawScene) -> Result<Scene, SceneError> {
    let fields = [
        ("L", raw.screen_distance),
        ("l", raw.occluder_distance),
        ("s", raw.displacement),
        ("v", raw.occluder_speed),
        ("c", raw.light_speed),
    ];
    if let Some(&(field, value)) = fields.iter().find(|(_, x)| !x.is_finite()) {
        return Err(SceneError::NonFinite { field, value });
    }
    if raw.light_speed <= 0.0 {
        return Err(SceneError::LightSpeedNotPositive(raw.light_speed));
    }
    if raw.occluder_distance <= 0.0 {
        return Err(SceneError::OccluderDistanceNotPositive(
            raw.occluder_distance,
        ));
    }
    if raw.occluder_distance >= raw.screen_distance {
        return Err(SceneError::OccluderBeyondScreen {
            occluder: raw.occluder_distance,
            screen: raw.screen_distance,
        });
    }
    if raw.displacement <= 0.0 {
        return Err(SceneError::DisplacementNotPositive(raw.displacement));
    }
    if raw.occluder_speed <= 0.0 {
        return Err(SceneError::SpeedNotPositive(raw.occluder_speed));
    }
    if raw.occluder_speed >= raw.light_speed {
        return Err(SceneError::SpeedNotSubluminal {
            speed: raw.occluder_speed,
            light: raw.light_speed,
        });
    }
    Ok(Scene {
        screen_distance: raw.screen_distance,
        occluder_distance: raw.occluder_distance,
        displacement: raw.displacement,
        occluder_speed: raw.occluder_speed,
        light_speed: raw.light_speed,
    })
}

impl Scene {
    pub fn new(
        screen: f64,
        occluder: f64,
        displacement: f64,
        speed: f64,
        light: f64,
    ) -> Result<Self, SceneError> {
        RawScene::new(screen, occluder, displacement, speed, light).validate()
    }

    /// Projector-to-screen distance `L`.
    pub fn screen_distance(&self) -> f64 {
        self.screen_distance
    }

    /// Projector-to-occluder distance `l`.
    pub fn occluder_distance(&self) -> f64 {
        self.occluder_distance
    }

    /// Total transverse travel `s` of the occluder.
    pub fn displacement(&self) -> f64 {
        self.displacement
    }

    /// Transverse occluder speed `v`.
    pub fn occluder_speed(&self) -> f64 {
        self.occluder_speed
    }

    /// Speed of light `c`.
    pub fn light_speed(&self) -> f64 {
        self.light_speed
    }

    /// Ratio `L / l` by which transverse offsets at the occluder plane are
    /// magnified on the screen.
    pub fn magnification(&self) -> f64 {
        self.screen_distance / self.occluder_distance
    }

    /// Multiplies every length by `k`, keeping both speeds.
    pub fn scaled(&self, k: f64) -> Result<Scene, SceneError> {
        Scene::new(
            k * self.screen_distance,
            k * self.occluder_distance,
            k * self.displacement,
            self.occluder_speed,
            self.light_speed,
        )
    }

    /// Same geometry with a different occluder speed.
    pub fn with_speed(&self, speed: f64) -> Result<Scene, SceneError> {
        Scene::new(
            self.screen_distance,
            self.occluder_distance,
            self.displacement,
            speed,
            self.light_speed,
        )
    }
}

/// One constant-velocity leg of an occluder trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub start_time: f64,
    pub start_y: f64,
    pub speed: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TrajectoryError {
    #[error("trajectory needs at least one segment")]
    Empty,
    #[error("segment {index}: non-finite value")]
    NonFinite { index: usize },
    #[error("segment {index}: |speed| = {speed} is not below c = {light}")]
    Superluminal {
        index: usize,
        speed: f64,
        light: f64,
    },
    #[error("segment {index}: start time {time} does not follow the previous segment")]
    NotIncreasing { index: usize, time: f64 },
    #[error("segment {index}: starts at y = {got} but previous segment ends at y = {expected}")]
    Discontinuous {
        index: usize,
        expected: f64,
        got: f64,
    },
    #[error("final segment must be at rest (speed {0})")]
    FinalSegmentMoving(f64),
}

/// Piecewise-constant-velocity motion of the occluder along `x = l`.
///
/// The occluder does not exist before the first segment's start time; after
/// the last segment starts it stays put forever.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    segments: Vec<Segment>,
}

const CONTINUITY_TOL: f64 = 1e-9;

impl Trajectory {
    pub fn new(segments: Vec<Segment>, light_speed: f64) -> Result<Self, TrajectoryError> {
        let last = segments.last().ok_or(TrajectoryError::Empty)?;
        if last.speed != 0.0 {
            return Err(TrajectoryError::FinalSegmentMoving(last.speed));
        }
        for (index, seg) in segments.iter().enumerate() {
            if !(seg.start_time.is_finite() && seg.start_y.is_finite() && seg.speed.is_finite()) {
                return Err(TrajectoryError::NonFinite { index });
            }
            if seg.speed.abs() >= light_speed {
                return Err(TrajectoryError::Superluminal {
                    index,
                    speed: seg.speed.abs(),
                    light: light_speed,
                });
            }
            if index == 0 {
                continue;
            }
            let prev = &segments[index - 1];
            if seg.start_time <= prev.start_time {
                return Err(TrajectoryError::NotIncreasing {
                    index,
                    time: seg.start_time,
                });
            }
            let expected = prev.start_y + prev.speed * (seg.start_time - prev.start_time);
            let scale = expected.abs().max(seg.start_y.abs()).max(1.0);
            if (expected - seg.start_y).abs() > CONTINUITY_TOL * scale {
                return Err(TrajectoryError::Discontinuous {
                    index,
                    expected,
                    got: seg.start_y,
                });
            }
        }
        Ok(Trajectory { segments })
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn start_time(&self) -> f64 {
        self.segments[0].start_time
    }

    /// Time at which the occluder comes to rest for good.
    pub fn stop_time(&self) -> f64 {
        self.segments[self.segments.len() - 1].start_time
    }

    /// Occluder height at time `t`, or `None` before it exists.
    pub fn position(&self, t: f64) -> Option<f64> {
        if t < self.start_time() {
            return None;
        }
        let idx = self.segments.partition_point(|seg| seg.start_time <= t) - 1;
        let seg = &self.segments[idx];
        Some(seg.start_y + seg.speed * (t - seg.start_time))
    }

    /// Lowest and highest heights visited.
    pub fn y_extent(&self) -> (f64, f64) {
        self.segments
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), seg| {
                (lo.min(seg.start_y), hi.max(seg.start_y))
            })
    }

    pub fn max_speed(&self) -> f64 {
        self.segments
            .iter()
            .map(|s| s.speed.abs())
            .fold(0.0, f64::max)
    }
}

/// The single up-then-stop motion: rise at `v` from `(l, 0)` until `(l, s)`.
pub fn stop_trajectory(scene: &Scene) -> Trajectory {
    let stop = scene.displacement / scene.occluder_speed;
    Trajectory {
        segments: vec![
            Segment {
                start_time: 0.0,
                start_y: 0.0,
                speed: scene.occluder_speed,
            },
            Segment {
                start_time: stop,
                start_y: scene.displacement,
                speed: 0.0,
            },
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(big_l: f64, l: f64, s: f64, v: f64, c: f64) -> RawScene {
        RawScene::new(big_l, l, s, v, c)
    }

    #[test]
    fn accepts_desk_scene() {
        let scene = raw(2.0, 1.0, 1.0, 0.5, 1.0).validate().unwrap();
        assert_eq!(scene.magnification(), 2.0);
    }

    #[test]
    fn each_invariant_has_its_own_error() {
        let cases = [
            (raw(1.0, 1.0, 1.0, 0.5, 1.0), "l"),
            (raw(2.0, 0.0, 1.0, 0.5, 1.0), "l"),
            (raw(2.0, 1.0, 0.0, 0.5, 1.0), "s"),
            (raw(2.0, 1.0, 1.0, 1.0, 1.0), "v"),
            (raw(2.0, 1.0, 1.0, 0.0, 1.0), "v"),
            (raw(2.0, 1.0, 1.0, 0.5, 0.0), "c"),
            (raw(f64::NAN, 1.0, 1.0, 0.5, 1.0), "L"),
        ];
        for (input, field) in cases {
            let err = input.validate().unwrap_err();
            assert_eq!(err.field(), field, "{input:?}: {err}");
        }
        assert_eq!(
            raw(1.0, 1.0, 1.0, 0.5, 1.0)
                .validate()
                .unwrap_err()
                .to_string(),
            "l must be < L (got l = 1, L = 1)"
        );
        assert!(raw(2.0, 1.0, 1.0, 1.0, 1.0)
            .validate()
            .unwrap_err()
            .to_string()
            .starts_with("v must be < c"));
    }

    #[test]
    fn json_defaults_c_and_rejects_unknown_keys() {
        let scene: Scene = serde_json::from_str(r#"{"L": 2, "l": 1, "s": 1, "v": 0.5}"#).unwrap();
        assert_eq!(scene.light_speed(), DEFAULT_LIGHT_SPEED);
        let err = serde_json::from_str::<Scene>(r#"{"L": 2, "l": 1, "s": 1, "v": 0.5, "w": 1}"#)
            .unwrap_err();
        assert!(err.to_string().contains("unknown field"), "{err}");
        let err = serde_json::from_str::<Scene>(r#"{"L": 2, "l": 1, "s": 1, "v": 1, "c": 1}"#)
            .unwrap_err();
        assert!(err.to_string().contains("v must be < c"), "{err}");
    }

    #[test]
    fn stop_trajectory_segments() {
        let scene = Scene::new(2.0, 1.0, 1.0, 0.5, 1.0).unwrap();
        let traj = stop_trajectory(&scene);
        assert_eq!(
            traj.segments(),
            &[
                Segment {
                    start_time: 0.0,
                    start_y: 0.0,
                    speed: 0.5
                },
                Segment {
                    start_time: 2.0,
                    start_y: 1.0,
                    speed: 0.0
                },
            ]
        );
        let scene = Scene::new(150.0, 1.0, 2.0, 0.01, 1.0).unwrap();
        let traj = stop_trajectory(&scene);
        assert_eq!(traj.stop_time(), 200.0);
        assert_eq!(traj.segments()[1].start_y, 2.0);
        assert_eq!(traj.position(-0.1), None);
        assert_eq!(traj.position(100.0), Some(1.0));
        assert_eq!(traj.position(1e9), Some(2.0));
    }

    #[test]
    fn trajectory_validation() {
        let seg = |t, y, v| Segment {
            start_time: t,
            start_y: y,
            speed: v,
        };
        assert_eq!(Trajectory::new(vec![], 1.0), Err(TrajectoryError::Empty));
        assert!(matches!(
            Trajectory::new(vec![seg(0.0, 0.0, 0.5)], 1.0),
            Err(TrajectoryError::FinalSegmentMoving(_))
        ));
        assert!(matches!(
            Trajectory::new(vec![seg(0.0, 0.0, 1.5), seg(1.0, 1.5, 0.0)], 1.0),
            Err(TrajectoryError::Superluminal { index: 0, .. })
        ));
        assert!(matches!(
            Trajectory::new(vec![seg(0.0, 0.0, 0.5), seg(1.0, 0.7, 0.0)], 1.0),
            Err(TrajectoryError::Discontinuous { index: 1, .. })
        ));
        assert!(matches!(
            Trajectory::new(vec![seg(0.0, 0.0, 0.5), seg(0.0, 0.0, 0.0)], 1.0),
            Err(TrajectoryError::NotIncreasing { index: 1, .. })
        ));
        let zigzag = Trajectory::new(
            vec![seg(0.0, 0.0, 0.5), seg(2.0, 1.0, -0.25), seg(4.0, 0.5, 0.0)],
            1.0,
        )
        .unwrap();
        assert_eq!(zigzag.y_extent(), (0.0, 1.0));
        assert_eq!(zigzag.position(3.0), Some(0.75));
        assert_eq!(zigzag.max_speed(), 0.5);
    }

    #[test]
    fn scaling_preserves_validity() {
        let scene = Scene::new(2.0, 1.0, 1.0, 0.5, 1.0).unwrap();
        for k in [1e-3, 0.5, 7.0, 1e3] {
            assert!(scene.scaled(k).is_ok());
        }
        let bad = raw(1.0, 1.0, 1.0, 0.5, 1.0);
        for k in [1e-3, 1e3] {
            assert!(raw(
                k * bad.screen_distance,
                k * bad.occluder_distance,
                k,
                0.5,
                1.0
            )
            .validate()
            .is_err());
        }
    }
}
