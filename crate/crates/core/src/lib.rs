//! Shadow kinematics under a finite speed of light.
//!
//! * [`scene`]: geometry, validation and occluder trajectories.
//! * [`kinematics`]: closed-form latencies and speeds, the subluminality
//!   certificate and the threshold for the naive speed to exceed `c`.
//! * [`oracle`]: brute-force retarded-time transport on a screen grid,
//!   independent of the closed forms.
//! * [`signaling`]: feasibility of signaling if the shadow really moved at
//!   the naive speed.
//! * [`verify`]: seeded randomized invariant checks.
//!
//! Batch work (grid classification, sweeps, verification trials) runs on
//! rayon when the `parallel` feature is enabled and sequentially otherwise;
//! output is identical either way.

pub mod exec;
pub mod kinematics;
pub mod oracle;
pub mod record;
pub mod scene;
pub mod signaling;
pub mod verify;

pub use exec::Execution;
pub use kinematics::{DominanceRatio, KinematicsReport, SubluminalityCertificate};
pub use oracle::{EmissionConvention, GridSpec, ScreenTimeline, ShadowWorldline};
pub use scene::{stop_trajectory, RawScene, Scene, SceneError, Trajectory};
pub use signaling::{SignalingReport, Verdict};
