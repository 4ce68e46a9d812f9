use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(
    name = "shadowkin",
    version,
    about = "Shadow kinematics with a finite speed of light"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form kinematics and the subluminality certificate for one scene.
    Report(CommonArgs),
    /// Simulate light transport on a screen grid and extract the shadow worldline.
    Simulate(CommonArgs),
    /// Check the invariant suite on randomly sampled scenes.
    Verify(VerifyArgs),
    /// Signaling analysis for one scene, or a parameter sweep.
    #[command(args_conflicts_with_subcommands = true)]
    Signal {
        #[command(flatten)]
        common: CommonArgs,
        #[command(subcommand)]
        sweep: Option<SignalCommand>,
    },
}

#[derive(Debug, Subcommand)]
pub enum SignalCommand {
    /// Evaluate the signaling verdict over an (l, s, L) grid.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SceneArgs {
    /// Screen distance L.
    #[arg(long = "L", value_name = "METRES")]
    pub screen: Option<f64>,
    /// Occluder distance l.
    #[arg(long = "l", value_name = "METRES")]
    pub occluder: Option<f64>,
    /// Occluder displacement s.
    #[arg(long = "s", value_name = "METRES")]
    pub displacement: Option<f64>,
    /// Occluder speed v.
    #[arg(long = "v", value_name = "M/S")]
    pub speed: Option<f64>,
    /// Speed of light c.
    #[arg(long = "c", value_name = "M/S")]
    pub light: Option<f64>,
    /// Use c = 1 unless --c or the config sets it.
    #[arg(long)]
    pub natural_units: bool,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// JSON run configuration; command-line flags take precedence.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Emission convention: projector-on or steady-beam.
    #[arg(long)]
    pub convention: Option<String>,
    #[arg(long)]
    pub dy: Option<f64>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub eps: Option<f64>,
    /// Dominance ratio for the approximation regime check.
    #[arg(long)]
    pub ratio: Option<f64>,
    #[command(flatten)]
    pub scene: SceneArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 100_000)]
    pub trials: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long)]
    pub ratio: Option<f64>,
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long)]
    pub natural_units: bool,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Corrupt the subluminality check to exercise the failure path.
    #[arg(long, hide = true)]
    pub inject_fault: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[arg(long = "l-range", value_name = "LO:HI")]
    pub l_range: String,
    #[arg(long = "s-range", value_name = "LO:HI")]
    pub s_range: String,
    #[arg(long = "L-range", value_name = "LO:HI")]
    pub screen_range: String,
    /// Grid points per axis.
    #[arg(long, default_value_t = 50)]
    pub steps: usize,
    #[arg(long = "v")]
    pub speed: Option<f64>,
    #[arg(long = "c")]
    pub light: Option<f64>,
    #[arg(long)]
    pub natural_units: bool,
    /// Sweep CSV path.
    #[arg(long, value_name = "PATH", default_value = "sweep.csv")]
    pub out: PathBuf,
}
