//! Run configuration: JSON file values merged under command-line flags.

use crate::args::{CommonArgs, Format, SceneArgs};
use crate::error::CliError;
use serde::Deserialize;
use shadowkin::kinematics::DominanceRatio;
use shadowkin::scene::{RawScene, DEFAULT_LIGHT_SPEED};
use shadowkin::{EmissionConvention, Scene};
use std::path::{Path, PathBuf};

/// Scene fields as they may appear in a config file; any may be left for flags.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialScene {
    #[serde(rename = "L")]
    pub screen: Option<f64>,
    #[serde(rename = "l")]
    pub occluder: Option<f64>,
    pub s: Option<f64>,
    pub v: Option<f64>,
    pub c: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub scene: PartialScene,
    pub convention: Option<String>,
    pub dy: Option<f64>,
    pub dt: Option<f64>,
    pub eps: Option<f64>,
    pub dominance_ratio: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(RunConfig::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))
    }
}

/// Everything a single-scene command needs, after precedence is applied.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub scene: Scene,
    pub convention: EmissionConvention,
    pub dy: Option<f64>,
    pub dt: Option<f64>,
    pub eps: Option<f64>,
    pub ratio: DominanceRatio,
    pub out: Option<PathBuf>,
    pub format: Format,
}

pub fn light_speed(flag: Option<f64>, file: Option<f64>, natural_units: bool) -> f64 {
    flag.or(file).unwrap_or(if natural_units {
        1.0
    } else {
        DEFAULT_LIGHT_SPEED
    })
}

fn require(name: &str, value: Option<f64>) -> Result<f64, CliError> {
    value.ok_or_else(|| CliError::Invalid(format!("missing scene parameter {name}")))
}

pub fn scene(flags: &SceneArgs, file: &PartialScene) -> Result<Scene, CliError> {
    let raw = RawScene::new(
        require("L", flags.screen.or(file.screen))?,
        require("l", flags.occluder.or(file.occluder))?,
        require("s", flags.displacement.or(file.s))?,
        require("v", flags.speed.or(file.v))?,
        light_speed(flags.light, file.c, flags.natural_units),
    );
    Ok(raw.validate()?)
}

fn positive(name: &str, value: Option<f64>) -> Result<Option<f64>, CliError> {
    match value {
        Some(x) if !(x.is_finite() && x > 0.0) => Err(CliError::Invalid(format!(
            "{name} must be a positive finite number (got {x})"
        ))),
        other => Ok(other),
    }
}

pub fn ratio(value: Option<f64>) -> Result<DominanceRatio, CliError> {
    match value {
        None => Ok(DominanceRatio::DEFAULT),
        Some(x) => DominanceRatio::new(x).map_err(|e| CliError::Invalid(e.to_string())),
    }
}

pub fn resolve(args: &CommonArgs) -> Result<Resolved, CliError> {
    let file = RunConfig::load(args.config.as_deref())?;
    let scene = scene(&args.scene, &file.scene)?;
    let convention = match args.convention.as_ref().or(file.convention.as_ref()) {
        None => EmissionConvention::default(),
        Some(name) => name.parse().map_err(|_| {
            CliError::Invalid(format!(
                "convention must be projector-on or steady-beam (got {name:?})"
            ))
        })?,
    };
    Ok(Resolved {
        scene,
        convention,
        dy: positive("dy", args.dy.or(file.dy))?,
        dt: positive("dt", args.dt.or(file.dt))?,
        eps: positive("eps", args.eps.or(file.eps))?,
        ratio: ratio(args.ratio.or(file.dominance_ratio))?,
        out: args.out.clone().or(file.out),
        format: args.format.or(file.format).unwrap_or(Format::Json),
    })
}
