use crate::args::{Cli, Command, CommonArgs, Format, SignalCommand, SweepArgs, VerifyArgs};
use crate::config::{self, RunConfig};
use crate::error::CliError;
use crate::output::{worldline_path, write_atomic};
use serde::Serialize;
use serde_json::{Map, Value};
use shadowkin::kinematics::{
    initial_latency, shadow_target, subluminality_certificate, total_time,
};
use shadowkin::oracle::{extract_worldline, simulate_transport, DEFAULT_SAMPLE_BUDGET};
use shadowkin::record::{self, sig6};
use shadowkin::signaling::{analyze, sweep, AxisRange, SweepSpec, DEFAULT_SWEEP_BUDGET};
use shadowkin::verify::{run_verify, Fault, VerifyConfig};
use shadowkin::{stop_trajectory, EmissionConvention, Execution, GridSpec, KinematicsReport};
use std::io::Write;
use std::path::{Path, PathBuf};

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Report(args) => report(&args),
        Command::Simulate(args) => simulate(&args),
        Command::Verify(args) => verify(&args),
        Command::Signal {
            sweep: Some(SignalCommand::Sweep(args)),
            ..
        } => signal_sweep(&args),
        Command::Signal {
            common,
            sweep: None,
        } => signal(&common),
    }
}

#[derive(Serialize)]
struct ReportDoc<'a> {
    kinematics: &'a KinematicsReport,
    certificate: &'a shadowkin::SubluminalityCertificate,
}

fn render(
    format: Format,
    doc: &impl Serialize,
    row: Map<String, Value>,
) -> Result<Vec<u8>, CliError> {
    let mut buf = Vec::new();
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut buf, doc)?;
            buf.push(b'\n');
        }
        Format::Csv => record::write_csv(&mut buf, &[row])?,
    }
    Ok(buf)
}

/// `key = value` lines with numbers at six significant digits.
fn console_lines(row: &Map<String, Value>) -> String {
    let width = row.keys().map(String::len).max().unwrap_or(0);
    let mut text = String::new();
    for (key, value) in row {
        let shown = match value.as_f64() {
            Some(x) if value.is_number() => sig6(x),
            _ => record::cell(value),
        };
        text.push_str(&format!("{key:width$} = {shown}\n"));
    }
    text
}

/// Sends the document to `out` (summary to stdout) or, without a path, the
/// document to stdout and the summary to stderr.
fn emit(out: Option<&Path>, doc: Vec<u8>, summary: &str) -> Result<(), CliError> {
    match out {
        Some(path) => {
            write_atomic(path, |w| Ok(w.write_all(&doc)?))?;
            print!("{summary}");
        }
        None => {
            std::io::stdout().write_all(&doc)?;
            eprint!("{summary}");
        }
    }
    Ok(())
}

fn report(args: &CommonArgs) -> Result<(), CliError> {
    let r = config::resolve(args)?;
    let kinematics = KinematicsReport::evaluate(&r.scene, r.ratio);
    let certificate = subluminality_certificate(&r.scene);
    let row = record::merge([record::to_map(&kinematics)?, record::to_map(&certificate)?]);
    let doc = render(
        r.format,
        &ReportDoc {
            kinematics: &kinematics,
            certificate: &certificate,
        },
        row.clone(),
    )?;
    emit(r.out.as_deref(), doc, &console_lines(&row))
}

fn delta_line(label: &str, measured: Option<f64>, analytic: f64) -> String {
    match measured {
        Some(m) => format!(
            "{label:14} measured {}  analytic {}  delta {}\n",
            sig6(m),
            sig6(analytic),
            sig6((m - analytic).abs())
        ),
        None => format!("{label:14} measured none  analytic {}\n", sig6(analytic)),
    }
}

fn simulate(args: &CommonArgs) -> Result<(), CliError> {
    let r = config::resolve(args)?;
    let scene = &r.scene;
    let traj = stop_trajectory(scene);
    let grid = GridSpec::resolve(scene, &traj, r.convention, r.dy, r.dt, r.eps)?;
    let timeline = simulate_transport(
        scene,
        &traj,
        r.convention,
        grid,
        DEFAULT_SAMPLE_BUDGET,
        Execution::default(),
    )?;
    let worldline = extract_worldline(&timeline)?;

    let out = r
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from("timeline.csv"));
    let wl_out = worldline_path(&out);
    write_atomic(&out, |w| Ok(timeline.write_csv(w)?))?;
    write_atomic(&wl_out, |w| Ok(worldline.write_csv(w)?))?;

    let onset = match r.convention {
        EmissionConvention::ProjectorOnAtZero => initial_latency(scene),
        EmissionConvention::SteadyBeam => {
            (scene.screen_distance() - scene.occluder_distance()) / scene.light_speed()
        }
    };
    let target = shadow_target(scene);
    let mut text = format!(
        "convention     {}\ngrid           dy {}  dt {}  eps {}  samples {}\n",
        r.convention,
        sig6(grid.dy),
        sig6(grid.dt),
        sig6(grid.eps),
        timeline.y_values().len() * timeline.t_values().len()
    );
    text += &delta_line("onset Y=0", timeline.first_dark_time(0.0), onset);
    if let Some(first) = worldline.first() {
        text += &format!("first shadow   T {}  Y {}\n", sig6(first.t), sig6(first.y));
    }
    text += &delta_line(
        "stop Y=S",
        timeline.first_dark_time(target),
        total_time(scene),
    );
    text += &format!(
        "timeline       {}\nworldline      {}\n",
        out.display(),
        wl_out.display()
    );
    print!("{text}");
    Ok(())
}

fn verify(args: &VerifyArgs) -> Result<(), CliError> {
    if args.trials == 0 {
        return Err(CliError::Invalid("trials must be at least 1".into()));
    }
    let light_speed = config::light_speed(args.c, None, args.natural_units);
    if !(light_speed.is_finite() && light_speed > 0.0) {
        return Err(CliError::Invalid(format!(
            "c must be a positive finite number (got {light_speed})"
        )));
    }
    let cfg = VerifyConfig {
        trials: args.trials,
        seed: args.seed,
        light_speed,
        ratio: config::ratio(args.ratio)?,
        fault: if args.inject_fault {
            Fault::HalvedLightSpeed
        } else {
            Fault::None
        },
    };
    let summary = run_verify(&cfg, Execution::default());
    let mut json = serde_json::to_string_pretty(&summary)?;
    json.push('\n');
    if let Some(out) = &args.out {
        write_atomic(out, |w| Ok(w.write_all(json.as_bytes())?))?;
    }
    match &summary.first_failure {
        None => {
            print!("{json}");
            Ok(())
        }
        Some(counterexample) => Err(CliError::Counterexample(serde_json::to_string_pretty(
            counterexample,
        )?)),
    }
}

fn signal(args: &CommonArgs) -> Result<(), CliError> {
    let r = config::resolve(args)?;
    let report = analyze(&r.scene);
    let mut json = serde_json::to_string_pretty(&report)?;
    json.push('\n');
    if let Some(out) = &r.out {
        let doc = render(r.format, &report, record::to_map(&report)?)?;
        write_atomic(out, |w| Ok(w.write_all(&doc)?))?;
    }
    print!("{json}");
    Ok(())
}

fn range(name: &str, text: &str) -> Result<AxisRange, CliError> {
    text.parse()
        .map_err(|e| CliError::Invalid(format!("{name}: {e}")))
}

fn signal_sweep(args: &SweepArgs) -> Result<(), CliError> {
    let file = RunConfig::load(args.config.as_deref())?;
    if args.steps == 0 {
        return Err(CliError::Invalid("steps must be at least 1".into()));
    }
    let speed = args
        .speed
        .or(file.scene.v)
        .ok_or_else(|| CliError::Invalid("missing scene parameter v".into()))?;
    let spec = SweepSpec {
        occluder: range("l-range", &args.l_range)?,
        displacement: range("s-range", &args.s_range)?,
        screen: range("L-range", &args.screen_range)?,
        speed,
        light_speed: config::light_speed(args.light, file.scene.c, args.natural_units),
        steps: args.steps,
    };
    let result = sweep(&spec, DEFAULT_SWEEP_BUDGET, Execution::default())?;
    let rows = result
        .rows
        .iter()
        .map(record::to_map)
        .collect::<Result<Vec<_>, _>>()?;
    write_atomic(&args.out, |w| Ok(record::write_csv(w, &rows)?))?;
    println!("{}", serde_json::to_string_pretty(&result.summary)?);
    Ok(())
}
