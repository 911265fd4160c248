//! Command-line driver for the hierarchy simulator.
//!
//! Parameter resolution is layered, later layers overriding earlier ones:
//! built-in defaults, then the scenario preset, then the config file, then
//! repeated `--set key=value` pairs, then the dedicated flags. Every CSV and
//! JSON artifact embeds the fully resolved parameter set so a run can be
//! reproduced from its own output alone.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical-invariant
//! breach, 4 hierarchy-convergence failure.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use heom::analytic;
use heom::hierarchy::{converge_depth, init_hierarchy, integrate};
use heom::model::excited_state;
use heom::observables::{nonmarkovianity, NonMarkovReport, Trajectory};
use heom::scenario::{self, CONVERGENCE_TOL, DEFAULT_N_SAMPLES, DEFAULT_T_C};
use heom::SystemParams;

#[derive(Parser)]
#[command(
    name = "heom",
    about = "Dissipative qubit-oscillator dynamics via a hierarchy of auxiliary density operators",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate the hierarchy and write t, <sigma_z>, trace error and
    /// purity as CSV.
    Dynamics(CommonArgs),
    /// Search random orthogonal state pairs for the maximal accumulated
    /// information backflow; write a JSON report.
    Nonmarkov(CommonArgs),
    /// Analytic long-time population difference, optionally checked against
    /// a full simulation.
    Steady(SteadyArgs),
    /// Backflow measure across a list of spectral-width ratios, with a
    /// monotonicity verdict.
    Sweep(SweepArgs),
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Named parameter preset (see `--scenario help` for the list).
    #[arg(long)]
    scenario: Option<String>,
    /// TOML config file applied on top of the preset.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override one parameter, e.g. `--set lambda=0.05` (repeatable).
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    #[arg(long)]
    t_max: Option<f64>,
    #[arg(long)]
    dt: Option<f64>,
    /// Pin the hierarchy depth instead of certifying it by convergence.
    #[arg(long)]
    depth: Option<usize>,
    #[arg(long)]
    n_osc: Option<usize>,
    /// PRNG seed for the initial-state-pair search.
    #[arg(long)]
    seed: Option<u64>,
    /// Number of sampled initial-state pairs.
    #[arg(long)]
    samples: Option<usize>,
    /// Upper bound of the backflow time integration.
    #[arg(long)]
    t_c: Option<f64>,
}

#[derive(Args)]
struct SteadyArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Also run the hierarchy and report the long-time average and its gap
    /// to the prediction.
    #[arg(long)]
    simulate: bool,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Spectral-width ratios lambda/gamma to sweep.
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.3,0.5,1,2")]
    ratios: Vec<f64>,
}

enum CliError {
    Config(String),
    Sim(heom::Error),
}

impl From<heom::Error> for CliError {
    fn from(e: heom::Error) -> Self {
        match e {
            heom::Error::InvalidParams(msg) => CliError::Config(msg),
            other => CliError::Sim(other),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Sim(heom::Error::InvariantBreach { .. }) => 3,
            CliError::Sim(heom::Error::ConvergenceFailure { .. }) => 4,
            CliError::Sim(_) => 2,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Config(msg) => format!("configuration error: {msg}"),
            CliError::Sim(e) => e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Dynamics(args) => cmd_dynamics(&args),
        Command::Nonmarkov(args) => cmd_nonmarkov(&args),
        Command::Steady(args) => cmd_steady(&args),
        Command::Sweep(args) => cmd_sweep(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

/// Optional keys of a TOML config file; unknown keys are rejected.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    scenario: Option<String>,
    epsilon: Option<f64>,
    delta: Option<f64>,
    omega0: Option<f64>,
    g0: Option<f64>,
    zeta: Option<f64>,
    alpha: Option<f64>,
    gamma: Option<f64>,
    lambda: Option<f64>,
    n_osc: Option<usize>,
    depth: Option<usize>,
    dt: Option<f64>,
    t_max: Option<f64>,
    record_every: Option<usize>,
    samples: Option<usize>,
    seed: Option<u64>,
    t_c: Option<f64>,
}

/// Fully resolved run configuration.
struct Resolved {
    scenario: Option<String>,
    params: SystemParams,
    /// Set when any layer fixed the depth explicitly; convergence
    /// certification is skipped in that case.
    depth_pinned: bool,
    record_every: usize,
    samples: usize,
    seed: u64,
    t_c: f64,
}

fn base_params(n_osc: usize) -> SystemParams {
    SystemParams {
        epsilon: 0.0,
        delta: 0.5,
        omega0: 1.0,
        g0: 0.0,
        alpha: 0.0,
        gamma: 0.5,
        lambda: 0.25,
        n_osc,
        hierarchy_depth: 6,
        dt: 0.01,
        t_max: 100.0,
    }
}

fn resolve(args: &CommonArgs, default_n_osc: usize) -> Result<Resolved, CliError> {
    let file: FileConfig = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| {
                CliError::Config(format!("cannot read config {}: {e}", path.display()))
            })?;
            toml::from_str(&text)
                .map_err(|e| CliError::Config(format!("bad config {}: {e}", path.display())))?
        }
        None => FileConfig::default(),
    };

    let scenario_name = args.scenario.clone().or(file.scenario.clone());
    let mut params = match &scenario_name {
        Some(name) => scenario::scenario(name).ok_or_else(|| {
            CliError::Config(format!(
                "unknown scenario `{name}`; available: {}",
                scenario::SCENARIO_NAMES.join(", ")
            ))
        })?,
        None => base_params(default_n_osc),
    };

    let mut depth_pinned = false;
    let mut record_every = 10usize;
    let mut samples = DEFAULT_N_SAMPLES;
    let mut seed = 1u64;
    let mut t_c = DEFAULT_T_C;

    // Config-file keys.
    let fc = &file;
    for (key, value) in [
        ("epsilon", fc.epsilon),
        ("delta", fc.delta),
        ("omega0", fc.omega0),
        ("g0", fc.g0),
        ("zeta", fc.zeta),
        ("alpha", fc.alpha),
        ("gamma", fc.gamma),
        ("lambda", fc.lambda),
        ("dt", fc.dt),
        ("t_max", fc.t_max),
        ("t_c", fc.t_c),
    ] {
        if let Some(v) = value {
            apply_numeric(
                &mut params,
                &mut depth_pinned,
                &mut record_every,
                &mut samples,
                &mut seed,
                &mut t_c,
                key,
                v,
            )?;
        }
    }
    if let Some(v) = fc.n_osc {
        params.n_osc = v;
    }
    if let Some(v) = fc.depth {
        params.hierarchy_depth = v;
        depth_pinned = true;
    }
    if let Some(v) = fc.record_every {
        record_every = v;
    }
    if let Some(v) = fc.samples {
        samples = v;
    }
    if let Some(v) = fc.seed {
        seed = v;
    }

    // --set pairs, in order.
    for pair in &args.set {
        let (key, value) = pair.split_once('=').ok_or_else(|| {
            CliError::Config(format!("--set expects KEY=VALUE, got `{pair}`"))
        })?;
        match key {
            "n_osc" => {
                params.n_osc = parse_num::<usize>(key, value)?;
            }
            "depth" => {
                params.hierarchy_depth = parse_num::<usize>(key, value)?;
                depth_pinned = true;
            }
            "record_every" => record_every = parse_num::<usize>(key, value)?,
            "samples" => samples = parse_num::<usize>(key, value)?,
            "seed" => seed = parse_num::<u64>(key, value)?,
            _ => {
                let v = parse_num::<f64>(key, value)?;
                apply_numeric(
                    &mut params,
                    &mut depth_pinned,
                    &mut record_every,
                    &mut samples,
                    &mut seed,
                    &mut t_c,
                    key,
                    v,
                )?;
            }
        }
    }

    // Dedicated flags win last.
    if let Some(v) = args.t_max {
        params.t_max = v;
    }
    if let Some(v) = args.dt {
        params.dt = v;
    }
    if let Some(v) = args.depth {
        params.hierarchy_depth = v;
        depth_pinned = true;
    }
    if let Some(v) = args.n_osc {
        params.n_osc = v;
    }
    if let Some(v) = args.seed {
        seed = v;
    }
    if let Some(v) = args.samples {
        samples = v;
    }
    if let Some(v) = args.t_c {
        t_c = v;
    }

    params.validate()?;
    Ok(Resolved {
        scenario: scenario_name,
        params,
        depth_pinned,
        record_every,
        samples,
        seed,
        t_c,
    })
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value
        .parse()
        .map_err(|_| CliError::Config(format!("cannot parse value `{value}` for key `{key}`")))
}

#[allow(clippy::too_many_arguments)]
fn apply_numeric(
    params: &mut SystemParams,
    depth_pinned: &mut bool,
    record_every: &mut usize,
    samples: &mut usize,
    seed: &mut u64,
    t_c: &mut f64,
    key: &str,
    v: f64,
) -> Result<(), CliError> {
    match key {
        "epsilon" => params.epsilon = v,
        "delta" => params.delta = v,
        "omega0" => params.omega0 = v,
        "g0" => params.g0 = v,
        "zeta" => {
            if v == 0.0 {
                params.g0 = 0.0;
            } else if params.g0 == 0.0 {
                return Err(CliError::Config(
                    "setting zeta requires a nonzero g0 (set g0 first)".into(),
                ));
            } else {
                params.omega0 = params.g0 / v;
            }
        }
        "alpha" => params.alpha = v,
        "gamma" => params.gamma = v,
        "lambda" => params.lambda = v,
        "dt" => params.dt = v,
        "t_max" => params.t_max = v,
        "t_c" => *t_c = v,
        "depth" => {
            params.hierarchy_depth = v as usize;
            *depth_pinned = true;
        }
        "n_osc" => params.n_osc = v as usize,
        "record_every" => *record_every = v as usize,
        "samples" => *samples = v as usize,
        "seed" => *seed = v as u64,
        other => {
            return Err(CliError::Config(format!(
                "unknown parameter key `{other}`"
            )))
        }
    }
    Ok(())
}

/// Certify the hierarchy depth by convergence unless it was pinned.
/// Returns the final parameter set and whether certification ran.
fn certified_params(r: &Resolved, t_max: f64) -> Result<(SystemParams, bool), CliError> {
    let mut params = r.params.clone();
    params.t_max = t_max;
    if r.depth_pinned {
        return Ok((params, false));
    }
    let (depth, _) = converge_depth(&params, &excited_state(), CONVERGENCE_TOL)?;
    params.hierarchy_depth = depth;
    Ok((params, true))
}

fn write_output(out: &Option<PathBuf>, contents: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, contents).map_err(|e| {
            CliError::Config(format!("cannot write {}: {e}", path.display()))
        }),
        None => {
            std::io::stdout()
                .write_all(contents.as_bytes())
                .map_err(|e| CliError::Config(format!("cannot write to stdout: {e}")))
        }
    }
}

fn param_metadata(scenario: &Option<String>, p: &SystemParams) -> Vec<(String, String)> {
    let mut kv = Vec::new();
    if let Some(name) = scenario {
        kv.push(("scenario".to_string(), name.clone()));
    }
    kv.push(("epsilon".into(), p.epsilon.to_string()));
    kv.push(("delta".into(), p.delta.to_string()));
    kv.push(("omega0".into(), p.omega0.to_string()));
    kv.push(("g0".into(), p.g0.to_string()));
    kv.push(("zeta".into(), p.zeta().to_string()));
    kv.push(("alpha".into(), p.alpha.to_string()));
    kv.push(("gamma".into(), p.gamma.to_string()));
    kv.push(("lambda".into(), p.lambda.to_string()));
    kv.push(("n_osc".into(), p.n_osc.to_string()));
    kv.push(("depth".into(), p.hierarchy_depth.to_string()));
    kv.push(("dt".into(), p.dt.to_string()));
    kv.push(("t_max".into(), p.t_max.to_string()));
    kv
}

fn cmd_dynamics(args: &CommonArgs) -> Result<(), CliError> {
    let resolved = resolve(args, 8)?;
    let (params, certified) = certified_params(&resolved, resolved.params.t_max)?;
    let state = init_hierarchy(&excited_state(), &params)?;
    let traj = integrate(state, params.t_max, params.dt, resolved.record_every)?;

    let mut out = String::new();
    for (k, v) in param_metadata(&resolved.scenario, &params) {
        let _ = writeln!(out, "# {k} = {v}");
    }
    let _ = writeln!(out, "# depth_converged = {certified}");
    let _ = writeln!(out, "# record_every = {}", resolved.record_every);
    let _ = writeln!(out, "t,sigma_z,trace_err,purity");
    for i in 0..traj.times.len() {
        let _ = writeln!(
            out,
            "{:.11e},{:.11e},{:.11e},{:.11e}",
            traj.times[i], traj.sigma_z[i], traj.trace_err[i], traj.purity[i]
        );
    }
    write_output(&args.out, &out)
}

#[derive(Serialize)]
struct NonmarkovArtifact<'a> {
    command: &'a str,
    scenario: Option<String>,
    params: SystemParams,
    depth_converged: bool,
    n_samples: usize,
    report: NonMarkovReport,
}

fn cmd_nonmarkov(args: &CommonArgs) -> Result<(), CliError> {
    let resolved = resolve(args, 4)?;
    let (params, certified) = certified_params(&resolved, resolved.t_c)?;
    let report = run_measure(&params, resolved.t_c, resolved.samples, resolved.seed)?;
    let artifact = NonmarkovArtifact {
        command: "nonmarkov",
        scenario: resolved.scenario.clone(),
        params,
        depth_converged: certified,
        n_samples: resolved.samples,
        report,
    };
    write_json(&args.out, &artifact)
}

/// The measure integrates on the step grid, so recording is per step.
fn run_measure(
    params: &SystemParams,
    t_c: f64,
    samples: usize,
    seed: u64,
) -> Result<NonMarkovReport, CliError> {
    Ok(nonmarkovianity(params, t_c, samples, seed)?)
}

#[derive(Serialize)]
struct SimulatedSteady {
    depth: usize,
    depth_converged: bool,
    window_fraction: f64,
    long_time_mean: f64,
    gap: f64,
}

#[derive(Serialize)]
struct SteadyArtifact<'a> {
    command: &'a str,
    scenario: Option<String>,
    params: SystemParams,
    zeta: f64,
    eta: f64,
    prediction: f64,
    simulated: Option<SimulatedSteady>,
}

fn cmd_steady(args: &SteadyArgs) -> Result<(), CliError> {
    let resolved = resolve(&args.common, 8)?;
    let params = resolved.params.clone();
    let eta = if params.g0 == 0.0 {
        1.0
    } else {
        analytic::renormalization_eta(params.g0, params.omega0)?
    };
    let prediction = analytic::steady_population(&params)?;

    let simulated = if args.simulate {
        let (sim_params, certified) = certified_params(&resolved, params.t_max)?;
        let traj = run_trajectory(&sim_params, resolved.record_every)?;
        let mean = traj.steady_mean(0.2);
        Some(SimulatedSteady {
            depth: sim_params.hierarchy_depth,
            depth_converged: certified,
            window_fraction: 0.2,
            long_time_mean: mean,
            gap: (mean - prediction).abs(),
        })
    } else {
        None
    };

    let artifact = SteadyArtifact {
        command: "steady",
        scenario: resolved.scenario.clone(),
        params,
        zeta: resolved.params.zeta(),
        eta,
        prediction,
        simulated,
    };
    write_json(&args.common.out, &artifact)
}

fn run_trajectory(params: &SystemParams, record_every: usize) -> Result<Trajectory, CliError> {
    let state = init_hierarchy(&excited_state(), params)?;
    Ok(integrate(state, params.t_max, params.dt, record_every)?)
}

#[derive(Serialize)]
struct SweepPoint {
    ratio: f64,
    lambda: f64,
    depth: usize,
    measure: f64,
}

#[derive(Serialize)]
struct SweepArtifact<'a> {
    command: &'a str,
    scenario: Option<String>,
    base_params: SystemParams,
    t_c: f64,
    seed: u64,
    n_samples: usize,
    ratios: Vec<f64>,
    points: Vec<SweepPoint>,
    non_increasing: bool,
}

fn cmd_sweep(args: &SweepArgs) -> Result<(), CliError> {
    if args.ratios.is_empty() {
        return Err(CliError::Config("sweep needs at least one ratio".into()));
    }
    let resolved = resolve(&args.common, 4)?;

    // Points are independent jobs; results are collected in ratio order.
    let points: Vec<SweepPoint> = args
        .ratios
        .par_iter()
        .map(|&ratio| -> Result<SweepPoint, CliError> {
            let mut point_resolved = Resolved {
                scenario: resolved.scenario.clone(),
                params: resolved.params.clone(),
                depth_pinned: resolved.depth_pinned,
                record_every: resolved.record_every,
                samples: resolved.samples,
                seed: resolved.seed,
                t_c: resolved.t_c,
            };
            point_resolved.params.lambda = ratio * point_resolved.params.gamma;
            let (params, _) = certified_params(&point_resolved, point_resolved.t_c)?;
            let report = run_measure(&params, resolved.t_c, resolved.samples, resolved.seed)?;
            Ok(SweepPoint {
                ratio,
                lambda: params.lambda,
                depth: params.hierarchy_depth,
                measure: report.best.measure,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;

    let non_increasing = points
        .windows(2)
        .all(|w| w[1].measure <= w[0].measure + 1e-12);

    let artifact = SweepArtifact {
        command: "sweep",
        scenario: resolved.scenario.clone(),
        base_params: resolved.params.clone(),
        t_c: resolved.t_c,
        seed: resolved.seed,
        n_samples: resolved.samples,
        ratios: args.ratios.clone(),
        points,
        non_increasing,
    };
    write_json(&args.common.out, &artifact)
}

fn write_json<T: Serialize>(out: &Option<PathBuf>, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Config(format!("serialization failed: {e}")))?;
    text.push('\n');
    write_output(out, &text)
}
