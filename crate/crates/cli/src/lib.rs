//! Command-line front end. [`run`] parses arguments, resolves a [`RunConfig`]
//! from an optional JSON file plus flag overrides, executes one subcommand
//! and returns the process exit code (0 ok, 2 invalid input, 3 numerical
//! failure).

use std::f64::consts::FRAC_PI_4;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use saddlewalk::analysis::{self, CycleOptions, GridSpec, RegionSpec};
use saddlewalk::landscape::check_derivatives;
use saddlewalk::singularity::{gap_minima_2d, locate_2d, locate_nd, SingularityReport};
use saddlewalk::{flows, io, reduced, Dynamics, EnergyModel, IntegratorConfig, Landscape, ModelSpec};

#[derive(Debug, Parser)]
#[command(name = "saddlewalk", version, about = "Saddle search dynamics and their singularities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Integrate one trajectory
    Simulate(Flags),
    /// Label a grid of initial conditions by their stop events
    Portrait(Flags),
    /// Locate and classify singularities
    Singularities(Flags),
    /// Fixed points of the reduced planar system
    Reduce(Flags),
    /// Measure the GAD limit cycle around a singularity
    Cycle(Flags),
    /// Sampled index-1 certificate of a gradient-norm sublevel component
    Certify(Flags),
    /// GAD from a disk of initial points on a globally index-1 model
    Benchmark(Flags),
    /// Compare analytic derivatives with finite differences
    CheckDerivs(Flags),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, Args)]
struct Flags {
    /// JSON run configuration; flags override its values
    #[arg(long)]
    config: Option<PathBuf>,
    /// doublewell1d, doublewell2d, coercive, cubic, isotropic, plane3d or quadratic
    #[arg(long)]
    model: Option<String>,
    #[arg(long = "dyn", value_parser = parse_dynamics)]
    dynamics: Option<Dynamics>,
    #[arg(long)]
    eps: Option<f64>,
    /// Size of the smooth perturbation added to the model
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<f64>,
    /// Sign parameter of the cubic model
    #[arg(long, allow_hyphen_values = true)]
    s: Option<f64>,
    /// Initial point, comma separated
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    x0: Option<Vec<f64>>,
    /// Initial orientation, comma separated
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    v0: Option<Vec<f64>>,
    #[arg(long)]
    tmax: Option<f64>,
    /// Box as xlo,xhi,ylo,yhi
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    grid: Option<Vec<f64>>,
    #[arg(long)]
    nx: Option<usize>,
    #[arg(long)]
    ny: Option<usize>,
    /// Gradient-norm level for certify
    #[arg(long)]
    level: Option<f64>,
    /// Half width of the certify box
    #[arg(long)]
    half: Option<f64>,
    /// Cells per axis for certify
    #[arg(long)]
    res: Option<usize>,
    /// Initial-condition radius for benchmark
    #[arg(long)]
    radius: Option<f64>,
    /// Number of points for benchmark and check-derivs
    #[arg(long)]
    points: Option<usize>,
    /// Reduced-system trajectory output (reduce, needs --x0 r,omega)
    #[arg(long)]
    traj: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Cap on worker threads for grid scans
    #[arg(long)]
    threads: Option<usize>,
    /// Validate and print the resolved configuration without computing
    #[arg(long)]
    dry_run: bool,
}

fn parse_dynamics(s: &str) -> Result<Dynamics, String> {
    s.parse::<Dynamics>().map_err(|e| e.to_string())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct Output {
    pub path: Option<PathBuf>,
    pub format: Format,
}

/// Command-specific parameters; unset values take per-command defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dynamics: Option<Dynamics>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x0: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v0: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub region: Option<RegionSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cycle: Option<CycleOptions>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub traj: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub model: Option<ModelSpec>,
    pub params: Params,
    pub integrator: IntegratorConfig,
    pub output: Output,
    /// Seed for grid jitter and random sample points.
    pub seed: u64,
}

#[derive(Debug)]
enum Failure {
    Invalid(String),
    Numerical(String),
}

impl From<saddlewalk::Error> for Failure {
    fn from(e: saddlewalk::Error) -> Self {
        if e.is_numerical() {
            Failure::Numerical(e.to_string())
        } else {
            Failure::Invalid(e.to_string())
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn invalid<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(Failure::Invalid(msg.into()))
}

const MODEL_NAMES: [&str; 7] = [
    "doublewell1d",
    "doublewell2d",
    "coercive",
    "cubic",
    "isotropic",
    "plane3d",
    "quadratic",
];

fn model_from_name(name: &str, f: &Flags) -> CliResult<ModelSpec> {
    let alpha = f.alpha.unwrap_or(FRAC_PI_4);
    let lambda = f.lambda.unwrap_or(1.0);
    Ok(match name {
        "doublewell1d" => ModelSpec::double_well_1d(),
        "doublewell2d" => ModelSpec::double_well_2d(f.alpha.unwrap_or(6.0)),
        "coercive" => ModelSpec::coercive_quartic(),
        "cubic" => ModelSpec::CubicSingularity {
            alpha,
            lambda,
            s: f.s.unwrap_or(1.0),
        },
        "isotropic" => ModelSpec::isotropic(alpha, lambda),
        "plane3d" => ModelSpec::singular_plane_3d(),
        "quadratic" => ModelSpec::quadratic_diag(&[-1.0, 2.0]),
        other => {
            return invalid(format!(
                "unknown model '{other}'; expected one of {}",
                MODEL_NAMES.join(", ")
            ))
        }
    })
}

/// Applies `--alpha`, `--lambda` and `--s` to a model read from a config file.
fn override_params(m: &mut ModelSpec, f: &Flags) {
    match m {
        ModelSpec::DoubleWell2D { alpha } => {
            *alpha = f.alpha.unwrap_or(*alpha);
        }
        ModelSpec::CubicSingularity { alpha, lambda, s } => {
            *alpha = f.alpha.unwrap_or(*alpha);
            *lambda = f.lambda.unwrap_or(*lambda);
            *s = f.s.unwrap_or(*s);
        }
        ModelSpec::IsotropicCanonical { alpha, lambda } | ModelSpec::MultiDE0 { alpha, lambda, .. } => {
            *alpha = f.alpha.unwrap_or(*alpha);
            *lambda = f.lambda.unwrap_or(*lambda);
        }
        ModelSpec::Perturbed { base, .. } => override_params(base, f),
        _ => {}
    }
}

fn default_model(kind: &Command) -> &'static str {
    match kind {
        Command::Simulate(_) | Command::CheckDerivs(_) => "doublewell2d",
        Command::Portrait(_) => "doublewell2d",
        Command::Singularities(_) => "coercive",
        Command::Cycle(_) | Command::Reduce(_) => "isotropic",
        Command::Certify(_) => "doublewell2d",
        Command::Benchmark(_) => "quadratic",
    }
}

fn flags_of(c: &Command) -> &Flags {
    match c {
        Command::Simulate(f)
        | Command::Portrait(f)
        | Command::Singularities(f)
        | Command::Reduce(f)
        | Command::Cycle(f)
        | Command::Certify(f)
        | Command::Benchmark(f)
        | Command::CheckDerivs(f) => f,
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Simulate(_) => "simulate",
        Command::Portrait(_) => "portrait",
        Command::Singularities(_) => "singularities",
        Command::Reduce(_) => "reduce",
        Command::Cycle(_) => "cycle",
        Command::Certify(_) => "certify",
        Command::Benchmark(_) => "benchmark",
        Command::CheckDerivs(_) => "check-derivs",
    }
}

/// Reads the config file (if any) and applies flag overrides.
fn resolve(cmd: &Command) -> CliResult<RunConfig> {
    let f = flags_of(cmd);
    let mut cfg = match &f.config {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| Failure::Invalid(format!("cannot read config {}: {e}", p.display())))?;
            serde_json::from_str::<RunConfig>(&text)
                .map_err(|e| Failure::Invalid(format!("config {}: {e}", p.display())))?
        }
        None => RunConfig::default(),
    };

    let from_flags = f.model.is_some() || cfg.model.is_none();
    if from_flags {
        let name = f.model.as_deref().unwrap_or(default_model(cmd));
        cfg.model = Some(model_from_name(name, f)?);
    } else if let Some(m) = cfg.model.as_mut() {
        override_params(m, f);
    }
    if let Some(d) = f.delta {
        if d != 0.0 {
            let base = cfg.model.take().expect("model resolved above");
            cfg.model = Some(ModelSpec::perturbed(base, d));
        }
    }

    let p = &mut cfg.params;
    if f.dynamics.is_some() {
        p.dynamics = f.dynamics;
    }
    if f.x0.is_some() {
        p.x0 = f.x0.clone();
    }
    if f.v0.is_some() {
        p.v0 = f.v0.clone();
    }
    if f.alpha.is_some() {
        p.alpha = f.alpha;
    }
    if f.radius.is_some() {
        p.radius = f.radius;
    }
    if f.points.is_some() {
        p.points = f.points;
    }
    if f.traj.is_some() {
        p.traj = f.traj.clone();
    }
    if f.threads.is_some() {
        p.threads = f.threads;
    }
    if let Some(e) = f.eps {
        cfg.integrator.eps = e;
    }
    if let Some(t) = f.tmax {
        cfg.integrator.t_max = t;
    }
    if let Some(s) = f.seed {
        cfg.seed = s;
    }
    if f.out.is_some() {
        cfg.output.path = f.out.clone();
    }
    if let Some(fmt) = f.format {
        cfg.output.format = fmt;
    }

    if matches!(cmd, Command::Portrait(_)) {
        let mut g = p.grid.clone().unwrap_or_else(|| GridSpec::new([-2.0, -1.0], [2.0, 1.0], 41, 21));
        if let Some(b) = &f.grid {
            if b.len() != 4 {
                return invalid("--grid expects xlo,xhi,ylo,yhi");
            }
            g.lo = [b[0], b[2]];
            g.hi = [b[1], b[3]];
        }
        if let Some(n) = f.nx {
            g.nx = n;
        }
        if let Some(n) = f.ny {
            g.ny = n;
        }
        g.seed = cfg.seed;
        p.grid = Some(g);
    }
    if matches!(cmd, Command::Certify(_)) {
        let n = cfg.model.as_ref().expect("model resolved").build()?.dim();
        let mut r = p
            .region
            .clone()
            .unwrap_or_else(|| RegionSpec::square(1.0, 0.6, 48, &vec![0.0; n]));
        if let Some(l) = f.level {
            r.level = l;
        }
        if let Some(h) = f.half {
            r.lo = vec![-h; n];
            r.hi = vec![h; n];
        }
        if let Some(k) = f.res {
            r.resolution = vec![k; n];
        }
        if let Some(x) = &f.x0 {
            r.seed = x.clone();
        }
        p.region = Some(r);
    }
    if matches!(cmd, Command::Cycle(_)) && p.cycle.is_none() {
        p.cycle = Some(CycleOptions::default());
    }
    if matches!(cmd, Command::Cycle(_)) && f.eps.is_none() && f.config.is_none() {
        cfg.integrator.eps = 0.01;
    }
    if matches!(cmd, Command::Benchmark(_)) && f.eps.is_none() && f.config.is_none() {
        cfg.integrator.eps = 0.05;
    }
    cfg.integrator.validate()?;
    Ok(cfg)
}

fn vector(v: &[f64], n: usize, what: &str) -> CliResult<DVector<f64>> {
    if v.len() != n {
        return invalid(format!("{what} has {} components, model dimension is {n}", v.len()));
    }
    Ok(DVector::from_column_slice(v))
}

fn fmt6(v: f64) -> String {
    let s = format!("{v:.6}");
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

fn fmt_point(x: &[f64]) -> String {
    x.iter().map(|&c| fmt6(c)).collect::<Vec<_>>().join(",")
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable output");
    s.push('\n');
    s
}

struct Artifact {
    body: String,
    summary: String,
    ok: bool,
}

fn locate_any(model: &EnergyModel, guess: &DVector<f64>) -> CliResult<SingularityReport> {
    Ok(if model.dim() == 2 {
        locate_2d(model, guess)?
    } else {
        locate_nd(model, guess)?
    })
}

fn execute(cmd: &Command, cfg: &RunConfig) -> CliResult<Artifact> {
    let spec = cfg.model.as_ref().expect("model resolved");
    let model = spec.build()?;
    let n = model.dim();
    let p = &cfg.params;
    let json = cfg.output.format == Format::Json;
    let ic = &cfg.integrator;

    match cmd {
        Command::Simulate(_) => {
            let x0 = match &p.x0 {
                Some(x) => vector(x, n, "x0")?,
                None => return invalid("simulate needs an initial point (--x0)"),
            };
            let v0 = p.v0.as_ref().map(|v| vector(v, n, "v0")).transpose()?;
            let dynamics = p.dynamics.unwrap_or(Dynamics::Isd);
            let t = flows::integrate(&model, dynamics, &x0, v0.as_ref(), ic)?;
            Ok(Artifact {
                body: if json { io::trajectory_json(&t) } else { io::trajectory_csv(&t) },
                summary: format!("{} x*={}", t.stop.tag(), fmt_point(t.stop.x())),
                ok: true,
            })
        }
        Command::Portrait(_) => {
            let grid = p.grid.as_ref().expect("grid resolved");
            let dynamics = p.dynamics.unwrap_or(Dynamics::Isd);
            let map = analysis::basin_scan(&model, dynamics, grid, ic)?;
            let counts: Vec<String> = analysis::LABELS
                .iter()
                .enumerate()
                .filter_map(|(k, l)| match map.count(k as u8) {
                    0 => None,
                    c => Some(format!("{l}={c}")),
                })
                .collect();
            Ok(Artifact {
                body: if json { to_json(&map) } else { map.to_csv() },
                summary: format!("{} cells: {}", map.cells.len(), counts.join(" ")),
                ok: true,
            })
        }
        Command::Singularities(_) => {
            let mut found: Vec<SingularityReport> = Vec::new();
            if n == 2 {
                let g = p.grid.clone().unwrap_or_else(|| GridSpec::new([-2.0, -2.0], [2.0, 2.0], 81, 81));
                let mut guesses: Vec<DVector<f64>> = gap_minima_2d(&model, g.lo, g.hi, g.nx.max(g.ny), 0.5)
                    .into_iter()
                    .map(|(q, _)| DVector::from_column_slice(&q))
                    .collect();
                if let Some(x) = &p.x0 {
                    guesses.insert(0, vector(x, n, "x0")?);
                }
                for q in guesses {
                    if let Ok(r) = locate_2d(&model, &q) {
                        if !found.iter().any(|s| (s.z() - r.z()).norm() < 1e-6) {
                            found.push(r);
                        }
                    }
                }
            } else {
                let guess = match &p.x0 {
                    Some(x) => vector(x, n, "x0")?,
                    None => DVector::zeros(n),
                };
                found.push(locate_nd(&model, &guess)?);
            }
            let list: Vec<String> = found
                .iter()
                .map(|s| format!("{:?} at ({})", s.class, fmt_point(&s.z)))
                .collect();
            Ok(Artifact {
                body: to_json(&found),
                summary: format!("{} singularities: {}", found.len(), list.join("; ")),
                ok: true,
            })
        }
        Command::Reduce(_) => {
            let alpha = p.alpha.unwrap_or(FRAC_PI_4);
            let report = reduced::fixed_points(alpha)?;
            if let Some(path) = &p.traj {
                let x = match &p.x0 {
                    Some(x) if x.len() == 2 => x,
                    _ => return invalid("--traj needs --x0 r,omega"),
                };
                let rows = reduced::reduced_path(
                    reduced::ReducedState { r: x[0], omega: x[1] },
                    alpha,
                    ic.t_max,
                    1e-3,
                )?;
                let rows: Vec<Vec<f64>> = rows.iter().map(|r| r.to_vec()).collect();
                write_file(path, &io::table_csv(&["t", "r", "omega"], &rows))?;
            }
            Ok(Artifact {
                body: to_json(&report),
                summary: format!(
                    "r0={} stable_branch={}",
                    fmt6(report.r0),
                    serde_json::to_value(report.stable_branch).expect("branch").as_str().unwrap_or("")
                ),
                ok: true,
            })
        }
        Command::Cycle(_) => {
            let guess = match &p.x0 {
                Some(x) => vector(x, n, "x0")?,
                None => DVector::zeros(n),
            };
            let z = locate_any(&model, &guess)?;
            let opts = p.cycle.clone().unwrap_or_default();
            let c = analysis::measure_cycle(&model, &z, ic.eps, &opts)?;
            Ok(Artifact {
                body: to_json(&c),
                summary: format!(
                    "r_mean={:.6e} predicted={:.6e} width={:.3e} width/eps^2={:.4}",
                    c.r_mean,
                    c.predicted,
                    c.width,
                    c.width / (ic.eps * ic.eps)
                ),
                ok: true,
            })
        }
        Command::Certify(_) => {
            let r = p.region.as_ref().expect("region resolved");
            let c = analysis::certify_region(&model, r)?;
            Ok(Artifact {
                body: to_json(&c),
                summary: format!(
                    "{} index1_everywhere={} boundary_touch={} cells={} min_margin={}",
                    if c.valid() { "PASS" } else { "FAIL" },
                    c.index1_everywhere,
                    c.boundary_touch,
                    c.cells.len(),
                    fmt6(c.min_margin)
                ),
                ok: true,
            })
        }
        Command::Benchmark(_) => {
            let b = analysis::benchmark_global(&model, p.radius.unwrap_or(2.0), p.points.unwrap_or(25), ic)?;
            Ok(Artifact {
                body: to_json(&b),
                summary: format!("converged {}/{}", b.converged, b.total),
                ok: true,
            })
        }
        Command::CheckDerivs(_) => {
            let count = p.points.unwrap_or(100);
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let mut worst = [0.0f64; 3];
            for _ in 0..count {
                let x = DVector::from_fn(n, |_, _| rng.random_range(-1.15..1.15));
                let r = check_derivatives(&model, &x, 1e-5);
                worst[0] = worst[0].max(r.gradient);
                worst[1] = worst[1].max(r.hessian);
                worst[2] = worst[2].max(r.third);
            }
            let max = worst.iter().cloned().fold(0.0, f64::max);
            let passed = max < 1e-5;
            let body = serde_json::json!({
                "model": spec.name(),
                "points": count,
                "gradient": worst[0],
                "hessian": worst[1],
                "third": worst[2],
                "passed": passed,
            });
            Ok(Artifact {
                body: to_json(&body),
                summary: format!("{} max_rel_err={max:.3e}", if passed { "PASS" } else { "FAIL" }),
                ok: passed,
            })
        }
    }
}

fn write_file(path: &PathBuf, body: &str) -> CliResult<()> {
    std::fs::write(path, body).map_err(|e| Failure::Invalid(format!("cannot write {}: {e}", path.display())))
}

/// Runs the CLI with explicit output streams.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    let cmd = &cli.command;
    let result = resolve(cmd).and_then(|cfg| {
        cfg.model.as_ref().expect("model resolved").build()?;
        if flags_of(cmd).dry_run {
            return Ok(Artifact {
                body: String::new(),
                summary: format!("{} {}", command_name(cmd), serde_json::to_string(&cfg).expect("config")),
                ok: true,
            });
        }
        let art = match cfg.params.threads {
            Some(t) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(t)
                    .build()
                    .map_err(|e| Failure::Invalid(format!("thread pool: {e}")))?;
                pool.install(|| execute(cmd, &cfg))?
            }
            None => execute(cmd, &cfg)?,
        };
        match &cfg.output.path {
            Some(path) => {
                write_file(path, &art.body)?;
                if matches!(cmd, Command::Portrait(_)) && cfg.output.format == Format::Csv {
                    let mut legend = path.clone().into_os_string();
                    legend.push(".legend.json");
                    write_file(&PathBuf::from(legend), &analysis::BasinMap::legend_json())?;
                }
                Ok(Artifact { body: String::new(), ..art })
            }
            None => Ok(art),
        }
    });
    match result {
        Ok(a) => {
            let _ = write!(out, "{}", a.body);
            let _ = writeln!(out, "{}", a.summary);
            if a.ok {
                0
            } else {
                3
            }
        }
        Err(Failure::Invalid(m)) => {
            let _ = writeln!(err, "error: {m}");
            2
        }
        Err(Failure::Numerical(m)) => {
            let _ = writeln!(err, "numerical failure: {m}");
            3
        }
    }
}

/// Runs the CLI on the process streams.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}
