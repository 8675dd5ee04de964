//! Command-line front end. `main.rs` only forwards to [`run`].
//!
//! Exit codes: 0 success, 1 numerical or domain failure (one JSON line
//! `{kind, message, context}` on stderr), 2 usage error.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::builder::PossibleValuesParser;
use clap::{value_parser, Arg, ArgMatches, Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::catalog::{self, Params};
use crate::error::Error;
use crate::maxent::{self, Constraint, DistributionSpec, GridDistribution, GridOptions, MeasureAdjustment};
use crate::scale::{self, MeasurementScale, ObservableMap, ScaleExpr, Transform};
use crate::sim;
use crate::transforms::{self, LevyGrid, VariableChange};

pub const SEED_ENV: &str = "SCALEKIT_SEED";

#[derive(Debug, Parser)]
#[command(name = "scalekit", version, about = "Maximum-entropy distributions from measurement scales")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List catalog entries or show one
    #[command(subcommand)]
    Catalog(CatalogCmd),
    /// Normalize a distribution onto a grid and write its density
    Eval(EvalArgs),
    /// Differential entropy and the surprise-versus-scale line
    Entropy(EntropyArgs),
    /// Integral transforms
    #[command(subcommand)]
    Transform(TransformCmd),
    /// Run a generative scenario and fit it against its predicted law
    Simulate(SimulateArgs),
    /// Test whether a scale is affinely invariant under a transformation
    Invariance(InvarianceArgs),
    /// Compare a catalog recipe with its closed form
    Verify(VerifyArgs),
}

#[derive(Debug, Subcommand)]
pub enum CatalogCmd {
    /// Names of all entries
    List {
        #[arg(long, value_enum, default_value_t = ListFormat::Text)]
        format: ListFormat,
    },
    /// Parameters, closed form and notes of one entry
    Show {
        #[arg(value_parser = PossibleValuesParser::new(catalog::names()))]
        name: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ListFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Catalog parameter values, one `--name value` flag per parameter name
/// used anywhere in the catalog.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ParamArgs {
    pub values: Params,
}

/// Every parameter name in the catalog, sorted.
pub fn param_names() -> Vec<&'static str> {
    let set: BTreeSet<&'static str> = catalog::entries().iter().flat_map(|e| e.params.iter().map(|p| p.name)).collect();
    set.into_iter().collect()
}

impl FromArgMatches for ParamArgs {
    fn from_arg_matches(m: &ArgMatches) -> Result<Self, clap::Error> {
        let mut values = Params::new();
        for name in param_names() {
            if let Some(v) = m.get_one::<f64>(name) {
                values.insert(name.to_string(), *v);
            }
        }
        Ok(Self { values })
    }

    fn update_from_arg_matches(&mut self, m: &ArgMatches) -> Result<(), clap::Error> {
        *self = Self::from_arg_matches(m)?;
        Ok(())
    }
}

impl Args for ParamArgs {
    fn augment_args(mut cmd: clap::Command) -> clap::Command {
        for name in param_names() {
            cmd = cmd.arg(
                Arg::new(name)
                    .long(name)
                    .value_name("X")
                    .value_parser(value_parser!(f64))
                    .allow_negative_numbers(true)
                    .help_heading("Distribution parameters"),
            );
        }
        cmd
    }

    fn augment_args_for_update(cmd: clap::Command) -> clap::Command {
        Self::augment_args(cmd)
    }
}

#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// Catalog entry name
    #[arg(long, value_parser = PossibleValuesParser::new(catalog::names()))]
    pub dist: Option<String>,
    /// DistributionSpec JSON file
    #[arg(long)]
    pub spec: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct DistArgs {
    #[command(flatten)]
    pub source: Source,
    #[command(flatten)]
    pub params: ParamArgs,
}

#[derive(Debug, Clone, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub dist: DistArgs,
    /// Re-solve lambda so that E[T] equals this value
    #[arg(long)]
    pub mean: Option<f64>,
    #[arg(long, default_value_t = 4096)]
    pub points: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct EntropyArgs {
    #[command(flatten)]
    pub dist: DistArgs,
}

#[derive(Debug, Subcommand)]
pub enum TransformCmd {
    /// Laplace transform E[e^{-sY}] of a density on y >= 0
    Laplace {
        #[command(flatten)]
        dist: DistArgs,
        /// Comma-separated values of s
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        at: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fourier transform on the reciprocal grid
    Fourier {
        #[command(flatten)]
        dist: DistArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Symmetric stable density from e^{-phi |x|^gamma}
    Levy {
        #[arg(long)]
        gamma: f64,
        #[arg(long, default_value_t = 1.0)]
        phi: f64,
        #[arg(long, default_value_t = LevyGrid::default().points)]
        points: usize,
        #[arg(long, default_value_t = LevyGrid::default().half_width)]
        half_width: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Density of y where x = g(y) follows the source distribution
    Changevar {
        #[command(flatten)]
        dist: DistArgs,
        /// ScaleExpr JSON for g, or @file
        #[arg(long)]
        map: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[arg(value_parser = PossibleValuesParser::new(sim::SCENARIOS))]
    pub scenario: String,
    #[arg(long, default_value_t = sim::DEFAULT_SAMPLE_COUNT)]
    pub n: usize,
    /// Defaults to $SCALEKIT_SEED, then 42
    #[arg(long)]
    pub seed: Option<u64>,
    /// Critical constant c of the KS threshold c/sqrt(n)
    #[arg(long, default_value_t = sim::KS_CRITICAL)]
    pub ks_critical: f64,
    /// Report the fit against the scenario's deliberately wrong law
    #[arg(long)]
    pub control: bool,
    /// Write the samples as CSV
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct InvarianceArgs {
    /// linear, log, exp, a MeasurementScale JSON, or @file
    #[arg(long)]
    pub scale: String,
    /// shift:D, affine:D,THETA, power:C,GAMMA, a Transform JSON, or @file
    #[arg(long)]
    pub transform: String,
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub lo: f64,
    #[arg(long, default_value_t = 20.0, allow_negative_numbers = true)]
    pub hi: f64,
    #[arg(long, default_value_t = 64)]
    pub count: usize,
    #[arg(long, default_value_t = scale::DEFAULT_INVARIANCE_TOLERANCE)]
    pub tolerance: f64,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(value_parser = PossibleValuesParser::new(catalog::names()))]
    pub name: String,
    #[command(flatten)]
    pub params: ParamArgs,
}

#[derive(Debug)]
pub enum UsageError {
    Clap(clap::Error),
    Invalid(String),
}

impl UsageError {
    pub fn exit_code(&self) -> i32 {
        match self {
            UsageError::Clap(e) => e.exit_code(),
            UsageError::Invalid(_) => 2,
        }
    }
}

fn usage(msg: impl Into<String>) -> UsageError {
    UsageError::Invalid(msg.into())
}

fn command_with_catalog() -> clap::Command {
    let mut names = String::from("Catalog entries:\n");
    for e in catalog::entries() {
        let _ = writeln!(names, "  {}", e.name);
    }
    let _ = write!(names, "\nScenarios: {}", sim::SCENARIOS.join(", "));
    Cli::command().after_help(names)
}

/// Parse argv (program name first) and check parameter names against the
/// selected catalog entry.
pub fn parse_args<I, T>(argv: I) -> Result<Cli, UsageError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let m = command_with_catalog().try_get_matches_from(argv).map_err(UsageError::Clap)?;
    let cli = Cli::from_arg_matches(&m).map_err(UsageError::Clap)?;
    match &cli.command {
        Command::Eval(a) => check_dist(&a.dist)?,
        Command::Entropy(a) => check_dist(&a.dist)?,
        Command::Transform(TransformCmd::Laplace { dist, .. })
        | Command::Transform(TransformCmd::Fourier { dist, .. })
        | Command::Transform(TransformCmd::Changevar { dist, .. }) => check_dist(dist)?,
        Command::Verify(a) => {
            if !a.params.values.is_empty() {
                check_params(&a.name, &a.params.values)?;
            }
        }
        Command::Simulate(a) => {
            if a.seed.is_none() {
                seed_from_env()?;
            }
        }
        _ => {}
    }
    Ok(cli)
}

fn check_dist(d: &DistArgs) -> Result<(), UsageError> {
    match &d.source.dist {
        Some(name) => check_params(name, &d.params.values),
        None if !d.params.values.is_empty() => Err(usage("distribution parameters apply only with --dist")),
        None => Ok(()),
    }
}

fn check_params(name: &str, given: &Params) -> Result<(), UsageError> {
    let entry = catalog::lookup(name).map_err(|e| usage(e.to_string()))?;
    for k in given.keys() {
        if !entry.params.iter().any(|p| p.name == k) {
            return Err(usage(format!("--{k} is not a parameter of '{name}'")));
        }
    }
    for p in entry.params {
        if p.default.is_none() && !given.contains_key(p.name) {
            return Err(usage(format!("'{name}' needs --{}", p.name)));
        }
    }
    Ok(())
}

fn seed_from_env() -> Result<u64, UsageError> {
    match std::env::var(SEED_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| usage(format!("{SEED_ENV}='{s}' is not an unsigned integer"))),
        Err(_) => Ok(sim::DEFAULT_SEED),
    }
}

/// Parse and execute; returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match parse_args(argv) {
        Ok(cli) => execute(&cli, out, err),
        Err(UsageError::Clap(e)) => {
            let text = e.render().to_string();
            if e.exit_code() == 0 {
                // --help and --version
                let _ = out.write_all(text.as_bytes());
                return 0;
            }
            let mut lines = text.lines();
            let message = lines.next().unwrap_or_default().trim_start_matches("error: ").to_string();
            let detail: Vec<&str> = lines.map(str::trim).filter(|l| !l.is_empty()).collect();
            let line = json!({"kind": "UsageError", "message": message, "context": {"usage": detail.join(" ")}});
            let _ = writeln!(err, "{line}");
            2
        }
        Err(UsageError::Invalid(msg)) => {
            let _ = writeln!(err, "{}", json!({"kind": "UsageError", "message": msg, "context": {}}));
            2
        }
    }
}

/// Run a parsed command. Numerical failures print one JSON error line.
pub fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match dispatch(cli, out) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "{}", json!({"kind": "UsageError", "message": msg, "context": context(cli)}));
            2
        }
        Err(Failure::Numeric(e)) => {
            let line = json!({"kind": e.kind(), "message": e.to_string(), "context": context(cli)});
            let _ = writeln!(err, "{line}");
            1
        }
    }
}

enum Failure {
    Usage(String),
    Numeric(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Numeric(e)
    }
}

fn context(cli: &Cli) -> Value {
    let dist_ctx = |d: &DistArgs| match (&d.source.dist, &d.source.spec) {
        (Some(name), _) => json!({"dist": name, "params": d.params.values}),
        (None, Some(p)) => json!({"spec": p.display().to_string()}),
        _ => json!({}),
    };
    let mut ctx = match &cli.command {
        Command::Catalog(_) => json!({}),
        Command::Eval(a) => dist_ctx(&a.dist),
        Command::Entropy(a) => dist_ctx(&a.dist),
        Command::Transform(t) => match t {
            TransformCmd::Laplace { dist, .. } | TransformCmd::Fourier { dist, .. } | TransformCmd::Changevar { dist, .. } => {
                dist_ctx(dist)
            }
            TransformCmd::Levy { gamma, phi, .. } => json!({"gamma": gamma, "phi": phi}),
        },
        Command::Simulate(a) => json!({"scenario": a.scenario, "n": a.n}),
        Command::Invariance(a) => json!({"scale": a.scale, "transform": a.transform}),
        Command::Verify(a) => json!({"name": a.name, "params": a.params.values}),
    };
    ctx["command"] = json!(command_name(&cli.command));
    ctx
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Catalog(_) => "catalog",
        Command::Eval(_) => "eval",
        Command::Entropy(_) => "entropy",
        Command::Transform(_) => "transform",
        Command::Simulate(_) => "simulate",
        Command::Invariance(_) => "invariance",
        Command::Verify(_) => "verify",
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<(), Failure> {
    match &cli.command {
        Command::Catalog(CatalogCmd::List { format }) => match format {
            ListFormat::Text => {
                let mut s = String::new();
                for n in catalog::names() {
                    s.push_str(n);
                    s.push('\n');
                }
                emit(out, None, s.as_bytes())
            }
            ListFormat::Json => {
                let v: Vec<Value> = catalog::entries()
                    .iter()
                    .map(|e| json!({"name": e.name, "params": e.params.iter().map(|p| p.name).collect::<Vec<_>>()}))
                    .collect();
                emit_json(out, None, &v)
            }
        },
        Command::Catalog(CatalogCmd::Show { name }) => {
            let e = catalog::lookup(name)?;
            let settings: Vec<Params> = (0..e.settings.len()).map(|i| e.setting(i)).collect();
            let v = json!({
                "name": e.name,
                "params": e.params,
                "closed_form": e.closed_form,
                "table_notes": e.table_notes,
                "settings": settings,
            });
            emit_json(out, None, &v)
        }
        Command::Eval(a) => {
            let mut spec = load_spec(&a.dist)?;
            if let Some(target) = a.mean {
                let c = Constraint::new(target, 1e-10 * target.abs().max(1.0))?;
                spec = spec.with_lambda(maxent::solve_lambda(&spec, &c)?);
            }
            let dist = maxent::normalize_with(
                &spec,
                GridOptions {
                    points: a.points,
                    ..GridOptions::default()
                },
            )?;
            match a.format {
                Format::Csv => emit(out, a.out.as_deref(), dist.to_csv_string().as_bytes()),
                Format::Json => emit_json(out, a.out.as_deref(), &dist),
            }
        }
        Command::Entropy(a) => {
            let spec = load_spec(&a.dist)?;
            let dist = maxent::normalize(&spec)?;
            let h = maxent::entropy(&dist)?;
            let mut v = json!({
                "entropy": h,
                "lambda": spec.lambda,
                "psi": dist.psi,
                "quadrature_error": dist.quadrature_error,
            });
            if spec.measure == MeasureAdjustment::Unit {
                let (slope, intercept, residual) = maxent::profile_line(&maxent::surprise_profile(&dist, &spec)?)?;
                v["surprise_slope"] = json!(slope);
                v["surprise_intercept"] = json!(intercept);
                v["surprise_residual"] = json!(residual);
            }
            emit_json(out, None, &v)
        }
        Command::Transform(t) => transform(t, out),
        Command::Simulate(a) => {
            let seed = match a.seed {
                Some(s) => s,
                None => seed_from_env().map_err(|e| match e {
                    UsageError::Invalid(m) => Failure::Usage(m),
                    UsageError::Clap(c) => Failure::Usage(c.to_string()),
                })?,
            };
            let (outcome, samples) = sim::run_scenario_samples(&a.scenario, a.n, seed, a.ks_critical)?;
            if let Some(path) = &a.out {
                let mut s = String::with_capacity(samples.len() * 24 + 8);
                s.push_str("sample\n");
                for x in &samples {
                    let _ = writeln!(s, "{x:.16e}");
                }
                write_atomic(path, s.as_bytes())?;
            }
            let report = if a.control { &outcome.mismatch } else { &outcome.fit };
            emit_json(out, None, report)
        }
        Command::Invariance(a) => {
            let scale = parse_scale(&a.scale).map_err(Failure::Usage)?;
            let t = parse_transform(&a.transform).map_err(Failure::Usage)?;
            let pts = scale::default_sample_points(a.lo, a.hi, a.count);
            let r = scale::check_affine_invariance_with_tolerance(&scale, &ObservableMap::Identity, &t, &pts, a.tolerance)?;
            emit_json(out, None, &r)
        }
        Command::Verify(a) => {
            if a.params.values.is_empty() {
                let e = catalog::lookup(&a.name)?;
                let reports = (0..e.settings.len())
                    .map(|i| catalog::verify_entry(&a.name, &e.setting(i)))
                    .collect::<crate::Result<Vec<_>>>()?;
                emit_json(out, None, &reports)
            } else {
                emit_json(out, None, &catalog::verify_entry(&a.name, &a.params.values)?)
            }
        }
    }
}

fn transform(t: &TransformCmd, out: &mut dyn Write) -> Result<(), Failure> {
    match t {
        TransformCmd::Laplace { dist, at, out: path } => {
            let d = maxent::normalize(&load_spec(dist)?)?;
            let vals = transforms::laplace_transform(&d, at)?;
            let rows: Vec<[f64; 2]> = at.iter().zip(&vals).map(|(&s, &v)| [s, v]).collect();
            emit(out, path.as_deref(), csv(&["s", "laplace"], &rows).as_bytes())
        }
        TransformCmd::Fourier { dist, out: path } => {
            let d = maxent::normalize(&load_spec(dist)?)?;
            let (xs, re, im) = transforms::fourier_on_reciprocal_grid(&d)?;
            let rows: Vec<[f64; 3]> = (0..xs.len()).map(|i| [xs[i], re[i], im[i]]).collect();
            emit(out, path.as_deref(), csv(&["x", "re", "im"], &rows).as_bytes())
        }
        TransformCmd::Levy {
            gamma,
            phi,
            points,
            half_width,
            out: path,
        } => {
            let d = transforms::levy_stable_density(
                *gamma,
                *phi,
                LevyGrid {
                    points: *points,
                    half_width: *half_width,
                },
            )?;
            emit(out, path.as_deref(), d.to_csv_string().as_bytes())
        }
        TransformCmd::Changevar { dist, map, out: path } => {
            let text = read_arg(map).map_err(Failure::Usage)?;
            let g: ScaleExpr = serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("--map: {e}")))?;
            let src = maxent::normalize(&load_spec(dist)?)?;
            let d = transforms::change_of_variable(&src, &VariableChange::new(g))?;
            emit(out, path.as_deref(), d.to_csv_string().as_bytes())
        }
    }
}

fn load_spec(d: &DistArgs) -> Result<DistributionSpec, Failure> {
    match (&d.source.dist, &d.source.spec) {
        (Some(name), _) => Ok(catalog::instantiate(name, &d.params.values)?),
        (None, Some(path)) => {
            let text = fs::read_to_string(path)?;
            let spec: DistributionSpec = serde_json::from_str(&text)?;
            spec.validate()?;
            Ok(spec)
        }
        (None, None) => Err(Failure::Usage("one of --dist or --spec is required".into())),
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Numeric(e.into())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Numeric(e.into())
    }
}

/// `@path` reads the file, anything else is taken literally.
fn read_arg(s: &str) -> Result<String, String> {
    match s.strip_prefix('@') {
        Some(p) => fs::read_to_string(p).map_err(|e| format!("cannot read {p}: {e}")),
        None => Ok(s.to_string()),
    }
}

fn parse_scale(s: &str) -> Result<MeasurementScale, String> {
    match s {
        "linear" => Ok(MeasurementScale::linear()),
        "log" => Ok(MeasurementScale::affine(ScaleExpr::log())),
        "exp" => Ok(MeasurementScale::exponential(ScaleExpr::Linear, 1.0)),
        other => {
            let text = read_arg(other)?;
            serde_json::from_str(&text).map_err(|e| format!("--scale: expected linear, log, exp or MeasurementScale JSON ({e})"))
        }
    }
}

fn parse_transform(s: &str) -> Result<Transform, String> {
    let nums = |rest: &str, n: usize| -> Result<Vec<f64>, String> {
        let v: Vec<f64> = rest
            .split(',')
            .map(|x| x.trim().parse::<f64>().map_err(|_| format!("--transform: bad number '{x}'")))
            .collect::<Result<_, _>>()?;
        if v.len() == n {
            Ok(v)
        } else {
            Err(format!("--transform: expected {n} numbers after the colon"))
        }
    };
    if let Some(rest) = s.strip_prefix("shift:") {
        let v = nums(rest, 1)?;
        return Ok(Transform::Shift { delta: v[0] });
    }
    if let Some(rest) = s.strip_prefix("affine:") {
        let v = nums(rest, 2)?;
        return Ok(Transform::Affine { delta: v[0], theta: v[1] });
    }
    if let Some(rest) = s.strip_prefix("power:") {
        let v = nums(rest, 2)?;
        return Ok(Transform::PowerLaw { c: v[0], gamma: v[1] });
    }
    let text = read_arg(s)?;
    serde_json::from_str(&text).map_err(|e| format!("--transform: expected shift:, affine:, power: or Transform JSON ({e})"))
}

/// CSV with a header row and 17 significant digits per value.
pub fn csv<const N: usize>(header: &[&str; N], rows: &[[f64; N]]) -> String {
    let mut s = header.join(",");
    s.push('\n');
    for r in rows {
        for (i, v) in r.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            let _ = write!(s, "{v:.16e}");
        }
        s.push('\n');
    }
    s
}

fn emit(out: &mut dyn Write, path: Option<&Path>, bytes: &[u8]) -> Result<(), Failure> {
    match path {
        Some(p) => Ok(write_atomic(p, bytes)?),
        None => Ok(out.write_all(bytes)?),
    }
}

fn emit_json<T: Serialize + ?Sized>(out: &mut dyn Write, path: Option<&Path>, v: &T) -> Result<(), Failure> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    emit(out, path, s.as_bytes())
}

/// Write through a temporary file in the target directory, then rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> crate::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error.to_string()))?;
    Ok(())
}

/// Tabulated distribution from a CSV written by `eval`.
pub fn read_density_csv(path: &Path) -> crate::Result<GridDistribution> {
    let f = fs::File::open(path)?;
    GridDistribution::read_csv(std::io::BufReader::new(f))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Result<Cli, UsageError> {
        parse_args(std::iter::once("scalekit").chain(args.iter().copied()))
    }

    #[test]
    fn parses_catalog_list() {
        let c = parse(&["catalog", "list"]).unwrap();
        assert!(matches!(c.command, Command::Catalog(CatalogCmd::List { .. })));
    }

    #[test]
    fn parses_eval_with_parameter_flags() {
        let c = parse(&["eval", "--dist", "gamma", "--k", "2", "--alpha", "1", "--out", "g.csv"]).unwrap();
        let Command::Eval(a) = c.command else { panic!() };
        assert_eq!(a.dist.source.dist.as_deref(), Some("gamma"));
        assert_eq!(a.dist.params.values, catalog::to_params(&[("k", 2.0), ("alpha", 1.0)]));
        assert_eq!(a.out, Some(PathBuf::from("g.csv")));
    }

    #[test]
    fn usage_errors_exit_two() {
        for args in [
            &["eval", "--dist", "nosuch"][..],
            &["eval", "--dist", "gauss", "--k", "1", "--lambda", "1"],
            &["eval", "--dist", "gamma", "--k", "2"],
            &["eval"],
            &["simulate", "nosuch"],
            &["frobnicate"],
        ] {
            let e = parse(args).unwrap_err();
            assert_eq!(e.exit_code(), 2, "{args:?}");
        }
    }

    #[test]
    fn negative_parameter_values_parse() {
        let c = parse(&["eval", "--dist", "gauss", "--lambda", "1", "--mu", "-3"]).unwrap();
        let Command::Eval(a) = c.command else { panic!() };
        assert_eq!(a.dist.params.values["mu"], -3.0);
    }

    #[test]
    fn transform_shorthands() {
        assert_eq!(parse_transform("shift:2").unwrap(), Transform::Shift { delta: 2.0 });
        assert_eq!(parse_transform("power:1.5,-2").unwrap(), Transform::PowerLaw { c: 1.5, gamma: -2.0 });
        assert!(parse_transform("affine:1").is_err());
        assert_eq!(
            parse_transform(r#"{"affine":{"delta":1,"theta":3}}"#).unwrap(),
            Transform::Affine { delta: 1.0, theta: 3.0 }
        );
    }

    #[test]
    fn csv_keeps_seventeen_digits() {
        let s = csv(&["a", "b"], &[[0.1, 1.0 / 3.0]]);
        assert_eq!(s, "a,b\n1.0000000000000001e-1,3.3333333333333331e-1\n");
    }
}
