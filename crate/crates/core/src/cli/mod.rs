//! Command-line front end: argument parsing, dispatch, JSON and table output.

pub mod input;
pub mod suites;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::enumerate::{enumerate_disconnected, enumerate_types, EnumBounds, EnumError};
use crate::exactnum::NumError;
use crate::invariants::{
    absolute_gw, certified_count, dt_reduced, dt_to_gw, relative_gw, weighted_count, Connectedness, CountError, FanError,
};
use crate::tropcurve::build::gamma_mu;
use crate::tropcurve::{CurveError, TropicalType};
use crate::weights::{Evaluator, Mode, Weight, WeightConfig, WeightError};
use input::{expand_degrees, point_insertions, read_versioned, CountInput, EndsInput, FanInput, RelativeInput};
pub use suites::Suite;

/// A failure with the process exit status it maps to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub status: i32,
    pub message: String,
}

pub const EXIT_IDENTITY_FAILURE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_GENERICITY: i32 = 3;
pub const EXIT_UNSUPPORTED_VERTEX: i32 = 4;

impl CliError {
    pub fn parse(message: impl Into<String>) -> Self {
        Self { status: EXIT_PARSE, message: message.into() }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

fn enum_status(e: &EnumError) -> i32 {
    match e {
        EnumError::Degenerate(_) => EXIT_GENERICITY,
        _ => EXIT_PARSE,
    }
}

fn weight_status(e: &WeightError) -> i32 {
    match e {
        WeightError::UnsupportedVertex(_) => EXIT_UNSUPPORTED_VERTEX,
        WeightError::NonGenericDelta | WeightError::DeltaExhausted { .. } | WeightError::DepthExceeded { .. } => {
            EXIT_GENERICITY
        }
        WeightError::Enum(e) => enum_status(e),
        _ => EXIT_PARSE,
    }
}

impl From<WeightError> for CliError {
    fn from(e: WeightError) -> Self {
        Self { status: weight_status(&e), message: e.to_string() }
    }
}

impl From<EnumError> for CliError {
    fn from(e: EnumError) -> Self {
        Self { status: enum_status(&e), message: e.to_string() }
    }
}

impl From<CountError> for CliError {
    fn from(e: CountError) -> Self {
        let status = match &e {
            CountError::Enum(x) => enum_status(x),
            CountError::Weight(x) => weight_status(x),
            _ => EXIT_PARSE,
        };
        Self { status, message: e.to_string() }
    }
}

macro_rules! parse_errors {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::parse(e.to_string())
            }
        }
    )*};
}
parse_errors!(NumError, FanError, CurveError);

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Pretty,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Lambda,
    Q,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Lambda => Mode::Lambda,
            ModeArg::Q => Mode::Q,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "tropgw", version, about = "Exact tropical curve counts with higher-genus weights")]
pub struct Args {
    #[command(subcommand)]
    pub command: CommandArgs,
    /// Truncation order K of λ-series.
    #[arg(long, global = true, default_value_t = 20)]
    pub order: i64,
    #[arg(long, global = true, env = "TROPGW_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true)]
    pub max_internal_edges: Option<usize>,
    #[arg(long, global = true)]
    pub max_genus: Option<usize>,
    #[arg(long = "max-deriv", global = true)]
    pub max_deriv: Option<i64>,
    /// Include per-curve contributions or derivation trees.
    #[arg(long, global = true)]
    pub trace: bool,
    /// Recount with every bound raised by one and report stability.
    #[arg(long, global = true)]
    pub certify: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Pretty)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum CommandArgs {
    /// Weighted count for a request file.
    Count { input: PathBuf },
    /// Absolute invariant of a convex toric fan with point insertions.
    Absolute {
        fan: PathBuf,
        /// Per-ray degrees; a single value applies to every ray.
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        degrees: Vec<i64>,
        #[arg(long, default_value_t = 0)]
        points: usize,
    },
    /// Relative invariant: degrees on special rays plus constrained ends.
    Relative {
        fan: PathBuf,
        input: PathBuf,
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        degrees: Vec<i64>,
    },
    /// Reduced DT series and its λ-image.
    Dt {
        fan: PathBuf,
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        degrees: Vec<i64>,
        #[arg(long, default_value_t = 0)]
        points: usize,
    },
    /// Weight of one general type.
    Fgamma {
        /// Type JSON; omit when using --gamma-mu.
        input: Option<PathBuf>,
        /// Build the two-vertex type with parallel edges of these multiplicities.
        #[arg(long, value_delimiter = ',')]
        gamma_mu: Option<Vec<i64>>,
        #[arg(long, value_enum, default_value_t = ModeArg::Lambda)]
        mode: ModeArg,
    },
    /// List the general types with the given ends.
    Enumerate { input: PathBuf },
    /// Run an identity suite.
    VerifyIdentities {
        #[arg(long, value_enum)]
        suite: Suite,
    },
}

/// What to run, with global options resolved.
#[derive(Debug, Clone)]
pub enum Command {
    Count { input: PathBuf },
    Absolute { fan: PathBuf, degrees: Vec<i64>, points: usize },
    Relative { fan: PathBuf, input: PathBuf, degrees: Vec<i64> },
    Dt { fan: PathBuf, degrees: Vec<i64>, points: usize },
    Fgamma { input: Option<PathBuf>, gamma_mu: Option<Vec<i64>>, mode: Mode },
    Enumerate { input: PathBuf },
    VerifyIdentities { suite: Suite },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BoundOverrides {
    pub max_internal_edges: Option<usize>,
    pub max_genus: Option<usize>,
    pub max_derivative_norm: Option<i64>,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub order: i64,
    pub seed: u64,
    pub bounds: BoundOverrides,
    pub format: Format,
    pub trace: bool,
    pub certify: bool,
}

impl RunConfig {
    pub fn from_args(a: Args) -> Result<Self, CliError> {
        if a.order < 1 {
            return Err(CliError::parse(format!("--order must be at least 1, got {}", a.order)));
        }
        let command = match a.command {
            CommandArgs::Count { input } => Command::Count { input },
            CommandArgs::Absolute { fan, degrees, points } => Command::Absolute { fan, degrees, points },
            CommandArgs::Relative { fan, input, degrees } => Command::Relative { fan, input, degrees },
            CommandArgs::Dt { fan, degrees, points } => Command::Dt { fan, degrees, points },
            CommandArgs::Fgamma { input, gamma_mu, mode } => {
                if input.is_some() == gamma_mu.is_some() {
                    return Err(CliError::parse("fgamma takes either a type file or --gamma-mu"));
                }
                Command::Fgamma { input, gamma_mu, mode: mode.into() }
            }
            CommandArgs::Enumerate { input } => Command::Enumerate { input },
            CommandArgs::VerifyIdentities { suite } => Command::VerifyIdentities { suite },
        };
        Ok(Self {
            command,
            order: a.order,
            seed: a.seed,
            bounds: BoundOverrides {
                max_internal_edges: a.max_internal_edges,
                max_genus: a.max_genus,
                max_derivative_norm: a.max_deriv,
            },
            format: a.format,
            trace: a.trace,
            certify: a.certify,
        })
    }

    /// Flags beat bounds given in an input file, which beat the defaults.
    pub fn resolve_bounds(&self, from_file: Option<&EnumBounds>) -> EnumBounds {
        let mut b = from_file.cloned().unwrap_or_default();
        if let Some(x) = self.bounds.max_internal_edges {
            b.max_internal_edges = x;
        }
        if let Some(x) = self.bounds.max_genus {
            b.max_genus = x;
        }
        if let Some(x) = self.bounds.max_derivative_norm {
            b.max_derivative_norm = x;
        }
        b.seed = self.seed;
        b
    }
}

/// Exit status plus the report in both renderings.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub status: i32,
    pub json: Value,
    pub pretty: String,
}

impl Outcome {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(&self.json).expect("serializable") + "\n",
            Format::Pretty => self.pretty.clone(),
        }
    }
}

fn to_json<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn weight_value(w: &Weight) -> Value {
    match w {
        Weight::Lambda(s) => to_json(s),
        Weight::Q(p) => to_json(p),
    }
}

fn mode_name(m: Mode) -> &'static str {
    match m {
        Mode::Lambda => "lambda",
        Mode::Q => "q",
    }
}

fn header(cfg: &RunConfig, command: &str, bounds: &EnumBounds) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("schema".into(), json!(input::SCHEMA_VERSION));
    m.insert("command".into(), json!(command));
    m.insert("order".into(), json!(cfg.order));
    m.insert("seed".into(), json!(cfg.seed));
    m.insert("bounds".into(), to_json(bounds));
    m
}

fn bounds_line(b: &EnumBounds) -> String {
    format!(
        "bounds: internal edges ≤ {}, genus ≤ {}, chord flow ≤ {}",
        b.max_internal_edges, b.max_genus, b.max_derivative_norm
    )
}

fn certified_text(c: Option<bool>) -> &'static str {
    match c {
        Some(true) => "yes",
        Some(false) => "no (value changes when bounds widen)",
        None => "not checked",
    }
}

fn run_count(cfg: &RunConfig, path: &Path) -> Result<Outcome, CliError> {
    let input: CountInput = read_versioned(path)?;
    let bounds = cfg.resolve_bounds(input.bounds.as_ref());
    let reqs = input.requests(&bounds)?;
    let mut reports = Vec::new();
    for r in &reqs {
        reports.push(if cfg.certify { certified_count(r, cfg.order, cfg.seed)? } else { weighted_count(r, cfg.order, cfg.seed)? });
    }
    let agree = reports.windows(2).all(|w| w[0].value == w[1].value);
    let mut m = header(cfg, "count", &bounds);
    if let Some(n) = &input.name {
        m.insert("name".into(), json!(n));
    }
    m.insert("value".into(), weight_value(&reports[0].value));
    m.insert("mode".into(), json!(mode_name(input.mode)));
    m.insert("certified".into(), json!(reports.iter().map(|r| r.certified).collect::<Option<Vec<bool>>>().map(|v| v.iter().all(|&b| b))));
    let mut pretty = String::new();
    if let Some(n) = &input.name {
        writeln!(pretty, "instance: {n}").ok();
    }
    writeln!(pretty, "{}", bounds_line(&bounds)).ok();
    let mut configs = Vec::new();
    for (i, r) in reports.iter().enumerate() {
        writeln!(pretty, "configuration {i}: {} types, {} curves, value {}", r.types, r.contributions.len(), r.value).ok();
        let mut c = json!({
            "value": weight_value(&r.value),
            "types": r.types,
            "attempts": r.attempts,
            "certified": r.certified,
        });
        if cfg.trace {
            c["trace"] = to_json(&r.contributions);
            for x in &r.contributions {
                writeln!(pretty, "    stratum {} index {} |Aut| {} weight {}  [{}]", x.stratum, x.index, x.automorphisms, x.weight, x.curve).ok();
            }
        }
        configs.push(c);
    }
    m.insert("configurations".into(), Value::Array(configs));
    if reports.len() > 1 {
        m.insert("agree".into(), json!(agree));
        writeln!(pretty, "configurations agree: {}", if agree { "yes" } else { "NO" }).ok();
    }
    writeln!(pretty, "certified: {}", certified_text(m["certified"].as_bool())).ok();
    Ok(Outcome { status: if agree { 0 } else { EXIT_IDENTITY_FAILURE }, json: Value::Object(m), pretty })
}

fn load_fan(path: &Path) -> Result<crate::invariants::Fan3, CliError> {
    read_versioned::<FanInput>(path)?.fan()
}

/// Run `f` with the resolved bounds and, if requested, again with widened
/// bounds; returns the first result and the stability flag.
fn with_certificate<T: PartialEq>(
    cfg: &RunConfig,
    bounds: &EnumBounds,
    f: impl Fn(&EnumBounds) -> Result<T, CliError>,
) -> Result<(T, Option<bool>), CliError> {
    let first = f(bounds)?;
    let cert = if cfg.certify { Some(f(&bounds.widened())? == first) } else { None };
    Ok((first, cert))
}

fn run_absolute(cfg: &RunConfig, fan: &Path, degrees: &[i64], points: usize, relative: Option<&PathBuf>) -> Result<Outcome, CliError> {
    let fan = load_fan(fan)?;
    let degrees = expand_degrees(degrees, fan.rays.len());
    let bounds = cfg.resolve_bounds(None);
    let rel = relative.map(|p| read_versioned::<RelativeInput>(p)).transpose()?;
    let ins = point_insertions(points);
    let (report, certified) = with_certificate(cfg, &bounds, |b| {
        let r = match &rel {
            Some(r) => relative_gw(&fan, &degrees, &r.ends, &r.constraints, cfg.order, cfg.seed, b)?,
            None => absolute_gw(&fan, &degrees, &ins, cfg.order, cfg.seed, b)?,
        };
        Ok(ValueWith(r.value.clone(), r))
    })?;
    let ValueWith(value, r) = report;
    let name = if rel.is_some() { "relative" } else { "absolute" };
    let mut m = header(cfg, name, &bounds);
    m.insert("degrees".into(), json!(degrees));
    m.insert("points".into(), json!(points));
    m.insert("value".into(), to_json(&value));
    m.insert("mode".into(), json!("lambda"));
    m.insert("weighted_count".into(), weight_value(&r.count.value));
    m.insert("certified".into(), json!(certified));
    if cfg.trace {
        m.insert("trace".into(), to_json(&r.count.contributions));
    }
    let mut pretty = String::new();
    writeln!(pretty, "{name} invariant, degrees {degrees:?}, {points} point insertions").ok();
    writeln!(pretty, "{}", bounds_line(&bounds)).ok();
    writeln!(pretty, "weighted count W: {}", r.count.value).ok();
    writeln!(pretty, "invariant:        {value}").ok();
    writeln!(pretty, "certified: {}", certified_text(certified)).ok();
    Ok(Outcome { status: 0, json: Value::Object(m), pretty })
}

/// Compares by the value only.
struct ValueWith<V, R>(V, R);

impl<V: PartialEq, R> PartialEq for ValueWith<V, R> {
    fn eq(&self, o: &Self) -> bool {
        self.0 == o.0
    }
}

fn run_dt(cfg: &RunConfig, fan: &Path, degrees: &[i64], points: usize) -> Result<Outcome, CliError> {
    let fan = load_fan(fan)?;
    let degrees = expand_degrees(degrees, fan.rays.len());
    let bounds = cfg.resolve_bounds(None);
    let ins = point_insertions(points);
    let (ValueWith(value, r), certified) = with_certificate(cfg, &bounds, |b| {
        let r = dt_reduced(&fan, &degrees, &ins, cfg.seed, b)?;
        Ok(ValueWith(r.value.clone(), r))
    })?;
    let image = dt_to_gw(&value, degrees.iter().sum(), points, cfg.order);
    let mut m = header(cfg, "dt", &bounds);
    m.insert("degrees".into(), json!(degrees));
    m.insert("points".into(), json!(points));
    m.insert("value".into(), to_json(&value));
    m.insert("mode".into(), json!("q"));
    m.insert("lambda_image".into(), json!({ "series": to_json(&image.series), "real": image.real }));
    m.insert("certified".into(), json!(certified));
    if cfg.trace {
        m.insert("trace".into(), to_json(&r.count.contributions));
    }
    let mut pretty = String::new();
    writeln!(pretty, "reduced DT series, degrees {degrees:?}, {points} point insertions").ok();
    writeln!(pretty, "{}", bounds_line(&bounds)).ok();
    writeln!(pretty, "Z': {value}").ok();
    writeln!(pretty, "λ-image: {}{}", image.series, if image.real { "" } else { "  (imaginary residue)" }).ok();
    writeln!(pretty, "certified: {}", certified_text(certified)).ok();
    Ok(Outcome { status: 0, json: Value::Object(m), pretty })
}

fn run_fgamma(cfg: &RunConfig, path: Option<&PathBuf>, mu: Option<&[i64]>, mode: Mode) -> Result<Outcome, CliError> {
    let curve: TropicalType = match (path, mu) {
        (Some(p), _) => read_versioned(p)?,
        (None, Some(mu)) => {
            if mu.is_empty() || mu.iter().any(|&x| x <= 0) {
                return Err(CliError::parse("--gamma-mu needs positive parts"));
            }
            gamma_mu(mu)
        }
        (None, None) => return Err(CliError::parse("no type given")),
    };
    let bounds = cfg.resolve_bounds(None);
    let config = |b: &EnumBounds| WeightConfig { order: cfg.order, seed: cfg.seed, bounds: b.clone(), depth_cap: 8 };
    let mut eval = Evaluator::new(config(&bounds));
    let value = eval.weight(&curve, mode)?;
    let certified = if cfg.certify {
        Some(Evaluator::new(config(&bounds.widened())).weight(&curve, mode)? == value)
    } else {
        None
    };
    let mut m = header(cfg, "fgamma", &bounds);
    m.insert("curve".into(), to_json(&curve));
    m.insert("value".into(), weight_value(&value));
    m.insert("mode".into(), json!(mode_name(mode)));
    m.insert("certified".into(), json!(certified));
    let mut pretty = String::new();
    writeln!(pretty, "type: {curve}").ok();
    writeln!(pretty, "F ({}): {value}", mode_name(mode)).ok();
    if cfg.trace {
        let d = eval.derive(&curve, mode)?;
        m.insert("trace".into(), to_json(&*d));
        writeln!(pretty, "derivation: see --format json for the full tree").ok();
    }
    writeln!(pretty, "certified: {}", certified_text(certified)).ok();
    Ok(Outcome { status: 0, json: Value::Object(m), pretty })
}

fn run_enumerate(cfg: &RunConfig, path: &Path) -> Result<Outcome, CliError> {
    let input: EndsInput = read_versioned(path)?;
    let bounds = cfg.resolve_bounds(None);
    let types = match input.connectedness {
        Connectedness::Connected => enumerate_types(&input.ends, &bounds)?,
        Connectedness::Disconnected => enumerate_disconnected(&input.ends, &bounds)?,
    };
    let mut pretty = String::new();
    writeln!(pretty, "{} general types", types.len()).ok();
    writeln!(pretty, "{}", bounds_line(&bounds)).ok();
    let mut list = Vec::new();
    for t in &types {
        let genus = t.genus().ok();
        let m_gamma = if t.is_transverse() { t.m_gamma().ok().map(|m| m.to_string()) } else { None };
        let aut = t.automorphism_count();
        writeln!(
            pretty,
            "  genus {:<2} |Aut| {:<3} m_γ {:<6} {}",
            genus.map_or("?".into(), |g| g.to_string()),
            aut,
            m_gamma.clone().unwrap_or_else(|| "-".into()),
            t
        )
        .ok();
        list.push(json!({ "curve": to_json(t), "genus": genus, "automorphisms": aut, "m_gamma": m_gamma }));
    }
    let mut m = header(cfg, "enumerate", &bounds);
    m.insert("value".into(), json!(types.len()));
    m.insert("certified".into(), Value::Null);
    m.insert("types".into(), Value::Array(list));
    Ok(Outcome { status: 0, json: Value::Object(m), pretty })
}

fn run_verify(cfg: &RunConfig, suite: Suite) -> Result<Outcome, CliError> {
    let bounds = cfg.resolve_bounds(None);
    let report = suites::run_suite(suite, cfg.order, cfg.seed, &bounds)?;
    let mut pretty = String::new();
    for c in &report.checks {
        writeln!(pretty, "{} {}", if c.passed { "PASS" } else { "FAIL" }, c.name).ok();
        if !c.passed {
            writeln!(pretty, "     {}", c.detail).ok();
        }
    }
    let failed = report.checks.iter().filter(|c| !c.passed).count();
    writeln!(pretty, "{} checks, {} failed", report.checks.len(), failed).ok();
    let mut m = header(cfg, "verify-identities", &bounds);
    m.insert("suite".into(), to_json(&suite));
    m.insert("value".into(), json!(report.passed));
    m.insert("certified".into(), Value::Null);
    m.insert("checks".into(), to_json(&report.checks));
    Ok(Outcome { status: if report.passed { 0 } else { EXIT_IDENTITY_FAILURE }, json: Value::Object(m), pretty })
}

pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    match &cfg.command {
        Command::Count { input } => run_count(cfg, input),
        Command::Absolute { fan, degrees, points } => run_absolute(cfg, fan, degrees, *points, None),
        Command::Relative { fan, input, degrees } => run_absolute(cfg, fan, degrees, 0, Some(input)),
        Command::Dt { fan, degrees, points } => run_dt(cfg, fan, degrees, *points),
        Command::Fgamma { input, gamma_mu, mode } => run_fgamma(cfg, input.as_ref(), gamma_mu.as_deref(), *mode),
        Command::Enumerate { input } => run_enumerate(cfg, input),
        Command::VerifyIdentities { suite } => run_verify(cfg, *suite),
    }
}

/// Parse, run and render; returns the exit status and the text for stdout
/// and stderr.
pub fn main_with_args<I, T>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let status = if e.use_stderr() { EXIT_PARSE } else { 0 };
            let text = e.render().to_string();
            return if status == 0 { (0, text, String::new()) } else { (status, String::new(), text) };
        }
    };
    let format = args.format;
    let result = RunConfig::from_args(args).and_then(|cfg| run(&cfg));
    match result {
        Ok(out) => (out.status, out.render(format), String::new()),
        Err(e) => {
            let stdout = match format {
                Format::Json => {
                    serde_json::to_string_pretty(&json!({ "schema": input::SCHEMA_VERSION, "error": { "status": e.status, "message": e.message } }))
                        .expect("serializable")
                        + "\n"
                }
                Format::Pretty => String::new(),
            };
            (e.status, stdout, format!("error: {}\n", e.message))
        }
    }
}
