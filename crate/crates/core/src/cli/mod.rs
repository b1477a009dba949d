//! Command-line surface: builds complexes, computes parameterizations, runs
//! the optimizers and applications, and writes canonical JSON/CSV artifacts
//! with a run manifest beside them.
//!
//! Exit codes: 0 success, 2 usage, 3 input, 4 internal consistency failure.

mod manifest;

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::algebra::{Field, FieldKind, Rational, Z2};
use crate::apps::{
    intensity_report, mapper_1d, maximize_density, minimize_circle_distortion, pushforward_coloring, winding_number,
    CircleLocalization, CircleModel, DensityEstimate, MaximumRule, Rgb,
};
use crate::complexes::{
    lazy_witness, maxmin_landmarks, model_complex, vietoris_rips, ModelComplex, PointCloud, SimplicialComplex,
};
use crate::error::Error;
use crate::homcomplex::{chain_map_generators, kunneth_rank, BPolicy, ChainMapMatrix, MapParameterization};
use crate::optimize::{
    bisimplicial_penalty, enumerate_z2, greedy_search, map_from_json, map_to_csv, map_to_json, minimize_aw,
    norm_objective, penalty_objective, random_vertex, simulated_annealing, AnnealingSchedule, DescentOptions,
    LpBackend, DEFAULT_ENUMERATION_CAP,
};

pub use manifest::{sha256_hex, RunManifest};

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

/// A failed command with its exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError { code: EXIT_USAGE, message: message.into() }
    }

    pub fn input(message: impl Into<String>) -> Self {
        CliError { code: EXIT_INPUT, message: message.into() }
    }

    pub fn internal(message: impl Into<String>) -> Self {
        CliError { code: EXIT_INTERNAL, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::InvalidInput(_) | Error::Io(_) | Error::Json(_) | Error::Csv(_) => EXIT_INPUT,
            Error::TooLarge(_) => EXIT_USAGE,
            Error::Consistency(_) | Error::NonFinite { .. } => EXIT_INTERNAL,
        };
        CliError { code, message: e.to_string() }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "chainmap", version, about = "Chain maps between simplicial complexes, up to chain homotopy")]
pub struct Cli {
    /// Seed for every stochastic step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a complex and write it as JSON.
    #[command(subcommand)]
    Build(BuildCommand),
    /// Compute the parameterization of chain maps up to homotopy.
    Hom(HomArgs),
    /// Pick a representative map from a parameterization.
    Map(MapArgs),
    /// Run an application pipeline.
    #[command(subcommand)]
    App(AppCommand),
    /// Push a vertex coloring forward along a map.
    Color(ColorArgs),
}

#[derive(Subcommand, Debug)]
pub enum BuildCommand {
    /// A named model complex.
    Model {
        /// point, triangle, square, octagon, ngon:N, filled_triangle, octahedron, icosahedron
        #[arg(long)]
        name: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Vietoris-Rips complex of a point cloud CSV.
    Rips {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        rmax: f64,
        #[arg(long, default_value_t = 2)]
        maxdim: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Lazy-witness complex on max-min landmarks; also writes `<out>.landmarks.json`.
    Witness {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        landmarks: usize,
        #[arg(long, default_value_t = 1)]
        nu: usize,
        /// Largest edge value kept; unbounded when absent.
        #[arg(long)]
        rmax: Option<f64>,
        #[arg(long, default_value_t = 2)]
        maxdim: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Mapper graph of a point cloud; also writes `<out>.graph.json`.
    Mapper {
        #[command(flatten)]
        mapper: MapperFlags,
        #[arg(long)]
        input: PathBuf,
        /// Write the local-maxima quotient instead of the graph itself.
        #[arg(long)]
        quotient: bool,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args, Debug, Clone)]
pub struct MapperFlags {
    /// Coordinate used as the filter; the last one when absent.
    #[arg(long)]
    pub filter_coord: Option<usize>,
    #[arg(long, default_value_t = 6)]
    pub intervals: usize,
    #[arg(long, default_value_t = 0.3)]
    pub overlap: f64,
    #[arg(long, default_value_t = 0.5)]
    pub link: f64,
    #[arg(long, value_enum, default_value_t = MaximaArg::Plateau)]
    pub maxima: MaximaArg,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaximaArg {
    Plateau,
    Strict,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldArg {
    Q,
    Z2,
}

#[derive(Args, Debug)]
pub struct HomArgs {
    #[arg(long)]
    pub domain: PathBuf,
    #[arg(long)]
    pub codomain: PathBuf,
    #[arg(long, value_enum, default_value_t = FieldArg::Q)]
    pub field: FieldArg,
    /// all_ones, dims:0,1 or values:1,0
    #[arg(long, default_value = "all_ones")]
    pub b: String,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodArg {
    LpRandomVertex,
    Aw,
    Enumerate,
    Anneal,
    Greedy,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum BackendArg {
    Auto,
    Dense,
    Exact,
    Sparse,
}

impl From<BackendArg> for LpBackend {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::Auto => LpBackend::Auto,
            BackendArg::Dense => LpBackend::Dense,
            BackendArg::Exact => LpBackend::Exact,
            BackendArg::Sparse => LpBackend::Sparse,
        }
    }
}

#[derive(Args, Debug)]
pub struct MapArgs {
    /// Parameterization JSON written by `hom`.
    #[arg(long)]
    pub param: PathBuf,
    #[arg(long, value_enum)]
    pub method: MethodArg,
    #[arg(long, value_enum, default_value_t = BackendArg::Auto)]
    pub backend: BackendArg,
    /// Annealing iterations.
    #[arg(long, default_value_t = 25_300)]
    pub iterations: usize,
    #[arg(long, default_value_t = 10.0)]
    pub t0: f64,
    #[arg(long, default_value_t = 0.999)]
    pub cooling: f64,
    /// Restarts for greedy search and gradient descent.
    #[arg(long, default_value_t = 0)]
    pub restarts: usize,
    /// Gradient-descent iteration cap.
    #[arg(long, default_value_t = 2000)]
    pub max_iterations: usize,
    /// Largest number of homotopy columns `enumerate` accepts.
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
    pub cap: usize,
    /// Output prefix: writes `<out>.map.json`, `<out>.map.csv`, `<out>.report.json`.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeArg {
    Literal,
    Chord,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum StartArg {
    /// The map with all homotopy coefficients zero.
    Zero,
    /// A random vertex of the norm program's optimal face.
    Lp,
}

#[derive(Subcommand, Debug)]
pub enum AppCommand {
    /// Circle-valued coordinates by minimizing distortion into an n-gon.
    CircleCoords {
        /// Domain complex JSON with vertex coordinates.
        #[arg(long)]
        domain: PathBuf,
        #[arg(long, default_value_t = 16)]
        n: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Literal)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value_t = StartArg::Zero)]
        start: StartArg,
        #[arg(long, default_value_t = 2)]
        restarts: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Moves the images of a model's vertices into dense regions of a sample.
    Density {
        /// Model complex JSON.
        #[arg(long)]
        domain: PathBuf,
        /// Complex JSON built on the sample, with vertex coordinates.
        #[arg(long)]
        codomain: PathBuf,
        /// Points for the density estimate; the codomain's vertices when absent.
        #[arg(long)]
        samples: Option<PathBuf>,
        #[arg(long, default_value_t = 0.3)]
        bandwidth: f64,
        #[arg(long, default_value_t = 2)]
        restarts: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Mapper graphs of two point clouds, their local-maxima quotients and
    /// a norm-optimal chain map between the quotients.
    MapperMatch {
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        y: PathBuf,
        #[command(flatten)]
        mapper: MapperFlags,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args, Debug)]
pub struct ColorArgs {
    /// Map JSON.
    #[arg(long)]
    pub map: PathBuf,
    /// CSV rows `vertex_id,r,g,b` for every domain vertex.
    #[arg(long)]
    pub palette: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

/// Parses `args` and runs the command, printing errors to stderr. Returns
/// the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    let command_line = args.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    match run(&cli, command_line) {
        Ok(summary) => {
            println!("{}", canonical(&summary));
            0
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

/// Runs a parsed command and returns its summary.
pub fn run(cli: &Cli, command_line: Vec<String>) -> CliResult<Value> {
    let mut m = RunManifest::new(command_line, cli.seed);
    let summary = match &cli.command {
        Command::Build(b) => cmd_build(b, cli.seed, &mut m)?,
        Command::Hom(h) => cmd_hom(h, &mut m)?,
        Command::Map(a) => cmd_map(a, cli.seed, &mut m)?,
        Command::App(a) => cmd_app(a, cli.seed, &mut m)?,
        Command::Color(c) => cmd_color(c, &mut m)?,
    };
    Ok(summary)
}

/// Canonical JSON text: sorted keys, shortest round-trip numbers, trailing
/// newline omitted.
pub fn canonical(v: &Value) -> String {
    serde_json::to_string(v).expect("JSON values serialize")
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn read_text(path: &Path, m: &mut RunManifest) -> CliResult<String> {
    let text = fs::read_to_string(path).map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
    m.add_input(path, text.as_bytes());
    Ok(text)
}

fn read_json(path: &Path, m: &mut RunManifest) -> CliResult<Value> {
    let text = read_text(path, m)?;
    serde_json::from_str(&text).map_err(|e| CliError::input(format!("{} is not valid JSON: {e}", path.display())))
}

fn read_complex(path: &Path, m: &mut RunManifest) -> CliResult<SimplicialComplex> {
    let v = read_json(path, m)?;
    SimplicialComplex::from_json(&v).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn read_points(path: &Path, m: &mut RunManifest) -> CliResult<PointCloud> {
    let text = read_text(path, m)?;
    PointCloud::from_csv(text.as_bytes()).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str, m: &mut RunManifest) -> CliResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::input(format!("cannot create {}: {e}", dir.display())))?;
    }
    fs::write(path, contents).map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))?;
    m.add_output(path, contents.as_bytes());
    Ok(())
}

fn write_json(path: &Path, v: &Value, m: &mut RunManifest) -> CliResult<()> {
    let mut text = canonical(v);
    text.push('\n');
    write_file(path, &text, m)
}

fn finish(m: &mut RunManifest, manifest_path: &Path) -> CliResult<()> {
    let text = canonical(&m.finish()) + "\n";
    fs::write(manifest_path, text)
        .map_err(|e| CliError::input(format!("cannot write {}: {e}", manifest_path.display())))
}

fn complex_summary(k: &SimplicialComplex) -> Value {
    let counts: Vec<usize> = (0..=k.dim().unwrap_or(0)).map(|d| k.count(d)).collect();
    json!({"counts": counts, "simplices": k.len()})
}

fn filter_values(points: &PointCloud, coord: Option<usize>) -> CliResult<Vec<f64>> {
    let d = points.ambient_dim();
    let k = coord.unwrap_or(d.saturating_sub(1));
    if k >= d {
        return Err(CliError::usage(format!("filter coordinate {k} but points have dimension {d}")));
    }
    Ok(points.points().iter().map(|p| p[k]).collect())
}

fn check_mapper_flags(f: &MapperFlags) -> CliResult<()> {
    if f.intervals == 0 {
        return Err(CliError::usage("--intervals must be at least 1"));
    }
    if !(f.overlap > 0.0 && f.overlap < 1.0) {
        return Err(CliError::usage("--overlap must lie in (0, 1)"));
    }
    if !(f.link >= 0.0) {
        return Err(CliError::usage("--link must be non-negative"));
    }
    Ok(())
}

fn maxima_rule(a: MaximaArg) -> MaximumRule {
    match a {
        MaximaArg::Plateau => MaximumRule::Plateau,
        MaximaArg::Strict => MaximumRule::Strict,
    }
}

pub fn cmd_build(b: &BuildCommand, seed: u64, m: &mut RunManifest) -> CliResult<Value> {
    let (complex, out, extra) = match b {
        BuildCommand::Model { name, out } => {
            let model: ModelComplex = name.parse().map_err(|e: Error| CliError::usage(e.to_string()))?;
            (model_complex(model)?, out, json!({"model": model.to_string()}))
        }
        BuildCommand::Rips { input, rmax, maxdim, out } => {
            if !(*rmax >= 0.0) {
                return Err(CliError::usage("--rmax must be non-negative"));
            }
            let pc = read_points(input, m)?;
            (vietoris_rips(&pc, *rmax, *maxdim)?, out, json!({"points": pc.len()}))
        }
        BuildCommand::Witness { input, landmarks, nu, rmax, maxdim, out } => {
            if rmax.is_some_and(|r| !(r >= 0.0)) {
                return Err(CliError::usage("--rmax must be non-negative"));
            }
            if *landmarks == 0 {
                return Err(CliError::usage("--landmarks must be at least 1"));
            }
            let pc = read_points(input, m)?;
            let lm = maxmin_landmarks(&pc, *landmarks, seed)?;
            let k = lazy_witness(&pc, &lm.indices, *nu, rmax.unwrap_or(f64::INFINITY), *maxdim)?;
            let record = json!({"first": lm.first, "indices": lm.indices, "nu": nu, "seed": seed});
            write_json(&with_suffix(out, ".landmarks.json"), &record, m)?;
            (k, out, json!({"landmarks": lm.indices}))
        }
        BuildCommand::Mapper { mapper, input, quotient, out } => {
            check_mapper_flags(mapper)?;
            let pc = read_points(input, m)?;
            let f = filter_values(&pc, mapper.filter_coord)?;
            let g = mapper_1d(&pc, &f, mapper.intervals, mapper.overlap, mapper.link)?;
            write_json(&with_suffix(out, ".graph.json"), &g.to_json(), m)?;
            let k = if *quotient { g.quotient_local_maxima(maxima_rule(mapper.maxima))?.complex } else { g.to_complex() };
            (k, out, json!({"nodes": g.nodes.len(), "edges": g.edges.len()}))
        }
    };
    write_json(out, &complex.to_json(), m)?;
    finish(m, &with_suffix(out, ".manifest.json"))?;
    Ok(json!({"complex": complex_summary(&complex), "details": extra, "out": out.display().to_string()}))
}

fn parse_policy(s: &str) -> CliResult<BPolicy> {
    s.parse().map_err(|e: Error| CliError::usage(e.to_string()))
}

fn hom_over<F: Field>(
    x: &SimplicialComplex,
    y: &SimplicialComplex,
    policy: &BPolicy,
) -> CliResult<(Value, Value, usize, usize)> {
    let p = chain_map_generators::<F>(x, y)?.with_policy(policy)?;
    let expected = kunneth_rank::<F>(x, y, 0);
    let report = json!({
        "field": F::KIND.tag(),
        "generators": p.generators().len(),
        "generator_degrees": p.generator_degrees(),
        "homotopies": p.homotopies().len(),
        "independent_homotopies": p.independent_homotopies().len(),
        "kunneth_rank": expected,
    });
    Ok((p.to_json(), report, p.generators().len(), expected))
}

pub fn cmd_hom(h: &HomArgs, m: &mut RunManifest) -> CliResult<Value> {
    let policy = parse_policy(&h.b)?;
    let x = read_complex(&h.domain, m)?;
    let y = read_complex(&h.codomain, m)?;
    let (param, report, got, expected) = match h.field {
        FieldArg::Q => hom_over::<Rational>(&x, &y, &policy)?,
        FieldArg::Z2 => hom_over::<Z2>(&x, &y, &policy)?,
    };
    m.set_field(match h.field {
        FieldArg::Q => FieldKind::Rational,
        FieldArg::Z2 => FieldKind::Z2,
    });
    if got != expected {
        return Err(CliError::internal(format!(
            "{got} generators but the cohomology-homology count is {expected}"
        )));
    }
    write_json(&h.out, &param, m)?;
    finish(m, &with_suffix(&h.out, ".manifest.json"))?;
    Ok(report)
}

fn map_report<F: Field>(g: &ChainMapMatrix<F>) -> Value {
    let pen = bisimplicial_penalty(g);
    json!({
        "chain_map": g.is_chain_map(),
        "norm_objective": norm_objective(g),
        "penalty": pen.value,
        "image_counts": pen.image_counts,
        "preimage_counts": pen.preimage_counts,
    })
}

fn write_map<F: Field>(prefix: &Path, g: &ChainMapMatrix<F>, m: &mut RunManifest) -> CliResult<()> {
    write_json(&with_suffix(prefix, ".map.json"), &map_to_json(g), m)?;
    write_file(&with_suffix(prefix, ".map.csv"), &map_to_csv(g), m)
}

fn param_field(v: &Value) -> CliResult<FieldKind> {
    let tag = v.get("field").and_then(Value::as_str).ok_or_else(|| CliError::input("parameterization lacks a field tag"))?;
    Ok(FieldKind::from_tag(tag)?)
}

fn continuous_param(v: &Value, kind: FieldKind) -> CliResult<MapParameterization<Rational>> {
    match kind {
        FieldKind::Rational => Ok(MapParameterization::<Rational>::from_json(v)?),
        FieldKind::Float => Ok(MapParameterization::<f64>::from_json(v)?.map_field::<Rational>()),
        FieldKind::Z2 => Err(CliError::usage("this method needs a parameterization over q, not z2")),
    }
}

pub fn cmd_map(a: &MapArgs, seed: u64, m: &mut RunManifest) -> CliResult<Value> {
    let v = read_json(&a.param, m)?;
    let kind = param_field(&v)?;
    m.set_field(kind);
    let z2_method = matches!(a.method, MethodArg::Enumerate | MethodArg::Anneal | MethodArg::Greedy);
    if z2_method && kind != FieldKind::Z2 {
        return Err(CliError::usage("enumerate, anneal and greedy need a parameterization over z2"));
    }
    let mut report = serde_json::Map::new();
    match a.method {
        MethodArg::LpRandomVertex => {
            let p = continuous_param(&v, kind)?;
            let sol = random_vertex(&p, seed, a.backend.into())?;
            report.insert("optimum".into(), json!(sol.optimum));
            report.insert("value".into(), json!(sol.value));
            report.insert("vertex".into(), json!(sol.vertex));
            report.insert("coefficients".into(), json!(sol.coefficients));
            report.insert("map".into(), map_report(&sol.map));
            write_map(&a.out, &sol.map, m)?;
        }
        MethodArg::Aw => {
            let p = continuous_param(&v, kind)?.map_field::<f64>();
            let opts = DescentOptions { max_iterations: a.max_iterations, restarts: a.restarts, ..Default::default() };
            let (run, g) = minimize_aw(&p, None, &opts, seed)?;
            report.insert("initial_loss".into(), json!(run.initial_value));
            report.insert("loss".into(), json!(run.value));
            report.insert("iterations".into(), json!(run.trace.len().saturating_sub(1)));
            report.insert("run".into(), json!(run.run));
            report.insert("coefficients".into(), json!(run.coefficients));
            report.insert("map".into(), map_report(&g));
            write_map(&a.out, &g, m)?;
        }
        MethodArg::Enumerate => {
            let p = MapParameterization::<Z2>::from_json(&v)?;
            if p.homotopies().len() > a.cap {
                return Err(CliError::usage(format!(
                    "{} homotopy columns exceed --cap {}",
                    p.homotopies().len(),
                    a.cap
                )));
            }
            let e = enumerate_z2(&p, a.cap)?;
            write_json(&with_suffix(&a.out, ".histogram.json"), &e.to_json(), m)?;
            report.insert("total".into(), json!(e.total));
            report.insert("min_value".into(), json!(e.min_value));
            report.insert("minimizers".into(), json!(e.minimizers.len()));
            if let Some(&k) = e.minimizers.first() {
                let c = crate::optimize::bits_to_z2(&e.coefficients(k));
                let g = p.to_map(&p.evaluate_vector(&c)?);
                report.insert("map".into(), map_report(&g));
                write_map(&a.out, &g, m)?;
            }
        }
        MethodArg::Anneal | MethodArg::Greedy => {
            let p = MapParameterization::<Z2>::from_json(&v)?;
            let width = p.homotopies().len();
            let trace = if a.method == MethodArg::Anneal {
                if !(a.t0 >= 0.0) || !(a.cooling > 0.0 && a.cooling <= 1.0) {
                    return Err(CliError::usage("--t0 must be non-negative and --cooling in (0, 1]"));
                }
                let schedule = AnnealingSchedule { t0: a.t0, cooling: a.cooling, iterations: a.iterations };
                simulated_annealing(width, penalty_objective(&p), schedule, None, seed)?
            } else {
                greedy_search(width, penalty_objective(&p), a.restarts, None, seed)?
            };
            let g = p.to_map(&p.evaluate_vector(&crate::optimize::bits_to_z2(&trace.best_coefficients))?);
            report.insert("search".into(), trace.to_json());
            report.insert("monotone".into(), json!(trace.is_monotone()));
            report.insert("map".into(), map_report(&g));
            write_map(&a.out, &g, m)?;
        }
    }
    let method = a.method.to_possible_value().expect("named").get_name().to_string();
    report.insert("method".into(), json!(method));
    let report = Value::Object(report);
    write_json(&with_suffix(&a.out, ".report.json"), &report, m)?;
    finish(m, &with_suffix(&a.out, ".manifest.json"))?;
    Ok(report)
}

fn vertex_coordinates(k: &SimplicialComplex, what: &str) -> CliResult<Vec<Vec<f64>>> {
    k.vertex_coordinates().ok_or_else(|| CliError::input(format!("the {what} complex has no vertex coordinates")))
}

pub fn cmd_app(a: &AppCommand, seed: u64, m: &mut RunManifest) -> CliResult<Value> {
    m.set_field(FieldKind::Rational);
    match a {
        AppCommand::CircleCoords { domain, n, mode, start, restarts, out } => {
            let model = CircleModel::new(*n).map_err(|e| CliError::usage(e.to_string()))?;
            let x = read_complex(domain, m)?;
            let coords = vertex_coordinates(&x, "domain")?;
            if coords.iter().any(|c| c.len() < 2) {
                return Err(CliError::input("circle coordinates need planar domain vertices"));
            }
            let y = model.complex();
            let p = chain_map_generators::<Rational>(&x, &y)?;
            let start_c = match start {
                StartArg::Zero => None,
                StartArg::Lp => Some(random_vertex(&p, seed, LpBackend::Auto)?.coefficients),
            };
            let mode = match mode {
                ModeArg::Literal => CircleLocalization::Literal,
                ModeArg::Chord => CircleLocalization::Chord,
            };
            let opts = DescentOptions { restarts: *restarts, ..Default::default() };
            let pf = p.map_field::<f64>();
            let res = minimize_circle_distortion(&pf, &model, mode, start_c.as_deref(), &opts, seed)?;
            let ids = x.vertex_ids();
            let domain_angle: Vec<f64> = coords.iter().map(|c| c[1].atan2(c[0]).rem_euclid(TAU)).collect();
            let mut order: Vec<usize> = (0..ids.len()).collect();
            order.sort_by(|&i, &j| domain_angle[i].total_cmp(&domain_angle[j]));
            let cycle: Vec<f64> = order.iter().map(|&i| res.angles[i]).collect();
            let winding = winding_number(&cycle);
            let mut angles_csv = String::from("vertex,angle\n");
            let mut plot_csv = String::from("domain_angle,computed_angle\n");
            for (i, id) in ids.iter().enumerate() {
                writeln!(angles_csv, "{id},{:.6}", res.angles[i]).expect("string write");
            }
            for &i in &order {
                writeln!(plot_csv, "{:.6},{:.6}", domain_angle[i], res.angles[i]).expect("string write");
            }
            write_file(&with_suffix(out, ".angles.csv"), &angles_csv, m)?;
            write_file(&with_suffix(out, ".plot.csv"), &plot_csv, m)?;
            let report = json!({
                "distortion": res.distortion,
                "initial_distortion": res.initial_distortion,
                "winding_number": winding,
                "coefficients": res.coefficients.len(),
            });
            write_json(&with_suffix(out, ".report.json"), &report, m)?;
            finish(m, &with_suffix(out, ".manifest.json"))?;
            Ok(report)
        }
        AppCommand::Density { domain, codomain, samples, bandwidth, restarts, out } => {
            if !(*bandwidth > 0.0) {
                return Err(CliError::usage("--bandwidth must be positive"));
            }
            let x = read_complex(domain, m)?;
            let y = read_complex(codomain, m)?;
            let phi = vertex_coordinates(&y, "codomain")?;
            let pts = match samples {
                Some(path) => read_points(path, m)?,
                None => PointCloud::new(phi.clone())?,
            };
            let density = DensityEstimate::new(pts, *bandwidth)?;
            let p = chain_map_generators::<Rational>(&x, &y)?.map_field::<f64>();
            let opts = DescentOptions { restarts: *restarts, ..Default::default() };
            let res = maximize_density(&p, &density, &phi, None, &opts, seed)?;
            let mut csv = String::from("vertex");
            for k in 0..density.dim() {
                write!(csv, ",x{k}").expect("string write");
            }
            csv.push('\n');
            for (id, pos) in x.vertex_ids().iter().zip(&res.image) {
                write!(csv, "{id}").expect("string write");
                for c in pos {
                    write!(csv, ",{c:.6}").expect("string write");
                }
                csv.push('\n');
            }
            write_file(&with_suffix(out, ".image.csv"), &csv, m)?;
            let report = json!({
                "initial_objective": res.initial_value,
                "objective": res.value,
                "improved": res.value >= res.initial_value,
            });
            write_json(&with_suffix(out, ".report.json"), &report, m)?;
            finish(m, &with_suffix(out, ".manifest.json"))?;
            Ok(report)
        }
        AppCommand::MapperMatch { x, y, mapper, out } => {
            check_mapper_flags(mapper)?;
            let mut quotients = Vec::new();
            for (tag, path) in [("x", x), ("y", y)] {
                let pc = read_points(path, m)?;
                let f = filter_values(&pc, mapper.filter_coord)?;
                let g = mapper_1d(&pc, &f, mapper.intervals, mapper.overlap, mapper.link)?;
                let q = g.quotient_local_maxima(maxima_rule(mapper.maxima))?;
                write_json(&with_suffix(out, &format!(".{tag}.graph.json")), &g.to_json(), m)?;
                write_json(&with_suffix(out, &format!(".{tag}.complex.json")), &q.complex.to_json(), m)?;
                quotients.push(q.complex);
            }
            let p = chain_map_generators::<Rational>(&quotients[0], &quotients[1])?;
            let sol = random_vertex(&p, seed, LpBackend::Auto)?;
            write_map(out, &sol.map, m)?;
            let betti = |k: &SimplicialComplex| crate::complexes::betti::<Rational>(k);
            let report = json!({
                "x_betti": betti(&quotients[0]),
                "y_betti": betti(&quotients[1]),
                "generators": p.generators().len(),
                "optimum": sol.optimum,
                "map": map_report(&sol.map),
            });
            write_json(&with_suffix(out, ".report.json"), &report, m)?;
            finish(m, &with_suffix(out, ".manifest.json"))?;
            Ok(report)
        }
    }
}

/// Reads `vertex_id,r,g,b` rows; a non-numeric first row is a header.
pub fn read_palette(text: &str) -> CliResult<BTreeMap<usize, Rgb>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut out = BTreeMap::new();
    for (row, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| CliError::input(format!("palette: {e}")))?;
        if record.len() != 4 {
            return Err(CliError::input(format!("palette row {} has {} fields, expected 4", row + 1, record.len())));
        }
        let Ok(id) = record[0].parse::<usize>() else {
            if row == 0 {
                continue;
            }
            return Err(CliError::input(format!("palette row {} has a bad vertex id", row + 1)));
        };
        let mut c = [0.0; 3];
        for k in 0..3 {
            c[k] = record[k + 1]
                .parse::<f64>()
                .map_err(|_| CliError::input(format!("palette row {} has a bad color value", row + 1)))?;
        }
        out.insert(id, c);
    }
    Ok(out)
}

pub fn cmd_color(c: &ColorArgs, m: &mut RunManifest) -> CliResult<Value> {
    let v = read_json(&c.map, m)?;
    let g = map_from_json::<f64>(&v)?;
    let palette = read_palette(&read_text(&c.palette, m)?)?;
    let x = g.domain().clone();
    let mu = x
        .vertex_ids()
        .iter()
        .map(|id| palette.get(id).copied().ok_or_else(|| CliError::input(format!("palette has no color for vertex {id}"))))
        .collect::<CliResult<Vec<Rgb>>>()?;
    let coloring = pushforward_coloring(&g, &mu)?;
    let intense: Vec<Value> = intensity_report(&g)
        .into_iter()
        .map(|(t, s)| json!([g.codomain().simplex(t).to_string(), s]))
        .collect();
    let mut out = coloring.to_json(&x, g.codomain());
    out.as_object_mut().expect("object").insert("intensity".into(), Value::Array(intense.clone()));
    write_json(&c.out, &out, m)?;
    finish(m, &with_suffix(&c.out, ".manifest.json"))?;
    Ok(json!({"intense_simplices": intense.len(), "out": c.out.display().to_string()}))
}
