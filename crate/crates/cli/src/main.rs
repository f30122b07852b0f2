//! `mmfield` command line tool.

mod manifest;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use mmfield::adm::{adm_sample, convergence_csv, convergence_experiment};
use mmfield::gw::{glue, gw_distance, Exponent, GwOptions, SolverKind};
use mmfield::hypergraph::{build_hypergraph, hypergraph_to_field};
use mmfield::io::{self, round_json};
use mmfield::lipschitz::{field_one_point_extend, MassMode};
use mmfield::transport::MARGINAL_TOL;
use mmfield::{validate_field, validate_metric, Coupling, Error, MMField, Matrix, DEFAULT_TOL};

use manifest::Manifest;

#[derive(Parser, Debug)]
#[command(name = "mmfield", version, about = "Metric-measure fields: validation, distances and estimators")]
struct Cli {
    /// Maximum number of worker threads.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Where to write the run manifest. Defaults to `<out>.manifest.json`
    /// when `--out` is given and to standard error otherwise.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    /// Output file; standard output when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the metric axioms, the measure and the Lipschitz condition.
    Validate(ValidateArgs),
    /// Field Gromov-Wasserstein distance between two fields.
    Gw(GwArgs),
    /// Estimate of the distance between order-n ADM distributions.
    Adm(AdmArgs),
    /// ADM estimates for several orders.
    Converge(ConvergeArgs),
    /// Community hypergraphs.
    #[command(subcommand)]
    Hypergraph(HypergraphCommand),
    /// Glue two fields along a coupling.
    Glue(GlueArgs),
    /// Add one point to a field.
    Extend(ExtendArgs),
}

#[derive(Subcommand, Debug)]
enum HypergraphCommand {
    /// Build the community hypergraph of a point cloud or metric as a field.
    Build(HypergraphArgs),
}

#[derive(Args, Debug, Serialize)]
struct ValidateArgs {
    file: PathBuf,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
}

#[derive(Args, Debug, Serialize)]
struct GwArgs {
    x: PathBuf,
    y: PathBuf,
    /// Exponent: a number >= 1 or `inf`.
    #[arg(long, default_value = "inf")]
    #[serde(serialize_with = "display")]
    p: Exponent,
    /// `exact` or `local`.
    #[arg(long, default_value = "exact")]
    #[serde(serialize_with = "display")]
    mode: SolverKind,
    #[arg(long, default_value_t = 32)]
    restarts: usize,
    #[arg(long, default_value_t = 0.01)]
    grid_step: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug, Serialize)]
struct AdmArgs {
    x: PathBuf,
    y: PathBuf,
    /// ADM order.
    #[arg(long)]
    n: usize,
    /// Number of sampled ADMs per field.
    #[arg(long = "N", default_value_t = 500)]
    count: usize,
    #[arg(long, default_value = "1")]
    #[serde(serialize_with = "display")]
    p: Exponent,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also write both empirical distributions as JSON into this directory.
    #[arg(long)]
    dump_dir: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct ConvergeArgs {
    x: PathBuf,
    y: PathBuf,
    /// Comma-separated ADM orders.
    #[arg(long, value_delimiter = ',', required = true)]
    n_list: Vec<usize>,
    #[arg(long = "N", default_value_t = 500)]
    count: usize,
    #[arg(long, default_value = "1")]
    #[serde(serialize_with = "display")]
    p: Exponent,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug, Serialize)]
struct HypergraphArgs {
    /// A metric object (`{"kind": ...}`) or a bare array of points.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    r: f64,
    /// Comma-separated centrality exponents. One field is written per
    /// exponent; several are written as a JSON array in this order.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    p: Vec<f64>,
}

#[derive(Args, Debug, Serialize)]
struct GlueArgs {
    x: PathBuf,
    y: PathBuf,
    /// JSON matrix with the coupling.
    #[arg(long, conflicts_with = "optimal", required_unless_present = "optimal")]
    coupling: Option<PathBuf>,
    /// Glue along an optimal coupling for `p = ∞`.
    #[arg(long)]
    optimal: bool,
}

#[derive(Args, Debug, Serialize)]
struct ExtendArgs {
    file: PathBuf,
    /// JSON candidate `{"f": [...], "b": <value>}`.
    #[arg(long)]
    candidate: PathBuf,
    /// Give every point mass `1/(n+1)` instead of giving the new point none.
    #[arg(long)]
    reweight: bool,
}

fn display<T: std::fmt::Display, S: serde::Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// Failure with its exit status.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Json { .. } => 4,
            Error::Infeasible(_) | Error::InfeasibleMarginals(_) | Error::SizeLimit { .. } | Error::EmptySupport => 3,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}

type Outcome<T> = Result<T, Failure>;

fn read(path: &Path, manifest: &mut Manifest) -> Outcome<String> {
    let bytes = fs::read(path).map_err(|e| Failure::new(2, format!("{}: {e}", path.display())))?;
    manifest.input(path, &bytes);
    String::from_utf8(bytes).map_err(|e| Failure::new(4, format!("{}: not UTF-8: {e}", path.display())))
}

fn read_field(path: &Path, manifest: &mut Manifest) -> Outcome<MMField> {
    let text = read(path, manifest)?;
    io::parse_field(&text).map_err(|e| {
        let mut f = Failure::from(e);
        f.message = format!("{}: {}", path.display(), f.message);
        f
    })
}

fn pretty(mut v: Value) -> String {
    round_json(&mut v);
    let mut s = serde_json::to_string_pretty(&v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn exponent_json(p: Exponent) -> Value {
    match p {
        Exponent::Finite(q) => json!(q),
        Exponent::Infinity => json!("inf"),
    }
}

/// The seed in effect: `MMFIELD_SEED` wins over `--seed`.
fn effective_seed(flag: u64) -> Outcome<u64> {
    match std::env::var("MMFIELD_SEED") {
        Ok(s) => s.trim().parse().map_err(|_| Failure::new(2, format!("MMFIELD_SEED={s} is not an integer"))),
        Err(_) => Ok(flag),
    }
}

fn run(cli: &Cli, manifest: &mut Manifest) -> Outcome<(String, u8)> {
    match &cli.command {
        Command::Validate(a) => {
            manifest.parameters(a);
            let text = read(&a.file, manifest)?;
            let field = io::parse_field(&text)?;
            let mut report = validate_metric(field.metric(), a.tol);
            report.merge(validate_field(&field, a.tol));
            let code = if report.is_valid() { 0 } else { 2 };
            let v = json!({
                "valid": report.is_valid(),
                "total": report.total,
                "violations": report.violations,
            });
            Ok((pretty(v), code))
        }
        Command::Gw(a) => {
            let seed = effective_seed(a.seed)?;
            manifest.parameters(a);
            manifest.seed(seed);
            let (fx, fy) = (read_field(&a.x, manifest)?, read_field(&a.y, manifest)?);
            let mut options = GwOptions { mode: a.mode, seed, restarts: a.restarts, ..GwOptions::default() };
            options.grid_step = a.grid_step;
            let r = gw_distance(&fx, &fy, a.p, &options)?;
            let v = json!({
                "value": r.value,
                "p": exponent_json(r.p),
                "mode": r.solver.to_string(),
                "coupling": r.coupling.plan().to_rows(),
                "error_bound": if r.error_bound.is_finite() { json!(r.error_bound) } else { Value::Null },
            });
            Ok((pretty(v), 0))
        }
        Command::Adm(a) => {
            let seed = effective_seed(a.seed)?;
            manifest.parameters(a);
            manifest.seed(seed);
            let (fx, fy) = (read_field(&a.x, manifest)?, read_field(&a.y, manifest)?);
            let rows = convergence_experiment(&fx, &fy, &[a.n], a.count, a.p, seed)?;
            if let Some(dir) = &a.dump_dir {
                fs::create_dir_all(dir).map_err(|e| Failure::new(2, format!("{}: {e}", dir.display())))?;
                for (name, f) in [("x.adm.json", &fx), ("y.adm.json", &fy)] {
                    let path = dir.join(name);
                    write(&path, &io::adm_to_json(&adm_sample(f, a.n, a.count, seed)?))?;
                    manifest.output(&path);
                }
            }
            Ok((convergence_csv(&rows), 0))
        }
        Command::Converge(a) => {
            let seed = effective_seed(a.seed)?;
            manifest.parameters(a);
            manifest.seed(seed);
            let (fx, fy) = (read_field(&a.x, manifest)?, read_field(&a.y, manifest)?);
            let rows = convergence_experiment(&fx, &fy, &a.n_list, a.count, a.p, seed)?;
            Ok((convergence_csv(&rows), 0))
        }
        Command::Hypergraph(HypergraphCommand::Build(a)) => {
            manifest.parameters(a);
            let text = read(&a.input, manifest)?;
            let metric = io::parse_metric(&text)?;
            let h = build_hypergraph(&metric, a.r, &a.p)?;
            let fields = a
                .p
                .iter()
                .map(|&p| Ok(io::field_to_value(&hypergraph_to_field(&h, p)?)))
                .collect::<Outcome<Vec<_>>>()?;
            let v = if fields.len() == 1 { fields.into_iter().next().expect("one field") } else { Value::from(fields) };
            Ok((pretty(v), 0))
        }
        Command::Glue(a) => {
            manifest.parameters(a);
            let (fx, fy) = (read_field(&a.x, manifest)?, read_field(&a.y, manifest)?);
            let coupling = match &a.coupling {
                Some(path) => {
                    let rows = io::parse_matrix(&read(path, manifest)?)?;
                    Coupling::new(Matrix::from_rows(rows)?, fx.measure(), fy.measure())?
                }
                None => gw_distance(&fx, &fy, Exponent::Infinity, &GwOptions::exact())?.coupling,
            };
            coupling.check(fx.measure(), fy.measure(), MARGINAL_TOL)?;
            let glued = glue(&fx, &fy, &coupling)?;
            Ok((pretty(io::field_to_value(&glued.field)), 0))
        }
        Command::Extend(a) => {
            manifest.parameters(a);
            let field = read_field(&a.file, manifest)?;
            let candidate = io::parse_candidate(&read(&a.candidate, manifest)?, field.target())?;
            let mode = if a.reweight { MassMode::UniformReweight } else { MassMode::ZeroMass };
            let extended = field_one_point_extend(&field, &candidate, mode, DEFAULT_TOL)?;
            Ok((pretty(io::field_to_value(&extended)), 0))
        }
    }
}

fn write(path: &Path, text: &str) -> Outcome<()> {
    fs::write(path, text).map_err(|e| Failure::new(2, format!("{}: {e}", path.display())))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().expect("thread pool is set once");
    }
    let mut manifest = Manifest::new(std::env::args().nth(1).unwrap_or_default());
    let result = run(&cli, &mut manifest).and_then(|(text, code)| {
        match &cli.out {
            Some(path) => {
                write(path, &text)?;
                manifest.output(path);
            }
            None => {
                print!("{text}");
                manifest.output(Path::new("-"));
            }
        }
        Ok(code)
    });
    let code = match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            manifest.failure(f.code);
            f.code
        }
    };
    let target = cli.manifest.clone().or_else(|| {
        cli.out.as_ref().map(|o| {
            let mut s = o.clone().into_os_string();
            s.push(".manifest.json");
            PathBuf::from(s)
        })
    });
    let text = manifest.to_json();
    match target {
        Some(path) => {
            if let Err(e) = fs::write(&path, &text) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => eprint!("{text}"),
    }
    ExitCode::from(code)
}
