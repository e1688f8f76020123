//! Command-line front end for `subflat`.

pub mod error;
pub mod generate;
pub mod ingest;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};
use subflat::hyperplane::nearest_hyperplane_exact;
use subflat::metric::build_polytope;
use subflat::oracle::{brute_degeneracy, brute_nearest_flat, brute_nearest_simplex, OracleReport, DEFAULT_BUDGET};
use subflat::search::{degeneracy_test, nearest_flat_approx, nearest_simplex_approx};
use subflat::{NumericPolicy, PointSet, SubsetKind};

use error::{CliError, Result};
use generate::{GenSpec, Generator, Plant};
use ingest::{read_instance, Format, Instance};

pub const SCHEMA: u32 = 1;

#[derive(Debug, Parser)]
#[command(name = "subflat", version, about = "Nearest induced flats, simplices and hyperplanes")]
pub struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Add wall-clock time to the output record.
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a random instance.
    Gen(GenArgs),
    /// (1+eps)-approximate nearest affine or linear k-flat.
    NearestFlat(FlatArgs),
    /// (1+eps)-approximate nearest simplex on at most k points.
    NearestSimplex(SimplexArgs),
    /// Exact nearest line through two points (planar input).
    NearestHyperplane(ExactArgs),
    /// Whether some d+1 points lie on a common hyperplane.
    Degeneracy(ExactArgs),
    /// Brute-force reference answers.
    Oracle(OracleArgs),
    /// Time a solver over instance sizes and fit a log-log slope.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Variant {
    Affine,
    Linear,
}

impl From<Variant> for SubsetKind {
    fn from(v: Variant) -> Self {
        match v {
            Variant::Affine => SubsetKind::Affine,
            Variant::Linear => SubsetKind::Linear,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Problem {
    NearestFlat,
    NearestSimplex,
    NearestHyperplane,
    Degeneracy,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(value_enum, default_value = "uniform-cube")]
    pub generator: Generator,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub dim: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum)]
    pub plant: Option<Plant>,
    /// Points spanning a planted flat.
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long, default_value_t = 1e-3)]
    pub noise: f64,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Output file (default: standard output).
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// CSV (header x0,x1,...) or JSON ({"dim","points","query"}) file.
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Query point as comma-separated coordinates; overrides the file's.
    #[arg(long, allow_hyphen_values = true)]
    pub query: Option<String>,
}

#[derive(Debug, Args)]
pub struct NumericArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
    /// Relative magnitude of a random perturbation of the input.
    #[arg(long, default_value_t = 0.0)]
    pub perturb: f64,
}

impl NumericArgs {
    fn policy(&self) -> NumericPolicy<f64> {
        NumericPolicy { tolerance: self.tolerance, perturbation: self.perturb, seed: self.seed }
    }
}

#[derive(Debug, Args)]
pub struct FlatArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
    #[arg(long, value_enum, default_value = "affine")]
    pub variant: Variant,
    #[command(flatten)]
    pub numeric: NumericArgs,
    /// Also run the brute-force oracle and report the ratio.
    #[arg(long)]
    pub check: bool,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u128,
    /// Write the approximating polytope as JSON.
    #[arg(long)]
    pub dump_polytope: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimplexArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
    #[command(flatten)]
    pub numeric: NumericArgs,
    #[arg(long)]
    pub check: bool,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u128,
    #[arg(long)]
    pub dump_polytope: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExactArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub numeric: NumericArgs,
    #[arg(long)]
    pub check: bool,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u128,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_enum)]
    pub problem: Problem,
    /// Subset size (ignored for hyperplanes and degeneracy).
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long, value_enum, default_value = "affine")]
    pub variant: Variant,
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u128,
    /// Include every subset with its value.
    #[arg(long)]
    pub table: bool,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_enum, default_value = "nearest-flat")]
    pub problem: Problem,
    /// Comma-separated instance sizes.
    #[arg(long, value_delimiter = ',', required = true)]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 3)]
    pub trials: usize,
    #[arg(long, default_value_t = 3)]
    pub dim: usize,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long, default_value_t = 0.25)]
    pub epsilon: f64,
    #[arg(long, value_enum, default_value = "affine")]
    pub variant: Variant,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Result of one command: a JSON record for standard output and a short
/// summary for standard error.
#[derive(Debug)]
pub struct Output {
    pub record: Value,
    pub summary: String,
    /// Raw text written instead of the record (instances from `gen`).
    pub raw: Option<String>,
}

fn load(input: &InputArgs) -> Result<Instance> {
    let mut inst = read_instance(&input.input, input.format)?;
    if let Some(q) = &input.query {
        inst.query = Some(ingest::parse_point(q)?);
    }
    if let Some(q) = &inst.query {
        inst.points.check_query(q)?;
    }
    Ok(inst)
}

fn query_of(inst: &Instance) -> Result<&[f64]> {
    inst.query.as_deref().ok_or_else(|| CliError::Usage("no query point: pass --query or add one to the file".into()))
}

fn record(problem: &str) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("schema".into(), json!(SCHEMA));
    m.insert("problem".into(), json!(problem));
    m
}

fn oracle_json(report: &OracleReport<f64>, table: bool) -> Value {
    let mut v = json!({ "optimum": report.optimum, "optimizers": report.optimizers });
    if table {
        v["table"] = json!(report.table);
    }
    v
}

fn with_check(m: &mut Map<String, Value>, distance: f64, report: &OracleReport<f64>) {
    let mut o = oracle_json(report, false);
    let ratio = if report.optimum > 0.0 { distance / report.optimum } else if distance == 0.0 { 1.0 } else { f64::INFINITY };
    o["ratio"] = json!(ratio);
    m.insert("oracle".into(), o);
}

fn dump_polytope(path: &Option<PathBuf>, d: usize, eps: f64) -> Result<()> {
    if let Some(path) = path {
        let q = build_polytope::<f64>(d, eps)?;
        std::fs::write(path, serde_json::to_string_pretty(&q.dump()).expect("polytope serializes") + "\n")?;
    }
    Ok(())
}

fn flat(a: &FlatArgs) -> Result<Output> {
    let inst = load(&a.input)?;
    let y = query_of(&inst)?;
    let kind: SubsetKind = a.variant.into();
    dump_polytope(&a.dump_polytope, inst.points.dim(), a.epsilon)?;
    let ans = nearest_flat_approx(&inst.points, y, a.k, a.epsilon, kind, &a.numeric.policy())?;
    let mut m = record("nearest-flat");
    m.insert("variant".into(), json!(format!("{:?}", a.variant).to_lowercase()));
    m.insert("k".into(), json!(a.k));
    m.insert("epsilon".into(), json!(a.epsilon));
    m.insert("seed".into(), json!(a.numeric.seed));
    m.insert("subset".into(), json!(ans.subset.indices));
    m.insert("distance".into(), json!(ans.euclid));
    m.insert("gauge".into(), json!(ans.gauge));
    m.insert("faces".into(), json!(ans.faces));
    m.insert("faces_hit".into(), json!(ans.faces_hit));
    if a.check {
        let report = brute_nearest_flat(&inst.points, y, a.k, kind, a.budget, false)?;
        with_check(&mut m, ans.euclid, &report);
    }
    let summary = format!("nearest {}-flat {:?} at distance {:.6e}", a.k, ans.subset.indices, ans.euclid);
    Ok(Output { record: Value::Object(m), summary, raw: None })
}

fn simplex(a: &SimplexArgs) -> Result<Output> {
    let inst = load(&a.input)?;
    let y = query_of(&inst)?;
    dump_polytope(&a.dump_polytope, inst.points.dim(), a.epsilon)?;
    let ans = nearest_simplex_approx(&inst.points, y, a.k, a.epsilon, &a.numeric.policy())?;
    let mut m = record("nearest-simplex");
    m.insert("k".into(), json!(a.k));
    m.insert("epsilon".into(), json!(a.epsilon));
    m.insert("seed".into(), json!(a.numeric.seed));
    m.insert("subset".into(), json!(ans.subset.indices));
    m.insert("distance".into(), json!(ans.euclid));
    m.insert("gauge".into(), json!(ans.gauge));
    m.insert("faces".into(), json!(ans.faces));
    m.insert("faces_hit".into(), json!(ans.faces_hit));
    if a.check {
        let report = brute_nearest_simplex(&inst.points, y, a.k, a.budget, false)?;
        with_check(&mut m, ans.euclid, &report);
    }
    let summary = format!("nearest simplex {:?} at distance {:.6e}", ans.subset.indices, ans.euclid);
    Ok(Output { record: Value::Object(m), summary, raw: None })
}

fn hyperplane(a: &ExactArgs) -> Result<Output> {
    let inst = load(&a.input)?;
    let y = query_of(&inst)?;
    let ans = nearest_hyperplane_exact(&inst.points, y, &a.numeric.policy())?;
    let mut m = record("nearest-hyperplane");
    m.insert("seed".into(), json!(a.numeric.seed));
    m.insert("subset".into(), json!(ans.subset.indices));
    m.insert("distance".into(), json!(ans.distance));
    m.insert("ties".into(), json!(ans.ties.iter().map(|t| &t.indices).collect::<Vec<_>>()));
    m.insert("zone_candidates".into(), json!(ans.zone_candidates));
    m.insert("band_candidates".into(), json!(ans.band_candidates));
    if a.check {
        let report = brute_nearest_flat(&inst.points, y, inst.points.dim(), SubsetKind::Affine, a.budget, false)?;
        with_check(&mut m, ans.distance, &report);
    }
    let summary = format!("nearest hyperplane {:?} at distance {:.6e}", ans.subset.indices, ans.distance);
    Ok(Output { record: Value::Object(m), summary, raw: None })
}

fn degeneracy(a: &ExactArgs) -> Result<Output> {
    let inst = load(&a.input)?;
    let rep = degeneracy_test(&inst.points, &a.numeric.policy())?;
    let mut m = record("degeneracy");
    m.insert("positive".into(), json!(rep.positive));
    m.insert("flagged".into(), json!(rep.flagged));
    if a.check {
        let witness = brute_degeneracy(&inst.points, a.numeric.tolerance, a.budget)?;
        m.insert("oracle".into(), json!({ "positive": witness.is_some(), "witness": witness }));
    }
    let summary = if rep.positive {
        format!("degenerate: {} points flagged", rep.flagged.len())
    } else {
        "in general position".to_string()
    };
    Ok(Output { record: Value::Object(m), summary, raw: None })
}

fn oracle(a: &OracleArgs) -> Result<Output> {
    let inst = load(&a.input)?;
    let s = &inst.points;
    let (name, value, summary) = match a.problem {
        Problem::Degeneracy => {
            let w = brute_degeneracy(s, a.tolerance, a.budget)?;
            let summary = format!("degenerate: {}", w.is_some());
            ("degeneracy", json!({ "positive": w.is_some(), "witness": w }), summary)
        }
        p => {
            let y = query_of(&inst)?;
            let (name, report) = match p {
                Problem::NearestFlat => ("nearest-flat", brute_nearest_flat(s, y, a.k, a.variant.into(), a.budget, a.table)?),
                Problem::NearestSimplex => ("nearest-simplex", brute_nearest_simplex(s, y, a.k, a.budget, a.table)?),
                _ => ("nearest-hyperplane", brute_nearest_flat(s, y, s.dim(), SubsetKind::Affine, a.budget, a.table)?),
            };
            let summary = format!("optimum {:.6e} at {:?}", report.optimum, report.optimizers.first());
            (name, oracle_json(&report, a.table), summary)
        }
    };
    let mut m = record(name);
    m.insert("oracle".into(), value);
    if a.problem == Problem::NearestFlat {
        m.insert("variant".into(), json!(format!("{:?}", a.variant).to_lowercase()));
    }
    if matches!(a.problem, Problem::NearestFlat | Problem::NearestSimplex) {
        m.insert("k".into(), json!(a.k));
    }
    Ok(Output { record: Value::Object(m), summary, raw: None })
}

fn bench_once(a: &BenchArgs, s: &PointSet<f64>, y: &[f64], seed: u64) -> Result<()> {
    let policy = NumericPolicy::with_seed(seed);
    match a.problem {
        Problem::NearestFlat => drop(nearest_flat_approx(s, y, a.k, a.epsilon, a.variant.into(), &policy)?),
        Problem::NearestSimplex => drop(nearest_simplex_approx(s, y, a.k, a.epsilon, &policy)?),
        Problem::NearestHyperplane => drop(nearest_hyperplane_exact(s, y, &policy)?),
        Problem::Degeneracy => drop(degeneracy_test(s, &policy)?),
    }
    Ok(())
}

fn bench(a: &BenchArgs) -> Result<Output> {
    if a.trials == 0 {
        return Err(CliError::Usage("need at least one trial".into()));
    }
    let mut rows = Vec::new();
    let mut means = Vec::new();
    for &n in &a.sizes {
        let mut total = 0.0;
        for t in 0..a.trials {
            let seed = a.seed.wrapping_add((n as u64) << 16).wrapping_add(t as u64);
            let spec = GenSpec { generator: Generator::UniformCube, n, dim: a.dim, seed, k: a.k, plant: None, noise: 0.0 };
            let file = generate::generate(&spec)?;
            let y = file.query.clone().expect("generated query");
            let s = PointSet::new(a.dim, file.points)?;
            let start = Instant::now();
            bench_once(a, &s, &y, seed)?;
            let secs = start.elapsed().as_secs_f64();
            total += secs;
            rows.push(json!({ "n": n, "trial": t, "seconds": secs }));
        }
        means.push((n as f64, total / a.trials as f64));
    }
    let slope = subflat::util::loglog_slope(&means);
    let mut m = record("bench");
    m.insert("benchmarked".into(), json!(format!("{:?}", a.problem)));
    m.insert("dim".into(), json!(a.dim));
    m.insert("k".into(), json!(a.k));
    m.insert("epsilon".into(), json!(a.epsilon));
    m.insert("rows".into(), json!(rows));
    m.insert("slope".into(), json!(slope));
    let summary = match slope {
        Some(s) => format!("log-log slope {s:.3} over {} sizes", a.sizes.len()),
        None => "slope undefined".to_string(),
    };
    Ok(Output { record: Value::Object(m), summary, raw: None })
}

fn gen(a: &GenArgs) -> Result<Output> {
    let spec = GenSpec { generator: a.generator, n: a.n, dim: a.dim, seed: a.seed, k: a.k, plant: a.plant, noise: a.noise };
    let file = generate::generate(&spec)?;
    let text = match a.format {
        Format::Json => ingest::to_json(&file),
        Format::Csv => ingest::to_csv(&file.points),
    };
    let summary = format!("{} points in R^{}", a.n, a.dim);
    match &a.out {
        Some(path) => {
            std::fs::write(path, &text)?;
            let mut m = record("gen");
            m.insert("path".into(), json!(path.display().to_string()));
            m.insert("n".into(), json!(a.n));
            m.insert("dim".into(), json!(a.dim));
            Ok(Output { record: Value::Object(m), summary, raw: None })
        }
        None => Ok(Output { record: Value::Null, summary, raw: Some(text) }),
    }
}

/// Runs one parsed command line.
pub fn run(cli: &Cli) -> Result<Output> {
    let start = Instant::now();
    let mut out = match &cli.command {
        Command::Gen(a) => gen(a),
        Command::NearestFlat(a) => flat(a),
        Command::NearestSimplex(a) => simplex(a),
        Command::NearestHyperplane(a) => hyperplane(a),
        Command::Degeneracy(a) => degeneracy(a),
        Command::Oracle(a) => oracle(a),
        Command::Bench(a) => bench(a),
    }?;
    if cli.timing {
        if let Value::Object(m) = &mut out.record {
            m.insert("wall_time_s".into(), json!(start.elapsed().as_secs_f64()));
        }
    }
    Ok(out)
}

/// Sizes the global thread pool; a no-op when already initialised.
pub fn init_threads(threads: Option<usize>) {
    if let Some(t) = threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build_global();
    }
}
