//! The `minkembed` command line.
//!
//! Exit codes: 0 success, 2 usage or input error, 3 verification failure.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::bench::{run_cell, BenchError, CSV_HEADER};
use crate::embed::{embed_polyhedron, extend_embedding, EmbedConfig, EmbedError, ExtendConfig};
use crate::gen::{random_polyhedron, GenKind, GenSpec, LengthDistribution};
use crate::io::{to_canonical_json, EmbeddingFile, IoError, PolyhedronFile};
use crate::linalg::AnchorScheme;
use crate::scalar::{Backend, Rational, Scalar};
use crate::verify::{verify_embedding, GpMode, VerificationReport, VerifyConfig, VerifyError};

/// Environment variable naming the default backend; `--backend` overrides it.
pub const BACKEND_ENV: &str = "MINKEMBED_BACKEND";

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "minkembed", version, about = "Isometric embeddings of indefinite metric polyhedra into R^d_d")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Embed a polyhedron file along a degeneracy ordering, then verify.
    Embed(EmbedArgs),
    /// Extend the partial_embedding of a polyhedron file to all vertices.
    Extend(ExtendArgs),
    /// Check an embedding file against a polyhedron file.
    Verify(VerifyArgs),
    /// Write a fixture or random polyhedron file.
    Gen(GenArgs),
    /// Time ordering, placement and verification on random complexes (CSV).
    Bench(BenchArgs),
    /// Summarize a polyhedron file.
    Info(InfoArgs),
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// Relative isometry tolerance: an edge passes iff |r| <= tol * max(1, |g|).
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Require exhaustively certified general position.
    #[arg(long)]
    pub certify: bool,
    /// Random seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Disjoint-face samples for the injectivity spot check.
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
}

impl CheckArgs {
    fn verify_config(&self) -> VerifyConfig {
        VerifyConfig {
            tol: self.tol,
            gp_mode: if self.certify { GpMode::Exhaustive } else { GpMode::Auto },
            injectivity_samples: self.samples,
            require_certified: self.certify,
            seed: self.seed,
            ..VerifyConfig::default()
        }
    }
}

#[derive(Debug, Args)]
pub struct EmbedArgs {
    pub input: PathBuf,
    /// Target half-dimension (default: the file's d, else the degeneracy).
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub backend: Option<Backend>,
    /// Anchor scheme: moment, chebyshev or gaussian (default depends on backend).
    #[arg(long)]
    pub anchors: Option<AnchorScheme>,
    #[command(flatten)]
    pub check: CheckArgs,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExtendArgs {
    pub input: PathBuf,
    /// Half-dimension of the partial map, needed when it is empty.
    #[arg(long)]
    pub d: Option<usize>,
    /// Only `float` is supported.
    #[arg(long)]
    pub backend: Option<Backend>,
    /// Draws per vertex when searching for a generic anchor.
    #[arg(long, default_value_t = 100)]
    pub retry_budget: usize,
    #[command(flatten)]
    pub check: CheckArgs,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub polyhedron: PathBuf,
    pub embedding: PathBuf,
    /// Backend used to read both files (default: the embedding's backend).
    #[arg(long)]
    pub backend: Option<Backend>,
    #[command(flatten)]
    pub check: CheckArgs,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// complete, mesh, bounded-degree or degenerate.
    #[arg(long)]
    pub kind: GenKind,
    /// Simplex dimension for `complete` (writes K_{d+1}).
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub rows: Option<usize>,
    #[arg(long)]
    pub cols: Option<usize>,
    #[arg(long)]
    pub vertices: Option<usize>,
    /// Degree bound (bounded-degree) or degeneracy bound (degenerate).
    #[arg(long)]
    pub bound: Option<usize>,
    /// Highest simplex dimension produced by clique lifting.
    #[arg(long, default_value_t = 1)]
    pub dim: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 10)]
    pub max_abs: i64,
    #[arg(long, default_value_t = 4)]
    pub max_denominator: i64,
    #[arg(long, default_value_t = 0.5)]
    pub negative_fraction: f64,
    #[arg(long, default_value_t = 0.05)]
    pub zero_fraction: f64,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Vertex counts, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "100,1000")]
    pub n: Vec<usize>,
    /// Half-dimensions (= degeneracy bounds), comma separated.
    #[arg(long, value_delimiter = ',', default_value = "4,8")]
    pub d: Vec<usize>,
    #[arg(long, default_value = "float")]
    pub backend: Backend,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct InfoArgs {
    pub input: PathBuf,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Failed(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Failed(_) => EXIT_VERIFY,
        }
    }
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<VerifyError> for CliError {
    fn from(e: VerifyError) -> Self {
        CliError::Usage(e.to_string())
    }
}

fn embed_error(e: EmbedError) -> CliError {
    match e {
        EmbedError::BelowDegeneracy { .. }
        | EmbedError::BelowMaxDegree { .. }
        | EmbedError::ZeroDimension
        | EmbedError::PartialUnknownVertex(_)
        | EmbedError::PartialDimension { .. } => CliError::Usage(e.to_string()),
        other => CliError::Failed(other.to_string()),
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match &cli.command {
        Command::Embed(a) => cmd_embed(a),
        Command::Extend(a) => cmd_extend(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Gen(a) => cmd_gen(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Info(a) => cmd_info(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            match &e {
                CliError::Usage(msg) | CliError::Failed(msg) => eprintln!("error: {msg}"),
            }
            e.code()
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    let result = match out {
        Some(path) => fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    };
    result.map_err(|e| CliError::Usage(format!("cannot write output: {e}")))
}

fn resolve_backend(flag: Option<Backend>, fallback: Backend) -> Result<Backend, CliError> {
    if let Some(b) = flag {
        return Ok(b);
    }
    match std::env::var(BACKEND_ENV) {
        Ok(v) if !v.trim().is_empty() => v
            .trim()
            .parse()
            .map_err(|e| CliError::Usage(format!("{BACKEND_ENV}: {e}"))),
        _ => Ok(fallback),
    }
}

fn summarize(report: &VerificationReport) -> String {
    let worst = report
        .isometry
        .worst_edge
        .as_ref()
        .map(|e| format!(" (worst edge {}--{})", e[0], e[1]))
        .unwrap_or_default();
    format!(
        "isometry {}: max residual {}{}; general position {:?}; injectivity {:?}",
        if report.isometry.pass { "ok" } else { "FAILED" },
        report.isometry.max_residual,
        worst,
        report.general_position.status,
        report.injectivity.verdict,
    )
}

fn outcome(report: &VerificationReport) -> i32 {
    eprintln!("{}", summarize(report));
    if report.pass {
        EXIT_OK
    } else {
        if let Some(w) = &report.general_position.witness {
            eprintln!("general-position witness: {}", w.join(", "));
        }
        if let Some(w) = &report.injectivity.witness {
            let faces: Vec<String> = w.iter().map(|f| f.join(" ")).collect();
            eprintln!("injectivity witness: {}", faces.join(" | "));
        }
        EXIT_VERIFY
    }
}

fn cmd_embed(a: &EmbedArgs) -> Result<i32, CliError> {
    let file = PolyhedronFile::parse(&read(&a.input)?)?;
    match resolve_backend(a.backend, file.literal_backend())? {
        Backend::Rational => embed_typed::<Rational>(&file, a),
        Backend::Float => embed_typed::<f64>(&file, a),
    }
}

fn embed_typed<S: Scalar>(file: &PolyhedronFile, a: &EmbedArgs) -> Result<i32, CliError> {
    let p = file.polyhedron::<S>()?;
    let mut cfg = EmbedConfig::for_backend::<S>().with_seed(a.check.seed);
    cfg.d = a.d.or(file.d);
    if let Some(anchors) = a.anchors {
        cfg.anchors = anchors;
    }
    let mut tau = embed_polyhedron(&p, &cfg).map_err(embed_error)?;
    tau.meta.certify = a.check.certify;
    let report = verify_embedding(&p, &tau, &a.check.verify_config())?;
    emit(&a.out, &EmbeddingFile::from_embedding(&tau, Some(report.clone())).to_json())?;
    Ok(outcome(&report))
}

fn cmd_extend(a: &ExtendArgs) -> Result<i32, CliError> {
    if resolve_backend(a.backend, Backend::Float)? == Backend::Rational {
        return Err(CliError::Usage(
            "extend needs the float backend: adapted splits come from a QL decomposition".into(),
        ));
    }
    let mut file = PolyhedronFile::parse(&read(&a.input)?)?;
    if file.partial_embedding.is_none() {
        return Err(CliError::Usage("input has no partial_embedding".into()));
    }
    if a.d.is_some() {
        file.d = a.d;
    }
    let p = file.polyhedron::<f64>()?;
    let partial = file.partial::<f64>()?.expect("checked above");
    let cfg = ExtendConfig {
        seed: a.check.seed,
        certify: a.check.certify,
        retry_budget: a.retry_budget,
        tol: a.check.tol,
        ..ExtendConfig::default()
    };
    let tau = extend_embedding(&p, &partial, &cfg).map_err(embed_error)?;
    let report = verify_embedding(&p, &tau, &a.check.verify_config())?;
    let mut out = EmbeddingFile::from_embedding(&tau, Some(report.clone()));
    // fixed vertices keep their input spelling
    for (id, coords) in file.partial_embedding.iter().flatten() {
        out.assignment.insert(id.clone(), coords.clone());
    }
    emit(&a.out, &out.to_json())?;
    Ok(outcome(&report))
}

fn cmd_verify(a: &VerifyArgs) -> Result<i32, CliError> {
    let poly = PolyhedronFile::parse(&read(&a.polyhedron)?)?;
    let emb = EmbeddingFile::parse(&read(&a.embedding)?)?;
    match a.backend.unwrap_or(emb.backend) {
        Backend::Rational => verify_typed::<Rational>(&poly, &emb, a),
        Backend::Float => verify_typed::<f64>(&poly, &emb, a),
    }
}

fn verify_typed<S: Scalar>(poly: &PolyhedronFile, emb: &EmbeddingFile, a: &VerifyArgs) -> Result<i32, CliError> {
    let p = poly.polyhedron::<S>()?;
    let tau = emb.embedding::<S>()?;
    let report = verify_embedding(&p, &tau, &a.check.verify_config())?;
    emit(&a.out, &to_canonical_json(&report))?;
    Ok(outcome(&report))
}

fn require(value: Option<usize>, flag: &str, kind: GenKind) -> Result<usize, CliError> {
    value.ok_or_else(|| CliError::Usage(format!("--kind {kind} needs {flag}")))
}

fn cmd_gen(a: &GenArgs) -> Result<i32, CliError> {
    let (size, cols, bound) = match a.kind {
        GenKind::CompleteSkeleton => (require(a.d, "--d", a.kind)?, 0, 0),
        GenKind::EuclideanMesh => (require(a.rows, "--rows", a.kind)?, require(a.cols, "--cols", a.kind)?, 0),
        _ => (require(a.vertices, "--vertices", a.kind)?, 0, require(a.bound, "--bound", a.kind)?),
    };
    let spec = GenSpec {
        kind: a.kind,
        size,
        cols,
        bound,
        dim: a.dim,
        lengths: LengthDistribution {
            max_abs: a.max_abs,
            max_denominator: a.max_denominator,
            negative_fraction: a.negative_fraction,
            zero_fraction: a.zero_fraction,
        },
        seed: a.seed,
    };
    let p = random_polyhedron::<Rational>(&spec).map_err(|e| CliError::Usage(e.to_string()))?;
    emit(&a.out, &PolyhedronFile::from_polyhedron(&p).to_json())?;
    Ok(EXIT_OK)
}

fn cmd_bench(a: &BenchArgs) -> Result<i32, CliError> {
    let mut csv = format!("{CSV_HEADER}\n");
    let mut all_pass = true;
    for &n in &a.n {
        for &d in &a.d {
            let row = run_cell(n, d, a.backend, a.seed).map_err(|e| match e {
                BenchError::Gen(g) => CliError::Usage(g.to_string()),
                other => CliError::Failed(format!("cell n={n}, d={d}: {other}")),
            })?;
            all_pass &= row.pass;
            csv.push_str(&row.to_csv());
            csv.push('\n');
        }
    }
    emit(&a.out, &csv)?;
    Ok(if all_pass { EXIT_OK } else { EXIT_VERIFY })
}

#[derive(Debug, Serialize)]
struct Info {
    degeneracy: usize,
    dimension: usize,
    edges: usize,
    has_partial_embedding: bool,
    /// `2n + 1`, the half-dimension from which the injectivity criterion applies.
    injectivity_d: usize,
    literal_backend: Backend,
    max_degree: usize,
    min_d_embed: usize,
    min_d_extend: usize,
    vertices: usize,
}

fn cmd_info(a: &InfoArgs) -> Result<i32, CliError> {
    let file = PolyhedronFile::parse(&read(&a.input)?)?;
    let p = file.polyhedron::<Rational>()?;
    let degeneracy = p.degeneracy_ordering().degeneracy;
    let info = Info {
        degeneracy,
        dimension: p.dimension(),
        edges: p.edge_count(),
        has_partial_embedding: file.partial_embedding.is_some(),
        injectivity_d: 2 * p.dimension() + 1,
        literal_backend: file.literal_backend(),
        max_degree: p.max_degree(),
        min_d_embed: degeneracy.max(1),
        min_d_extend: p.max_degree().max(1),
        vertices: p.vertex_count(),
    };
    emit(&None, &to_canonical_json(&info))?;
    Ok(EXIT_OK)
}
