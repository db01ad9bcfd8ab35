//! Command-line front end. Reports go to stdout, diagnostics to stderr.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sted_core::consistency::{consistency_score, pairs, similarity_set, ConsistencyReport};
use sted_core::semantic::{EmbeddingContext, EmbeddingProvider, HashingEmbedder, ProviderKind};
use sted_core::sted::{compare_report, Mode, PreparedSet, StedConfig, LARGE_BRANCHING_WARNING};
use sted_core::ted::ted_report;
use sted_core::tree::DocumentTree;
use sted_core::variation::{plan_corpus, BaseDocSpec, TypeMix, VariationKind, VariationTables, RATIO_LEVELS};

use crate::cache::DiskCache;
use crate::config::RunConfig;
use crate::corpus::{generate_corpus, read_document, MANIFEST_NAME};
use crate::error::{Error, Result, EXIT_OK};
use crate::remote::RemoteProvider;
use crate::sweep::{run_sweep, sweep_csv, Metric, SweepOptions};

pub const DEFAULT_CACHE_DIR: &str = ".sted-cache";
pub const DEFAULT_SEED: u64 = 2024;

#[derive(Debug, Parser)]
#[command(name = "sted", version, about = "Semantic tree edit distance for JSON documents")]
pub struct Cli {
    /// JSON run configuration; flags override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Embedding cache directory.
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,
    /// Worker threads; 0 uses every logical CPU.
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
    /// Indent JSON output.
    #[arg(long, global = true)]
    pub pretty: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compare two JSON documents.
    Compare(CompareArgs),
    /// Score the consistency of a set of outputs.
    Consistency(ConsistencyArgs),
    /// Generate a variation corpus.
    Generate(GenerateArgs),
    /// Score every case of a corpus.
    Sweep(SweepArgs),
    /// Inspect or clear the embedding cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    pub file_a: PathBuf,
    pub file_b: PathBuf,
    #[arg(long, default_value = "sted")]
    pub metric: Metric,
    #[arg(long)]
    pub mode: Option<Mode>,
    /// Exit with status 3 when the score is below this value.
    #[arg(long, default_value_t = 0.0)]
    pub threshold: f64,
    /// Also list matched pairs that cost nothing.
    #[arg(long)]
    pub all_differences: bool,
}

#[derive(Debug, Args)]
pub struct ConsistencyArgs {
    /// Directories, files or glob patterns.
    #[arg(required = true)]
    pub inputs: Vec<String>,
    #[arg(long, conflicts_with = "all_modes")]
    pub mode: Option<Mode>,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Report structural, semantic and hybrid scores.
    #[arg(long)]
    pub all_modes: bool,
    /// Skip files that fail to parse instead of failing.
    #[arg(long)]
    pub skip_bad: bool,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, default_value_t = 75)]
    pub count: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    /// A variation kind, or all-gradual, all-structural or all.
    #[arg(long, default_value = "all")]
    pub kind: String,
    /// A single modification ratio instead of all ten levels.
    #[arg(long)]
    pub ratio: Option<f64>,
    /// JSON file with one base document spec or a list of them; replaces
    /// the planned corpus.
    #[arg(long)]
    pub base_spec: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Manifest file or the corpus directory containing it.
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "sted,ted")]
    pub metrics: Vec<Metric>,
    #[arg(long)]
    pub mode: Option<Mode>,
    /// CSV destination; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Record failing cases in an error column and continue.
    #[arg(long)]
    pub keep_going: bool,
}

#[derive(Debug, Subcommand)]
pub enum CacheAction {
    Stats,
    Clear,
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(cli: &Cli) -> Result<()> {
    let config = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs)
        .build()
        .map_err(|e| Error::internal("thread pool", e))?;
    pool.install(|| match &cli.command {
        Command::Compare(a) => compare(cli, &config, a),
        Command::Consistency(a) => consistency(cli, &config, a),
        Command::Generate(a) => generate(cli, &config, a),
        Command::Sweep(a) => sweep(cli, &config, a),
        Command::Cache { action } => cache(cli, &config, action),
    })
}

/// The configured provider and, when wanted, its disk cache.
struct Embeddings {
    provider: Box<dyn EmbeddingProvider>,
    cache: Option<DiskCache>,
}

impl Embeddings {
    fn new(cli: &Cli, config: &RunConfig) -> Result<Self> {
        let spec = config.provider_spec();
        let provider: Box<dyn EmbeddingProvider> = match spec.kind {
            ProviderKind::DeterministicLocal => Box::new(HashingEmbedder::with_dimension(spec.dimension)),
            ProviderKind::RemoteHttp => {
                Box::new(RemoteProvider::new(spec).map_err(|e| Error::Input(e.to_string()))?)
            }
        };
        let cache = if cli.cache.is_some() || config.wants_disk_cache() {
            let dir = cache_dir(cli, config);
            Some(DiskCache::open(&dir).map_err(|e| Error::internal(dir.display(), e))?)
        } else {
            None
        };
        Ok(Embeddings { provider, cache })
    }

    fn context(&self) -> EmbeddingContext<'_> {
        let ctx = EmbeddingContext::new(self.provider.as_ref());
        match &self.cache {
            Some(c) => ctx.with_cache(c),
            None => ctx,
        }
    }
}

fn cache_dir(cli: &Cli, config: &RunConfig) -> PathBuf {
    cli.cache.clone().or_else(|| config.cache_path.clone()).unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR))
}

fn emit<T: Serialize>(cli: &Cli, value: &T) -> Result<()> {
    let mut text = if cli.pretty { serde_json::to_string_pretty(value) } else { serde_json::to_string(value) }
        .map_err(|e| Error::internal("serialize", e))?;
    text.push('\n');
    write_stdout(text.as_bytes())
}

fn write_stdout(bytes: &[u8]) -> Result<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(bytes).and_then(|()| out.flush()).map_err(|e| Error::internal("stdout", e))
}

fn warn_branching(path: &Path, doc: &DocumentTree) {
    if doc.max_branching() > LARGE_BRANCHING_WARNING {
        eprintln!(
            "warning: {} has a node with {} children; matching cost grows cubically with branching",
            path.display(),
            doc.max_branching()
        );
    }
}

fn compare(cli: &Cli, config: &RunConfig, args: &CompareArgs) -> Result<()> {
    let a = read_document(&args.file_a)?;
    let b = read_document(&args.file_b)?;
    let result = match args.metric {
        Metric::Sted => {
            warn_branching(&args.file_a, &a);
            warn_branching(&args.file_b, &b);
            let sted = config.sted_config(args.mode)?;
            let embeddings = Embeddings::new(cli, config)?;
            compare_report(&a, &b, &sted, &embeddings.context(), args.all_differences)?
        }
        Metric::Ted => ted_report(&a, &b, &config.ted_config()),
    };
    emit(cli, &result)?;
    if result.score < args.threshold {
        return Err(Error::Threshold { score: result.score, threshold: args.threshold });
    }
    Ok(())
}

/// Expands directories (their `*.json` files), plain files and glob
/// patterns, sorted within each argument and deduplicated.
pub fn collect_inputs(inputs: &[String]) -> Result<Vec<PathBuf>> {
    let mut out: Vec<PathBuf> = Vec::new();
    for input in inputs {
        let path = Path::new(input);
        let mut found: Vec<PathBuf> = if path.is_dir() {
            std::fs::read_dir(path)
                .map_err(|e| Error::input(path.display(), e))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "json"))
                .collect()
        } else if path.is_file() {
            vec![path.to_path_buf()]
        } else {
            glob::glob(input)
                .map_err(|e| Error::input(input, e))?
                .filter_map(|p| p.ok())
                .filter(|p| p.is_file())
                .collect()
        };
        if found.is_empty() {
            return Err(Error::Input(format!("{input}: no matching files")));
        }
        found.sort();
        for p in found {
            if !out.contains(&p) {
                out.push(p);
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Serialize)]
pub struct AllModes {
    pub structural: ConsistencyReport,
    pub semantic: ConsistencyReport,
    pub hybrid: ConsistencyReport,
}

fn consistency_report(
    docs: &[DocumentTree],
    sted: &StedConfig,
    ctx: &EmbeddingContext<'_>,
    alpha: f64,
) -> Result<ConsistencyReport> {
    let prepared = PreparedSet::new(docs, sted, ctx)?;
    let set = similarity_set(&prepared, |score| {
        let all: Vec<(usize, usize)> = pairs(docs.len()).collect();
        all.par_iter().map(|&(i, j)| score(i, j)).collect()
    });
    Ok(consistency_score(&set, alpha)?)
}

fn consistency(cli: &Cli, config: &RunConfig, args: &ConsistencyArgs) -> Result<()> {
    let mut docs = Vec::new();
    for path in collect_inputs(&args.inputs)? {
        match read_document(&path) {
            Ok(d) => {
                warn_branching(&path, &d);
                docs.push(d);
            }
            Err(e) if args.skip_bad => eprintln!("warning: skipping {e}"),
            Err(e) => return Err(e),
        }
    }
    if docs.is_empty() {
        return Err(Error::Input("no parseable outputs".into()));
    }
    let alpha = args.alpha.unwrap_or(config.alpha());
    let embeddings = Embeddings::new(cli, config)?;
    let ctx = embeddings.context();
    if args.all_modes {
        let report = |m| consistency_report(&docs, &config.sted_config(Some(m))?, &ctx, alpha);
        let all = AllModes {
            structural: report(Mode::Structural)?,
            semantic: report(Mode::Semantic)?,
            hybrid: report(Mode::Hybrid)?,
        };
        emit(cli, &all)
    } else {
        emit(cli, &consistency_report(&docs, &config.sted_config(args.mode)?, &ctx, alpha)?)
    }
}

pub fn parse_kinds(s: &str) -> Result<Vec<VariationKind>> {
    match s {
        "all" => Ok(VariationKind::ALL.to_vec()),
        "all-gradual" => Ok(VariationKind::GRADUAL.to_vec()),
        "all-structural" => Ok(VariationKind::STRUCTURAL.to_vec()),
        other => other.parse().map(|k| vec![k]).map_err(|_| {
            Error::Input(format!(
                "unknown kind `{other}` (expected field-rename, expression, semantic, flatten, nest, \
                 all-gradual, all-structural or all)"
            ))
        }),
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum BaseSpecFile {
    One(BaseDocSpec),
    Many(Vec<BaseDocSpec>),
}

#[derive(Debug, Serialize)]
struct GenerateSummary {
    manifest: PathBuf,
    bases: usize,
    cases: usize,
}

fn generate(cli: &Cli, config: &RunConfig, args: &GenerateArgs) -> Result<()> {
    let kinds = parse_kinds(&args.kind)?;
    let ratios = match args.ratio {
        Some(r) if r.is_finite() && r > 0.0 && r <= 1.0 => vec![r],
        Some(r) => return Err(Error::Input(format!("ratio {r} is outside (0, 1]"))),
        None => RATIO_LEVELS.to_vec(),
    };
    let bases = match &args.base_spec {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::input(path.display(), e))?;
            match serde_json::from_str(&text).map_err(|e| Error::input(path.display(), e))? {
                BaseSpecFile::One(s) => vec![s],
                BaseSpecFile::Many(v) => v,
            }
        }
        None => {
            if args.count == 0 {
                return Err(Error::Input("count must be positive".into()));
            }
            let seed = args.seed.or(config.seed).unwrap_or(DEFAULT_SEED);
            plan_corpus(args.count, seed, TypeMix::default())
        }
    };
    if bases.is_empty() {
        return Err(Error::Input("no base document specs".into()));
    }
    for spec in &bases {
        spec.validate()?;
    }
    let outcome = generate_corpus(&args.out, &bases, &kinds, &ratios, &VariationTables::default())?;
    for w in &outcome.warnings {
        eprintln!("warning: {w}");
    }
    emit(cli, &GenerateSummary { manifest: outcome.manifest, bases: bases.len(), cases: outcome.cases })
}

fn sweep(cli: &Cli, config: &RunConfig, args: &SweepArgs) -> Result<()> {
    let manifest = if args.corpus.is_dir() { args.corpus.join(MANIFEST_NAME) } else { args.corpus.clone() };
    if args.metrics.is_empty() {
        return Err(Error::Input("no metrics requested".into()));
    }
    let options = SweepOptions {
        metrics: args.metrics.clone(),
        sted: config.sted_config(args.mode)?,
        ted: config.ted_config(),
        keep_going: args.keep_going,
    };
    let embeddings = Embeddings::new(cli, config)?;
    let rows = run_sweep(&manifest, &options, &embeddings.context())?;
    let bytes = sweep_csv(&rows, args.keep_going)?;
    match &args.out {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir).map_err(|e| Error::internal(dir.display(), e))?;
            }
            std::fs::write(p, bytes).map_err(|e| Error::internal(p.display(), e))
        }
        None => write_stdout(&bytes),
    }
}

#[derive(Debug, Serialize)]
struct CacheReport {
    path: PathBuf,
    entries: usize,
    bytes: u64,
}

#[derive(Debug, Serialize)]
struct ClearReport {
    path: PathBuf,
    removed: usize,
}

fn cache(cli: &Cli, config: &RunConfig, action: &CacheAction) -> Result<()> {
    let dir = cache_dir(cli, config);
    let io = |e: std::io::Error| Error::internal(dir.display(), e);
    match action {
        CacheAction::Stats => {
            let s = DiskCache::stats_at(&dir).map_err(io)?;
            emit(cli, &CacheReport { path: dir.clone(), entries: s.entries, bytes: s.bytes })
        }
        CacheAction::Clear => {
            let removed = DiskCache::clear_at(&dir).map_err(io)?;
            emit(cli, &ClearReport { path: dir.clone(), removed })
        }
    }
}
