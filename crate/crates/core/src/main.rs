use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::{info, warn};

use arabic_ir::corpus::{
    generate_corpus, load_corpus, verify_documents, write_corpus, CorpusError, CorpusManifest, CorpusSpec, PeerId,
    DEFAULT_SEED,
};
use arabic_ir::eval::{
    format_percent, render_report, run_evaluation, EvalError, EvalOptions, ResultStore, TsvResultStore,
};
use arabic_ir::index::{decode_snapshot, encode_snapshot, IndexMode, InvertedIndex, SnapshotError};
use arabic_ir::morphology::PatternSet;
use arabic_ir::p2p::{build_overlay, p2p_search, P2pError};
use arabic_ir::search::{expand_query, search_exact, search_expanded, Engine, Query, QueryError, SearchResult};

const DEFAULT_PEERS: usize = 4;
const DEFAULT_SUPER_PEERS: usize = 2;

#[derive(Parser)]
#[command(name = "arabic-ir", version, about = "Arabic root-aware retrieval testbed")]
struct Cli {
    /// More log output (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate the corpus, manifest and queries.
    GenCorpus(GenArgs),
    /// Build an inverted index over the corpus and write a binary snapshot.
    BuildIndex(BuildIndexArgs),
    /// Run one engine on one word.
    Query(QueryArgs),
    /// Run the corpus queries through the selected engines and save results.
    RunEval(RunEvalArgs),
    /// Print a side-by-side table of two engines' saved results.
    Report(ReportArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    roots: usize,
    #[arg(long = "words-per-root", visible_alias = "words", default_value_t = 100)]
    words_per_root: usize,
    /// Defaults to 4, capped at the root count.
    #[arg(long)]
    peers: Option<usize>,
    /// Defaults to 2, capped at the peer count.
    #[arg(long = "super-peers")]
    super_peers: Option<usize>,
    #[arg(long, default_value = "data")]
    out: PathBuf,
}

#[derive(Args)]
struct DataArg {
    /// Corpus directory written by gen-corpus.
    #[arg(long, default_value = "data")]
    data: PathBuf,
}

#[derive(Args)]
struct BuildIndexArgs {
    #[command(flatten)]
    data: DataArg,
    #[arg(long, default_value = "simple")]
    mode: IndexMode,
    /// Defaults to <data>/index-<mode>.bin.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct QueryArgs {
    #[command(flatten)]
    data: DataArg,
    #[arg(long, default_value = "baseline")]
    engine: Engine,
    /// Origin peer for P2P engines.
    #[arg(long, default_value = "peer-1")]
    origin: PeerId,
    /// Index snapshot to search instead of rebuilding (centralized engines).
    #[arg(long)]
    index: Option<PathBuf>,
    word: String,
}

#[derive(Args)]
struct RunEvalArgs {
    #[command(flatten)]
    data: DataArg,
    /// Comma-separated engine list.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "baseline,expanded,p2p-simple,p2p-advanced"
    )]
    engines: Vec<Engine>,
    /// Fixed origin for P2P engines; by default origins rotate over the peers.
    #[arg(long)]
    origin: Option<PeerId>,
    /// Defaults to <data>/results.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReportArgs {
    #[arg(long, default_value = "data/results")]
    results: PathBuf,
    #[arg(long, default_value = "baseline")]
    left: Engine,
    #[arg(long, default_value = "expanded")]
    right: Engine,
}

/// Exit status 1: bad input. Exit status 2: the environment failed us.
enum Failure {
    Validation(String),
    Infrastructure(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 1,
            Failure::Infrastructure(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Validation(m) | Failure::Infrastructure(m) => m,
        }
    }
}

impl From<CorpusError> for Failure {
    fn from(e: CorpusError) -> Self {
        match e {
            CorpusError::Io { .. } => Failure::Infrastructure(e.to_string()),
            _ => Failure::Validation(e.to_string()),
        }
    }
}

impl From<EvalError> for Failure {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::Io { .. } => Failure::Infrastructure(e.to_string()),
            _ => Failure::Validation(e.to_string()),
        }
    }
}

impl From<SnapshotError> for Failure {
    fn from(e: SnapshotError) -> Self {
        Failure::Validation(format!("index snapshot: {e}"))
    }
}

impl From<P2pError> for Failure {
    fn from(e: P2pError) -> Self {
        Failure::Validation(e.to_string())
    }
}

impl From<QueryError> for Failure {
    fn from(e: QueryError) -> Self {
        Failure::Validation(e.to_string())
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure::Infrastructure(format!("{}: {e}", path.display()))
}

fn gen_corpus(args: GenArgs) -> Result<(), Failure> {
    let peer_count = args.peers.unwrap_or(DEFAULT_PEERS.min(args.roots.max(1)));
    let superpeer_count = args.super_peers.unwrap_or(DEFAULT_SUPER_PEERS.min(peer_count.max(1)));
    if peer_count == 0 || !args.roots.is_multiple_of(peer_count) {
        return Err(Failure::Validation(format!(
            "invalid corpus spec: root count {} must be a positive multiple of peer count {peer_count}",
            args.roots
        )));
    }
    let spec = CorpusSpec {
        root_count: args.roots,
        words_per_root: args.words_per_root,
        peer_count,
        superpeer_count,
        roots_per_peer: args.roots / peer_count,
        seed: args.seed,
    };
    spec.validate()?;
    let manifest = generate_corpus(&spec, &PatternSet::builtin())?;
    fs::create_dir_all(&args.out).map_err(|e| io_failure(&args.out, e))?;
    let digest = write_corpus(&manifest, &args.out)?;
    info!(
        "wrote {} documents for {} roots to {}",
        manifest.documents().len(),
        manifest.roots().len(),
        args.out.display()
    );
    println!("{digest}");
    Ok(())
}

fn load(data: &Path) -> Result<CorpusManifest, Failure> {
    let manifest = load_corpus(data)?;
    info!(
        "loaded {} documents from {}",
        manifest.documents().len(),
        data.display()
    );
    Ok(manifest)
}

fn build_index(args: BuildIndexArgs) -> Result<(), Failure> {
    let manifest = load(&args.data.data)?;
    let index = InvertedIndex::build(manifest.documents(), args.mode, manifest.lexicon())
        .map_err(|e| Failure::Validation(e.to_string()))?;
    let out = args
        .out
        .unwrap_or_else(|| args.data.data.join(format!("index-{}.bin", args.mode)));
    fs::write(&out, encode_snapshot(&index)).map_err(|e| io_failure(&out, e))?;
    println!(
        "{} index: {} keys, {} postings -> {}",
        args.mode,
        index.key_count(),
        index.posting_count(),
        out.display()
    );
    Ok(())
}

fn print_result(result: &SearchResult) {
    if !result.expanded_terms.is_empty() {
        let terms: Vec<&str> = result.expanded_terms.iter().map(|t| t.as_str()).collect();
        println!("# expanded terms ({}): {}", terms.len(), terms.join(" "));
    }
    println!("# found {}", result.found.len());
    for id in &result.found {
        println!("{id}");
    }
}

fn snapshot_or_build(
    path: Option<&Path>,
    mode: IndexMode,
    manifest: &CorpusManifest,
) -> Result<InvertedIndex, Failure> {
    match path {
        Some(path) => {
            let bytes = fs::read(path).map_err(|e| io_failure(path, e))?;
            let index = decode_snapshot(&bytes)?;
            if index.mode() != mode {
                return Err(Failure::Validation(format!(
                    "{} holds a {} index; this engine needs {mode}",
                    path.display(),
                    index.mode()
                )));
            }
            Ok(index)
        }
        None => InvertedIndex::build(manifest.documents(), mode, manifest.lexicon())
            .map_err(|e| Failure::Validation(e.to_string())),
    }
}

fn query(args: QueryArgs) -> Result<(), Failure> {
    let manifest = load(&args.data.data)?;
    let q = Query::parse("query", &args.word)?;
    if expand_query(&q, manifest.lexicon()).degraded {
        warn!("no root found for {}; falling back to exact search", q.normalized);
    }
    match args.engine {
        Engine::Baseline => {
            let index = snapshot_or_build(args.index.as_deref(), IndexMode::Simple, &manifest)?;
            print_result(&search_exact(&q, &index));
        }
        Engine::Expanded => {
            let index = snapshot_or_build(args.index.as_deref(), IndexMode::Simple, &manifest)?;
            print_result(&search_expanded(&q, &index, manifest.lexicon()));
        }
        engine @ (Engine::P2pSimple | Engine::P2pAdvanced) => {
            let mode = engine.index_mode();
            let overlay = build_overlay(&manifest, mode)?;
            let outcome = p2p_search(&q, &overlay, args.origin, mode)?;
            print_result(&outcome.result);
            let peers: Vec<String> = outcome.forwarded_to().iter().map(ToString::to_string).collect();
            println!("# peers contacted {}: {}", outcome.peers_contacted, peers.join(" "));
            println!("# trace: seq kind from to payload_size");
            for line in outcome.message_log().lines() {
                println!("# {line}");
            }
        }
    }
    Ok(())
}

fn run_eval(args: RunEvalArgs) -> Result<(), Failure> {
    let data = &args.data.data;
    let manifest = load(data)?;
    verify_documents(data, &manifest)?;
    let digest = arabic_ir::corpus::digest_directory(data)?;
    let mut engines = args.engines.clone();
    engines.sort();
    engines.dedup();
    let options = EvalOptions {
        origin: args.origin,
        corpus_digest: digest,
    };
    let report = run_evaluation(&manifest, &engines, &options)?;
    let out = args.out.unwrap_or_else(|| data.join("results"));
    let mut store = TsvResultStore::new(&out);
    store.save(&report)?;
    info!("results written to {}", out.display());

    println!("engine\tqueries\tmean_precision\tmean_recall\tfailed");
    for engine in report.engines() {
        let failed = report.failed(engine);
        if failed > 0 {
            warn!("{engine}: {failed} queries failed");
        }
        println!(
            "{engine}\t{}\t{}\t{}\t{failed}",
            report.records[&engine].len(),
            format_percent(&report.mean_precision(engine).unwrap_or_default()),
            format_percent(&report.mean_recall(engine).unwrap_or_default()),
        );
    }
    Ok(())
}

fn report(args: ReportArgs) -> Result<(), Failure> {
    let store = TsvResultStore::new(&args.results);
    let summary = store.load_summary()?;
    let left = store.load_results(args.left)?;
    let right = store.load_results(args.right)?;
    print!("{}", render_report(&summary, &left, &right)?);
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new()
        .filter_level(level)
        .parse_default_env()
        .format_timestamp(None)
        .init();

    let outcome = match cli.command {
        Command::GenCorpus(a) => gen_corpus(a),
        Command::BuildIndex(a) => build_index(a),
        Command::Query(a) => query(a),
        Command::RunEval(a) => run_eval(a),
        Command::Report(a) => report(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
