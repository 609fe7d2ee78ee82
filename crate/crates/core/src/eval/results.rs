//! Persisted evaluation results.
//!
//! ```text
//! results/<engine>.tsv   one row per query, 4-decimal precision and recall
//! results/summary.tsv    per-engine means, rounded and as exact fractions
//! ```

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::Zero;

use super::metrics::{format4, format4_big, parse4};
use super::{EvalError, EvalReport};
use crate::search::Engine;

pub const SUMMARY_FILE: &str = "summary.tsv";
const RESULTS_MAGIC: &str = "# arabic-ir results v1";
const SUMMARY_MAGIC: &str = "# arabic-ir summary v1";
const RESULTS_COLUMNS: &str = "# query_id\tquery_word\tfound_count\trelevant_count\tprecision\trecall\tpeers_contacted";
const SUMMARY_COLUMNS: &str = "# engine\tqueries\tmean_precision\tmean_recall\tprecision_exact\trecall_exact\tfailed";

fn results_file_name(engine: Engine) -> String {
    format!("{}.tsv", engine.as_str())
}

fn provenance(report: &EvalReport) -> String {
    format!(
        "seed={} patterns={} digest={}",
        report.seed, report.pattern_version, report.corpus_digest
    )
}

fn render_engine(report: &EvalReport, engine: Engine) -> String {
    let mut out = format!(
        "{RESULTS_MAGIC} engine={engine} {}\n{RESULTS_COLUMNS}\n",
        provenance(report)
    );
    let records = &report.records[&engine];
    for r in records {
        let peers = r.peers_contacted.map_or_else(|| "-".to_owned(), |n| n.to_string());
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
            r.query_id,
            r.query_word,
            r.s_found.len(),
            r.s_relevant.len(),
            format4(&r.precision),
            format4(&r.recall),
            peers
        ));
    }
    for r in records {
        if let Some(err) = &r.error {
            out.push_str(&format!("# error {}: {}\n", r.query_id, err.replace('\n', " ")));
        }
    }
    out
}

fn render_summary(report: &EvalReport) -> String {
    let mut out = format!("{SUMMARY_MAGIC} {}\n{SUMMARY_COLUMNS}\n", provenance(report));
    for engine in report.engines() {
        let p = report.mean_precision(engine).unwrap_or_default();
        let r = report.mean_recall(engine).unwrap_or_default();
        out.push_str(&format!(
            "{engine}\t{}\t{}\t{}\t{p}\t{r}\t{}\n",
            report.records[&engine].len(),
            format4_big(&p),
            format4_big(&r),
            report.failed(engine)
        ));
    }
    out
}

/// File name → contents for every results file of `report`.
pub fn render_result_files(report: &EvalReport) -> BTreeMap<String, String> {
    let mut files: BTreeMap<String, String> = report
        .engines()
        .map(|e| (results_file_name(e), render_engine(report, e)))
        .collect();
    files.insert(SUMMARY_FILE.to_owned(), render_summary(report));
    files
}

pub trait ResultStore {
    fn save(&mut self, report: &EvalReport) -> Result<(), EvalError>;
    fn load(&self, name: &str) -> Result<String, EvalError>;

    fn load_summary(&self) -> Result<SummaryFile, EvalError> {
        parse_summary_file(&self.load(SUMMARY_FILE)?)
    }

    fn load_results(&self, engine: Engine) -> Result<ResultsFile, EvalError> {
        parse_results_file(&self.load(&results_file_name(engine))?)
    }
}

/// Results as TSV files in a directory.
#[derive(Debug, Clone)]
pub struct TsvResultStore {
    dir: PathBuf,
}

impl TsvResultStore {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }
}

fn io_err(path: &Path, source: std::io::Error) -> EvalError {
    EvalError::Io {
        path: path.display().to_string(),
        source,
    }
}

impl ResultStore for TsvResultStore {
    fn save(&mut self, report: &EvalReport) -> Result<(), EvalError> {
        fs::create_dir_all(&self.dir).map_err(|e| io_err(&self.dir, e))?;
        for (name, contents) in render_result_files(report) {
            let path = self.dir.join(name);
            fs::write(&path, contents).map_err(|e| io_err(&path, e))?;
        }
        Ok(())
    }

    fn load(&self, name: &str) -> Result<String, EvalError> {
        let path = self.dir.join(name);
        fs::read_to_string(&path).map_err(|e| io_err(&path, e))
    }
}

#[derive(Debug, Clone, Default)]
pub struct MemoryResultStore {
    pub files: BTreeMap<String, String>,
}

impl ResultStore for MemoryResultStore {
    fn save(&mut self, report: &EvalReport) -> Result<(), EvalError> {
        self.files.extend(render_result_files(report));
        Ok(())
    }

    fn load(&self, name: &str) -> Result<String, EvalError> {
        self.files.get(name).cloned().ok_or_else(|| EvalError::Io {
            path: name.to_owned(),
            source: std::io::ErrorKind::NotFound.into(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResultRow {
    pub query_id: String,
    pub query_word: String,
    pub found_count: usize,
    pub relevant_count: usize,
    /// Ten-thousandths.
    pub precision: u32,
    /// Ten-thousandths.
    pub recall: u32,
    pub peers_contacted: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResultsFile {
    pub engine: Engine,
    pub seed: u64,
    pub pattern_version: String,
    pub digest: String,
    pub rows: Vec<ResultRow>,
    /// `(query_id, message)` for queries the engine failed on.
    pub errors: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SummaryRow {
    pub engine: Engine,
    pub queries: usize,
    /// Ten-thousandths.
    pub mean_precision: u32,
    /// Ten-thousandths.
    pub mean_recall: u32,
    pub precision_exact: BigRational,
    pub recall_exact: BigRational,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SummaryFile {
    pub seed: u64,
    pub pattern_version: String,
    pub digest: String,
    pub rows: Vec<SummaryRow>,
}

impl SummaryFile {
    pub fn row(&self, engine: Engine) -> Option<&SummaryRow> {
        self.rows.iter().find(|r| r.engine == engine)
    }
}

fn parse_err(file: &str, line: usize, msg: impl Into<String>) -> EvalError {
    EvalError::Parse {
        file: file.to_owned(),
        line,
        msg: msg.into(),
    }
}

struct Header {
    engine: Option<Engine>,
    seed: u64,
    pattern_version: String,
    digest: String,
}

fn parse_header(file: &str, first: &str, magic: &str, want_engine: bool) -> Result<Header, EvalError> {
    let params = first
        .strip_prefix(magic)
        .ok_or_else(|| parse_err(file, 1, format!("missing `{magic}` header")))?;
    let (mut engine, mut seed, mut patterns, mut digest) = (None, None, None, None);
    for token in params.split_whitespace() {
        let (key, value) = token
            .split_once('=')
            .ok_or_else(|| parse_err(file, 1, format!("bad header token {token:?}")))?;
        match key {
            "engine" if want_engine => engine = Some(value.parse::<Engine>().map_err(|e| parse_err(file, 1, e))?),
            "seed" => seed = Some(value.parse::<u64>().map_err(|_| parse_err(file, 1, "bad seed"))?),
            "patterns" => patterns = Some(value.to_owned()),
            "digest" => digest = Some(value.to_owned()),
            other => return Err(parse_err(file, 1, format!("unknown header key {other:?}"))),
        }
    }
    match (seed, patterns, digest) {
        (Some(seed), Some(pattern_version), Some(digest)) if engine.is_some() || !want_engine => Ok(Header {
            engine,
            seed,
            pattern_version,
            digest,
        }),
        _ => Err(parse_err(file, 1, "header is missing parameters")),
    }
}

fn fields<'a, const N: usize>(file: &str, line_no: usize, line: &'a str) -> Result<[&'a str; N], EvalError> {
    line.split('\t')
        .collect::<Vec<_>>()
        .try_into()
        .map_err(|f: Vec<&str>| parse_err(file, line_no, format!("expected {N} fields, found {}", f.len())))
}

fn count(file: &str, line_no: usize, what: &str, text: &str) -> Result<usize, EvalError> {
    text.parse::<usize>()
        .map_err(|_| parse_err(file, line_no, format!("bad {what} {text:?}")))
}

fn fixed4(file: &str, line_no: usize, what: &str, text: &str) -> Result<u32, EvalError> {
    parse4(text).ok_or_else(|| parse_err(file, line_no, format!("bad {what} {text:?}")))
}

fn fraction(file: &str, line_no: usize, text: &str) -> Result<BigRational, EvalError> {
    let bad = || parse_err(file, line_no, format!("bad fraction {text:?}"));
    if text.len() > 200 {
        return Err(bad());
    }
    let (n, d) = text.split_once('/').unwrap_or((text, "1"));
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    if !digits(n) || !digits(d) {
        return Err(bad());
    }
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

fn body(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .skip(1)
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub fn parse_results_file(text: &str) -> Result<ResultsFile, EvalError> {
    const FILE: &str = "results";
    let header = parse_header(FILE, text.lines().next().unwrap_or_default(), RESULTS_MAGIC, true)?;
    let mut rows = Vec::new();
    for (line_no, line) in body(text) {
        let [qid, word, found, relevant, p, r, peers] = fields::<7>(FILE, line_no, line)?;
        if qid.is_empty() || word.is_empty() {
            return Err(parse_err(FILE, line_no, "empty query id or word"));
        }
        rows.push(ResultRow {
            query_id: qid.to_owned(),
            query_word: word.to_owned(),
            found_count: count(FILE, line_no, "found_count", found)?,
            relevant_count: count(FILE, line_no, "relevant_count", relevant)?,
            precision: fixed4(FILE, line_no, "precision", p)?,
            recall: fixed4(FILE, line_no, "recall", r)?,
            peers_contacted: match peers {
                "-" => None,
                n => Some(count(FILE, line_no, "peers_contacted", n)?),
            },
        });
    }
    let errors = text
        .lines()
        .filter_map(|l| l.strip_prefix("# error "))
        .filter_map(|l| l.split_once(": "))
        .map(|(q, m)| (q.to_owned(), m.to_owned()))
        .collect();
    Ok(ResultsFile {
        engine: header.engine.expect("required by parse_header"),
        seed: header.seed,
        pattern_version: header.pattern_version,
        digest: header.digest,
        rows,
        errors,
    })
}

pub fn parse_summary_file(text: &str) -> Result<SummaryFile, EvalError> {
    const FILE: &str = SUMMARY_FILE;
    let header = parse_header(FILE, text.lines().next().unwrap_or_default(), SUMMARY_MAGIC, false)?;
    let mut rows: Vec<SummaryRow> = Vec::new();
    for (line_no, line) in body(text) {
        let [engine, queries, p, r, p_exact, r_exact, failed] = fields::<7>(FILE, line_no, line)?;
        let engine = engine.parse::<Engine>().map_err(|e| parse_err(FILE, line_no, e))?;
        if rows.iter().any(|row| row.engine == engine) {
            return Err(parse_err(FILE, line_no, format!("duplicate engine {engine}")));
        }
        rows.push(SummaryRow {
            engine,
            queries: count(FILE, line_no, "queries", queries)?,
            mean_precision: fixed4(FILE, line_no, "mean_precision", p)?,
            mean_recall: fixed4(FILE, line_no, "mean_recall", r)?,
            precision_exact: fraction(FILE, line_no, p_exact)?,
            recall_exact: fraction(FILE, line_no, r_exact)?,
            failed: count(FILE, line_no, "failed", failed)?,
        });
    }
    Ok(SummaryFile {
        seed: header.seed,
        pattern_version: header.pattern_version,
        digest: header.digest,
        rows,
    })
}
