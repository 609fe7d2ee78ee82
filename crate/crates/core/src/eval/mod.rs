//! Precision/recall evaluation of the four engines over the corpus queries.

mod metrics;
mod report;
mod results;

use std::collections::{BTreeMap, BTreeSet};

use num::rational::BigRational;
use rayon::prelude::*;
use thiserror::Error;

use crate::corpus::{relevant_set, CorpusManifest, DocId, PeerId};
use crate::index::{IndexMode, InvertedIndex};
use crate::morphology::MorphologyError;
use crate::p2p::{build_overlay, p2p_search, Overlay, P2pError};
use crate::search::{search_exact, search_expanded, Engine, Query, SearchResult};

pub use metrics::{format4, format4_big, format_percent, mean, parse4, precision, recall, Fraction, Precision, Recall};
pub use report::render_report;
pub use results::{
    parse_results_file, parse_summary_file, render_result_files, MemoryResultStore, ResultRow, ResultStore,
    ResultsFile, SummaryFile, SummaryRow, TsvResultStore, SUMMARY_FILE,
};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error(transparent)]
    Morphology(#[from] MorphologyError),
    #[error(transparent)]
    P2p(#[from] P2pError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{file}:{line}: {msg}")]
    Parse { file: String, line: usize, msg: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalRecord {
    pub query_id: String,
    pub query_word: String,
    pub engine: Engine,
    pub s_found: BTreeSet<DocId>,
    pub s_relevant: BTreeSet<DocId>,
    pub precision: Fraction,
    pub recall: Fraction,
    pub empty_found: bool,
    pub empty_relevant: bool,
    pub expanded_terms_count: usize,
    /// P2P engines only.
    pub peers_contacted: Option<usize>,
    pub degraded: bool,
    /// Set when the engine failed on this query; found is then empty.
    pub error: Option<String>,
}

impl EvalRecord {
    fn new(
        query_id: &str,
        query_word: &str,
        engine: Engine,
        s_found: BTreeSet<DocId>,
        s_relevant: BTreeSet<DocId>,
    ) -> Self {
        let p = precision(&s_found, &s_relevant);
        let r = recall(&s_found, &s_relevant);
        Self {
            query_id: query_id.to_owned(),
            query_word: query_word.to_owned(),
            engine,
            s_found,
            s_relevant,
            precision: p.value,
            recall: r.value,
            empty_found: p.empty_found,
            empty_relevant: r.empty_relevant,
            expanded_terms_count: 0,
            peers_contacted: None,
            degraded: false,
            error: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalReport {
    pub seed: u64,
    pub corpus_digest: String,
    pub pattern_version: String,
    /// Records per engine, in query order.
    pub records: BTreeMap<Engine, Vec<EvalRecord>>,
}

impl EvalReport {
    pub fn engines(&self) -> impl Iterator<Item = Engine> + '_ {
        self.records.keys().copied()
    }

    pub fn mean_precision(&self, engine: Engine) -> Option<BigRational> {
        self.records.get(&engine).map(|r| mean(r.iter().map(|x| &x.precision)))
    }

    pub fn mean_recall(&self, engine: Engine) -> Option<BigRational> {
        self.records.get(&engine).map(|r| mean(r.iter().map(|x| &x.recall)))
    }

    pub fn failed(&self, engine: Engine) -> usize {
        self.records
            .get(&engine)
            .map_or(0, |r| r.iter().filter(|x| x.error.is_some()).count())
    }
}

#[derive(Debug, Clone, Default)]
pub struct EvalOptions {
    /// Origin peer for P2P engines; `None` rotates through the peers by query
    /// position.
    pub origin: Option<PeerId>,
    /// Recorded in the report as provenance.
    pub corpus_digest: String,
}

/// Engines built once and shared by all queries.
struct Prepared {
    simple: Option<InvertedIndex>,
    overlays: BTreeMap<IndexMode, Overlay>,
}

fn prepare(manifest: &CorpusManifest, engines: &[Engine]) -> Result<Prepared, EvalError> {
    let needs_simple = engines.iter().any(|e| matches!(e, Engine::Baseline | Engine::Expanded));
    let simple = if needs_simple {
        Some(InvertedIndex::build(
            manifest.documents(),
            IndexMode::Simple,
            manifest.lexicon(),
        )?)
    } else {
        None
    };
    let mut overlays = BTreeMap::new();
    for e in engines.iter().filter(|e| e.is_p2p()) {
        let mode = e.index_mode();
        if let std::collections::btree_map::Entry::Vacant(slot) = overlays.entry(mode) {
            slot.insert(build_overlay(manifest, mode)?);
        }
    }
    Ok(Prepared { simple, overlays })
}

fn run_engine(
    engine: Engine,
    query: &Query,
    prepared: &Prepared,
    manifest: &CorpusManifest,
    origin: PeerId,
) -> Result<(SearchResult, Option<usize>), EvalError> {
    Ok(match engine {
        Engine::Baseline => (search_exact(query, prepared.simple.as_ref().expect("prepared")), None),
        Engine::Expanded => (
            search_expanded(query, prepared.simple.as_ref().expect("prepared"), manifest.lexicon()),
            None,
        ),
        Engine::P2pSimple | Engine::P2pAdvanced => {
            let mode = engine.index_mode();
            let outcome = p2p_search(query, &prepared.overlays[&mode], origin, mode)?;
            (outcome.result, Some(outcome.peers_contacted))
        }
    })
}

/// Runs every corpus query through each engine and scores it against the
/// manifest's ground truth. Engine failures become failed records.
pub fn run_evaluation(
    manifest: &CorpusManifest,
    engines: &[Engine],
    options: &EvalOptions,
) -> Result<EvalReport, EvalError> {
    let prepared = prepare(manifest, engines)?;
    let peer_count = manifest.spec().peer_count;

    let mut records = BTreeMap::new();
    for &engine in engines {
        let rows = manifest
            .queries()
            .par_iter()
            .enumerate()
            .map(|(i, cq)| -> Result<EvalRecord, EvalError> {
                let relevant = relevant_set(&cq.word, manifest)?;
                let query = Query::from_normalized(cq.query_id.clone(), cq.word.clone());
                let origin = options.origin.unwrap_or(PeerId((i % peer_count) as u32 + 1));
                Ok(match run_engine(engine, &query, &prepared, manifest, origin) {
                    Ok((result, peers_contacted)) => {
                        let mut rec = EvalRecord::new(&cq.query_id, cq.word.as_str(), engine, result.found, relevant);
                        rec.expanded_terms_count = result.expanded_terms.len();
                        rec.peers_contacted = peers_contacted;
                        rec.degraded = result.degraded;
                        rec
                    }
                    Err(err) => {
                        let mut rec =
                            EvalRecord::new(&cq.query_id, cq.word.as_str(), engine, BTreeSet::new(), relevant);
                        rec.error = Some(err.to_string());
                        rec
                    }
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        records.insert(engine, rows);
    }

    Ok(EvalReport {
        seed: manifest.spec().seed,
        corpus_digest: options.corpus_digest.clone(),
        pattern_version: manifest.pattern_version().to_owned(),
        records,
    })
}
