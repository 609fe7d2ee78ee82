//! Centralized engines: exact-match baseline and the root-expansion layer
//! that wraps it.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::corpus::DocId;
use crate::index::{IndexMode, InvertedIndex};
use crate::morphology::{extract_root, normalize, MorphologyError, NormalizedWord, RawWord, RootLexicon};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Engine {
    Baseline,
    Expanded,
    P2pSimple,
    P2pAdvanced,
}

impl Engine {
    pub const ALL: [Engine; 4] = [
        Engine::Baseline,
        Engine::Expanded,
        Engine::P2pSimple,
        Engine::P2pAdvanced,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Engine::Baseline => "baseline",
            Engine::Expanded => "expanded",
            Engine::P2pSimple => "p2p-simple",
            Engine::P2pAdvanced => "p2p-advanced",
        }
    }

    pub fn is_p2p(self) -> bool {
        matches!(self, Engine::P2pSimple | Engine::P2pAdvanced)
    }

    /// Index mode the engine's index must be built in.
    pub fn index_mode(self) -> IndexMode {
        match self {
            Engine::P2pAdvanced => IndexMode::Advanced,
            _ => IndexMode::Simple,
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Engine {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Engine::ALL
            .into_iter()
            .find(|e| e.as_str() == s)
            .ok_or_else(|| format!("unknown engine {s:?} (expected baseline, expanded, p2p-simple or p2p-advanced)"))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QueryError {
    #[error("query {0:?} has more than one word")]
    MultiWord(String),
    #[error(transparent)]
    Morphology(#[from] MorphologyError),
}

/// A single-word query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    pub query_id: String,
    pub raw: RawWord,
    pub normalized: NormalizedWord,
}

impl Query {
    pub fn parse(query_id: impl Into<String>, text: &str) -> Result<Self, QueryError> {
        let trimmed = text.trim();
        if trimmed.split_whitespace().nth(1).is_some() {
            return Err(QueryError::MultiWord(text.to_owned()));
        }
        let raw = RawWord::new(trimmed)?;
        let normalized = normalize(&raw)?;
        Ok(Self {
            query_id: query_id.into(),
            raw,
            normalized,
        })
    }

    pub fn from_normalized(query_id: impl Into<String>, word: NormalizedWord) -> Self {
        Self {
            query_id: query_id.into(),
            raw: RawWord::new(word.as_str()).expect("normalized words are valid raw words"),
            normalized: word,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    pub query_id: String,
    pub engine: Engine,
    pub found: BTreeSet<DocId>,
    /// Terms actually submitted; empty for the baseline.
    pub expanded_terms: Vec<NormalizedWord>,
    /// Root resolution failed and the engine fell back to exact search.
    pub degraded: bool,
}

/// Expansion terms for `query` and whether resolution degraded to the query
/// word alone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expansion {
    pub terms: Vec<NormalizedWord>,
    pub degraded: bool,
}

/// Every vocabulary word sharing the query's root, in canonical order.
/// Falls back to the query word itself when the root cannot be resolved or
/// has no vocabulary words.
pub fn expand_query(query: &Query, lexicon: &RootLexicon) -> Expansion {
    match extract_root(&query.normalized, lexicon) {
        Ok(root) => match lexicon.group(&root) {
            Some(group) if !group.is_empty() => Expansion {
                terms: group.iter().cloned().collect(),
                degraded: false,
            },
            _ => Expansion {
                terms: vec![query.normalized.clone()],
                degraded: false,
            },
        },
        Err(_) => Expansion {
            terms: vec![query.normalized.clone()],
            degraded: true,
        },
    }
}

/// Exact lookup of the query word. Over a simple index this is the baseline
/// engine; over an advanced index it already returns every root-mate.
pub fn search_exact(query: &Query, index: &InvertedIndex) -> SearchResult {
    SearchResult {
        query_id: query.query_id.clone(),
        engine: Engine::Baseline,
        found: index.lookup(&query.normalized).clone(),
        expanded_terms: Vec::new(),
        degraded: false,
    }
}

/// Rewrites the query to its root-mates and unions the exact lookups over an
/// unmodified simple index.
pub fn search_expanded(query: &Query, index: &InvertedIndex, lexicon: &RootLexicon) -> SearchResult {
    let Expansion { terms, degraded } = expand_query(query, lexicon);
    let found = terms.iter().flat_map(|t| index.lookup(t).iter().cloned()).collect();
    SearchResult {
        query_id: query.query_id.clone(),
        engine: Engine::Expanded,
        found,
        expanded_terms: terms,
        degraded,
    }
}
