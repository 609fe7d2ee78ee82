//! Corpus ground truth: documents, roots, peer placement and the query set.
//!
//! Every document holds exactly one word. Roots are placed on peers in
//! contiguous blocks (after canonical sorting) and peers are grouped under
//! super-peers in contiguous blocks as well, so the default layout is
//! 4 peers × 25 roots × 100 words under 2 super-peers.

mod files;
mod generate;
mod roots;

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::morphology::{extract_root, MorphologyError, NormalizedWord, Root, RootLexicon};

pub use files::{
    corpus_digest, digest_directory, document_path, load_corpus, manifest_to_string, parse_manifest, parse_queries,
    queries_to_string, read_documents, verify_documents, write_corpus, ManifestFile, MANIFEST_FILE, QUERIES_FILE,
};
pub use generate::generate_corpus;
pub use roots::BUILTIN_ROOTS;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("invalid corpus spec: {0}")]
    InvalidSpec(String),
    #[error("need {needed} roots but only {available} are built in")]
    InsufficientRoots { needed: usize, available: usize },
    #[error("root {root}: every alternate of pattern {pattern} collides with an existing word")]
    PatternCollision { root: String, pattern: String },
    #[error("{file}:{line}: {msg}")]
    Parse {
        file: &'static str,
        line: usize,
        msg: String,
    },
    #[error("inconsistent corpus: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Morphology(#[from] MorphologyError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

macro_rules! node_id {
    ($name:ident, $prefix:literal) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(pub u32);

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, concat!($prefix, "-{}"), self.0)
            }
        }

        impl FromStr for $name {
            type Err = String;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                s.strip_prefix(concat!($prefix, "-"))
                    .and_then(|n| n.parse::<u32>().ok())
                    .filter(|&n| n > 0 && !s.contains('+'))
                    .map($name)
                    .ok_or_else(|| format!("expected `{}-<n>` with n >= 1, got {s:?}", $prefix))
            }
        }
    };
}

node_id!(PeerId, "peer");
node_id!(SuperPeerId, "super");

/// Stable document identifier, also the document's file stem.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DocId(String);

impl DocId {
    pub fn new(id: impl Into<String>) -> Result<Self, String> {
        let id = id.into();
        let ok =
            !id.is_empty() && id.len() <= 64 && id.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'-' || b == b'_');
        if ok {
            Ok(Self(id))
        } else {
            Err(format!("invalid doc id {id:?}"))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for DocId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorpusSpec {
    pub root_count: usize,
    pub words_per_root: usize,
    pub peer_count: usize,
    pub superpeer_count: usize,
    pub roots_per_peer: usize,
    pub seed: u64,
}

pub const DEFAULT_SEED: u64 = 2011;

impl Default for CorpusSpec {
    fn default() -> Self {
        Self {
            root_count: 100,
            words_per_root: 100,
            peer_count: 4,
            superpeer_count: 2,
            roots_per_peer: 25,
            seed: DEFAULT_SEED,
        }
    }
}

impl CorpusSpec {
    pub fn validate(&self) -> Result<(), CorpusError> {
        let bad = |msg: String| Err(CorpusError::InvalidSpec(msg));
        if self.root_count == 0 || self.words_per_root == 0 || self.peer_count == 0 || self.superpeer_count == 0 {
            return bad("root_count, words_per_root, peer_count and superpeer_count must be positive".into());
        }
        if self.root_count != self.peer_count * self.roots_per_peer {
            return bad(format!(
                "root_count ({}) must equal peer_count ({}) x roots_per_peer ({})",
                self.root_count, self.peer_count, self.roots_per_peer
            ));
        }
        if !self.peer_count.is_multiple_of(self.superpeer_count) {
            return bad(format!(
                "peer_count ({}) must be divisible by superpeer_count ({})",
                self.peer_count, self.superpeer_count
            ));
        }
        Ok(())
    }

    pub fn document_count(&self) -> usize {
        self.root_count * self.words_per_root
    }

    pub fn peers_per_superpeer(&self) -> usize {
        self.peer_count / self.superpeer_count
    }

    pub fn peers(&self) -> impl Iterator<Item = PeerId> {
        (1..=self.peer_count as u32).map(PeerId)
    }

    pub fn superpeers(&self) -> impl Iterator<Item = SuperPeerId> {
        (1..=self.superpeer_count as u32).map(SuperPeerId)
    }

    pub fn superpeer_of(&self, peer: PeerId) -> SuperPeerId {
        SuperPeerId((peer.0 - 1) / self.peers_per_superpeer() as u32 + 1)
    }

    pub fn children_of(&self, superpeer: SuperPeerId) -> Vec<PeerId> {
        self.peers().filter(|&p| self.superpeer_of(p) == superpeer).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub doc_id: DocId,
    pub word: NormalizedWord,
    pub root: Root,
    pub peer_id: PeerId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusQuery {
    pub query_id: String,
    pub word: NormalizedWord,
    pub root: Root,
}

/// Validated corpus ground truth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusManifest {
    spec: CorpusSpec,
    pattern_version: String,
    documents: Vec<Document>,
    roots: Vec<Root>,
    queries: Vec<CorpusQuery>,
    lexicon: RootLexicon,
}

impl CorpusManifest {
    pub fn new(
        spec: CorpusSpec,
        pattern_version: String,
        documents: Vec<Document>,
        queries: Vec<CorpusQuery>,
    ) -> Result<Self, CorpusError> {
        spec.validate()?;
        let fail = |msg: String| Err(CorpusError::Inconsistent(msg));
        if documents.len() != spec.document_count() {
            return fail(format!(
                "{} documents, expected {}",
                documents.len(),
                spec.document_count()
            ));
        }

        let mut ids = HashSet::new();
        let mut lexicon = RootLexicon::default();
        let mut per_root: BTreeMap<&Root, (usize, BTreeSet<PeerId>)> = BTreeMap::new();
        let mut per_peer: BTreeMap<PeerId, usize> = BTreeMap::new();
        for doc in &documents {
            if !ids.insert(&doc.doc_id) {
                return fail(format!("duplicate doc id {}", doc.doc_id));
            }
            if doc.peer_id.0 as usize > spec.peer_count {
                return fail(format!("{} assigned to unknown {}", doc.doc_id, doc.peer_id));
            }
            if lexicon.contains_word(doc.word.as_str()) {
                return fail(format!("word {} appears in more than one document", doc.word));
            }
            lexicon.insert(doc.word.clone(), doc.root.clone())?;
            let entry = per_root.entry(&doc.root).or_default();
            entry.0 += 1;
            entry.1.insert(doc.peer_id);
            *per_peer.entry(doc.peer_id).or_default() += 1;
        }
        if per_root.len() != spec.root_count {
            return fail(format!("{} roots, expected {}", per_root.len(), spec.root_count));
        }
        for (root, (count, peers)) in &per_root {
            if *count != spec.words_per_root {
                return fail(format!(
                    "root {root} has {count} documents, expected {}",
                    spec.words_per_root
                ));
            }
            if peers.len() != 1 {
                return fail(format!("root {root} is split across {} peers", peers.len()));
            }
        }
        let per_peer_expected = spec.roots_per_peer * spec.words_per_root;
        for peer in spec.peers() {
            let n = per_peer.get(&peer).copied().unwrap_or(0);
            if n != per_peer_expected {
                return fail(format!("{peer} holds {n} documents, expected {per_peer_expected}"));
            }
        }

        if queries.len() != spec.root_count {
            return fail(format!(
                "{} queries, expected one per root ({})",
                queries.len(),
                spec.root_count
            ));
        }
        let mut query_roots = HashSet::new();
        let mut query_ids = HashSet::new();
        for q in &queries {
            if !query_ids.insert(q.query_id.as_str()) {
                return fail(format!("duplicate query id {}", q.query_id));
            }
            if !query_roots.insert(&q.root) {
                return fail(format!("two queries share root {}", q.root));
            }
            if lexicon.root_of(&q.word) != Some(&q.root) {
                return fail(format!(
                    "query {} word {} is not a corpus word of root {}",
                    q.query_id, q.word, q.root
                ));
            }
        }

        let roots = per_root.keys().map(|r| (*r).clone()).collect();
        Ok(Self {
            spec,
            pattern_version,
            documents,
            roots,
            queries,
            lexicon,
        })
    }

    pub fn spec(&self) -> &CorpusSpec {
        &self.spec
    }

    pub fn pattern_version(&self) -> &str {
        &self.pattern_version
    }

    pub fn documents(&self) -> &[Document] {
        &self.documents
    }

    /// Roots in canonical (sorted) order.
    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn queries(&self) -> &[CorpusQuery] {
        &self.queries
    }

    /// The word → root map over the corpus vocabulary.
    pub fn lexicon(&self) -> &RootLexicon {
        &self.lexicon
    }

    pub fn documents_of_peer(&self, peer: PeerId) -> impl Iterator<Item = &Document> {
        self.documents.iter().filter(move |d| d.peer_id == peer)
    }

    /// Peers holding at least one document of `root`.
    pub fn owners_of(&self, root: &Root) -> BTreeSet<PeerId> {
        self.documents
            .iter()
            .filter(|d| &d.root == root)
            .map(|d| d.peer_id)
            .collect()
    }
}

/// Documents relevant to `query`: those whose ground-truth root equals the
/// query's resolved root. A plain manifest scan, used as the relevance oracle.
pub fn relevant_set(query: &NormalizedWord, manifest: &CorpusManifest) -> Result<BTreeSet<DocId>, MorphologyError> {
    let root = extract_root(query, manifest.lexicon())?;
    Ok(manifest
        .documents
        .iter()
        .filter(|d| d.root == root)
        .map(|d| d.doc_id.clone())
        .collect())
}
