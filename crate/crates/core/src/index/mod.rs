//! Exact-key inverted index in the two indexation modes.
//!
//! In [`IndexMode::Simple`] a document is filed under the one word it
//! contains. In [`IndexMode::Advanced`] it is filed under every vocabulary
//! word sharing its root, enumerated from the lexicon at build time. Storing
//! a single root key per document and resolving queries to roots would give
//! the same lookups; root-mate enumeration is kept because it leaves lookup a
//! plain exact match in both modes.

mod snapshot;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::corpus::{DocId, Document};
use crate::morphology::{MorphologyError, NormalizedWord, Root};

pub use crate::morphology::RootLexicon;
pub use snapshot::{decode_snapshot, encode_snapshot, SnapshotError, SNAPSHOT_VERSION};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IndexMode {
    Simple,
    Advanced,
}

impl IndexMode {
    pub fn as_str(self) -> &'static str {
        match self {
            IndexMode::Simple => "simple",
            IndexMode::Advanced => "advanced",
        }
    }
}

impl fmt::Display for IndexMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for IndexMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "simple" => Ok(IndexMode::Simple),
            "advanced" => Ok(IndexMode::Advanced),
            other => Err(format!("unknown index mode {other:?} (expected simple or advanced)")),
        }
    }
}

/// One hit: the document and the index key that produced it.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Posting<'a> {
    pub doc_id: &'a DocId,
    pub matched_key: &'a NormalizedWord,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvertedIndex {
    mode: IndexMode,
    entries: BTreeMap<NormalizedWord, BTreeSet<DocId>>,
    root_groups: BTreeMap<Root, BTreeSet<NormalizedWord>>,
    doc_count: usize,
}

static EMPTY: BTreeSet<DocId> = BTreeSet::new();

impl InvertedIndex {
    /// Indexes `docs`. The lexicon supplies root-mates in advanced mode and
    /// the root groups kept for expansion in both modes.
    pub fn build<'a, I>(docs: I, mode: IndexMode, lexicon: &RootLexicon) -> Result<Self, MorphologyError>
    where
        I: IntoIterator<Item = &'a Document>,
    {
        let mut entries: BTreeMap<NormalizedWord, BTreeSet<DocId>> = BTreeMap::new();
        let mut root_groups = BTreeMap::new();
        let mut doc_count = 0;
        for doc in docs {
            doc_count += 1;
            match mode {
                IndexMode::Simple => {
                    entries.entry(doc.word.clone()).or_default().insert(doc.doc_id.clone());
                }
                IndexMode::Advanced => {
                    let root = lexicon
                        .root_of(&doc.word)
                        .ok_or_else(|| MorphologyError::UnknownRoot(doc.word.to_string()))?;
                    let mates = lexicon.group(root).expect("lexicon groups cover their words");
                    for mate in mates {
                        entries.entry(mate.clone()).or_default().insert(doc.doc_id.clone());
                    }
                }
            }
            if let Some(root) = lexicon.root_of(&doc.word) {
                root_groups
                    .entry(root.clone())
                    .or_insert_with(|| lexicon.group(root).cloned().unwrap_or_default());
            }
        }
        Ok(Self {
            mode,
            entries,
            root_groups,
            doc_count,
        })
    }

    pub(crate) fn from_parts(
        mode: IndexMode,
        entries: BTreeMap<NormalizedWord, BTreeSet<DocId>>,
        root_groups: BTreeMap<Root, BTreeSet<NormalizedWord>>,
        doc_count: usize,
    ) -> Self {
        Self {
            mode,
            entries,
            root_groups,
            doc_count,
        }
    }

    pub fn mode(&self) -> IndexMode {
        self.mode
    }

    pub fn doc_count(&self) -> usize {
        self.doc_count
    }

    pub fn key_count(&self) -> usize {
        self.entries.len()
    }

    /// Sum of posting-list lengths.
    pub fn posting_count(&self) -> usize {
        self.entries.values().map(BTreeSet::len).sum()
    }

    /// Exact-key lookup, sorted by doc id. Absent keys yield an empty set.
    pub fn lookup(&self, key: &NormalizedWord) -> &BTreeSet<DocId> {
        self.entries.get(key).unwrap_or(&EMPTY)
    }

    pub fn postings<'a>(&'a self, key: &NormalizedWord) -> impl Iterator<Item = Posting<'a>> + 'a {
        self.entries.get_key_value(key).into_iter().flat_map(|(k, docs)| {
            docs.iter().map(move |d| Posting {
                doc_id: d,
                matched_key: k,
            })
        })
    }

    pub fn keys(&self) -> impl Iterator<Item = &NormalizedWord> {
        self.entries.keys()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&NormalizedWord, &BTreeSet<DocId>)> {
        self.entries.iter()
    }

    /// Roots of the indexed documents, each with its full vocabulary group.
    pub fn root_groups(&self) -> &BTreeMap<Root, BTreeSet<NormalizedWord>> {
        &self.root_groups
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::PeerId;

    fn doc(id: &str, word: &str, root: &str) -> Document {
        Document {
            doc_id: DocId::new(id).unwrap(),
            word: NormalizedWord::parse(word).unwrap(),
            root: Root::new(root).unwrap(),
            peer_id: PeerId(1),
        }
    }

    fn fixture() -> (Vec<Document>, RootLexicon) {
        let docs = vec![
            doc("d1", "يلعبون", "لعب"),
            doc("d2", "لاعب", "لعب"),
            doc("d3", "ياكلون", "اكل"),
        ];
        let lex = docs.iter().map(|d| (d.word.clone(), d.root.clone())).collect();
        (docs, lex)
    }

    fn w(s: &str) -> NormalizedWord {
        NormalizedWord::parse(s).unwrap()
    }

    fn ids(set: &BTreeSet<DocId>) -> Vec<&str> {
        set.iter().map(DocId::as_str).collect()
    }

    #[test]
    fn simple_mode_one_key_per_doc() {
        let (docs, lex) = fixture();
        let idx = InvertedIndex::build(&docs, IndexMode::Simple, &lex).unwrap();
        assert_eq!(idx.key_count(), 3);
        assert_eq!(idx.posting_count(), 3);
        assert_eq!(ids(idx.lookup(&w("يلعبون"))), vec!["d1"]);
    }

    #[test]
    fn advanced_mode_files_under_root_mates() {
        let (docs, lex) = fixture();
        let idx = InvertedIndex::build(&docs, IndexMode::Advanced, &lex).unwrap();
        assert_eq!(ids(idx.lookup(&w("يلعبون"))), vec!["d1", "d2"]);
        assert_eq!(ids(idx.lookup(&w("لاعب"))), vec!["d1", "d2"]);
        assert_eq!(ids(idx.lookup(&w("ياكلون"))), vec!["d3"]);
        assert_eq!(idx.posting_count(), 5);
        let postings: Vec<_> = idx.postings(&w("لاعب")).collect();
        assert_eq!(postings.len(), 2);
        assert!(postings.iter().all(|p| p.matched_key.as_str() == "لاعب"));
    }

    #[test]
    fn absent_key_and_empty_index() {
        let (docs, lex) = fixture();
        let idx = InvertedIndex::build(&docs, IndexMode::Simple, &lex).unwrap();
        assert!(idx.lookup(&w("كتب")).is_empty());
        let empty = InvertedIndex::build(&[], IndexMode::Advanced, &lex).unwrap();
        assert_eq!(empty.doc_count(), 0);
        assert_eq!(empty.key_count(), 0);
        assert!(empty.lookup(&w("لاعب")).is_empty());
    }

    #[test]
    fn advanced_requires_lexicon_entry() {
        let (docs, _) = fixture();
        let err = InvertedIndex::build(&docs, IndexMode::Advanced, &RootLexicon::default()).unwrap_err();
        assert!(matches!(err, MorphologyError::UnknownRoot(_)));
        // simple mode does not need roots
        assert!(InvertedIndex::build(&docs, IndexMode::Simple, &RootLexicon::default()).is_ok());
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("advanced".parse::<IndexMode>().unwrap(), IndexMode::Advanced);
        assert!("fancy".parse::<IndexMode>().is_err());
    }
}
