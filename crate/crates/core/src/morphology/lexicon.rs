use std::collections::{BTreeMap, BTreeSet};

use super::{MorphologyError, NormalizedWord, Root};

/// Word → root and root → words, kept as mutually inverse maps.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RootLexicon {
    word_roots: BTreeMap<NormalizedWord, Root>,
    groups: BTreeMap<Root, BTreeSet<NormalizedWord>>,
}

impl RootLexicon {
    pub fn insert(&mut self, word: NormalizedWord, root: Root) -> Result<(), MorphologyError> {
        if let Some(existing) = self.word_roots.get(&word) {
            if *existing == root {
                return Ok(());
            }
            return Err(MorphologyError::LexiconConflict {
                word: word.to_string(),
                existing: existing.to_string(),
                new: root.to_string(),
            });
        }
        self.groups.entry(root.clone()).or_default().insert(word.clone());
        self.word_roots.insert(word, root);
        Ok(())
    }

    pub fn root_of(&self, word: &NormalizedWord) -> Option<&Root> {
        self.word_roots.get(word)
    }

    pub fn contains_word(&self, word: &str) -> bool {
        self.word_roots.contains_key(word)
    }

    pub fn contains_root(&self, root: &Root) -> bool {
        self.groups.contains_key(root)
    }

    /// All vocabulary words derived from `root`, in canonical order.
    pub fn group(&self, root: &Root) -> Option<&BTreeSet<NormalizedWord>> {
        self.groups.get(root)
    }

    pub fn roots(&self) -> impl Iterator<Item = &Root> {
        self.groups.keys()
    }

    pub fn words(&self) -> impl Iterator<Item = (&NormalizedWord, &Root)> {
        self.word_roots.iter()
    }

    pub fn word_count(&self) -> usize {
        self.word_roots.len()
    }

    pub fn root_count(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word_roots.is_empty()
    }
}

impl FromIterator<(NormalizedWord, Root)> for RootLexicon {
    /// Later conflicting entries are ignored; use [`RootLexicon::insert`] to detect them.
    fn from_iter<T: IntoIterator<Item = (NormalizedWord, Root)>>(iter: T) -> Self {
        let mut lexicon = Self::default();
        for (word, root) in iter {
            let _ = lexicon.insert(word, root);
        }
        lexicon
    }
}
