//! Arabic normalization, root resolution and pattern-based derivation.

mod lexicon;
mod normalize;
mod pattern;
mod root;
mod stem;

pub use lexicon::RootLexicon;
pub use normalize::{
    is_arabic_code_point, is_base_letter, is_diacritic, normalize, normalize_str, NormalizedWord, RawWord,
};
pub use pattern::{derive, DerivationPattern, PatternSet, BUILTIN_PATTERNS};
pub use root::Root;
pub use stem::light_stem;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MorphologyError {
    #[error("empty word")]
    EmptyWord,
    #[error("{word:?} contains non-Arabic character {ch:?}")]
    NonArabic { word: String, ch: char },
    #[error("{0:?} is empty after removing diacritics and tatweel")]
    EmptyAfterNormalization(String),
    #[error("{0:?} is not in normalized form")]
    NotNormalized(String),
    #[error("invalid root {0:?}: a root has 3 or 4 normalized letters")]
    InvalidRoot(String),
    #[error("cannot resolve a root for {0:?}")]
    UnknownRoot(String),
    #[error("pattern {pattern} has {pattern_arity} slots but root {root} has {root_arity} letters")]
    ArityMismatch {
        pattern: String,
        pattern_arity: usize,
        root: String,
        root_arity: usize,
    },
    #[error("pattern file line {line}: {msg}")]
    PatternSyntax { line: usize, msg: String },
    #[error("patterns {first} and {second} produce the same word {word}")]
    PatternCollision {
        first: String,
        second: String,
        word: String,
    },
    #[error("{word} is already assigned to root {existing}, cannot reassign to {new}")]
    LexiconConflict {
        word: String,
        existing: String,
        new: String,
    },
}

/// Resolves the root of `word`.
///
/// The lexicon is authoritative; words it does not know go through the light
/// stemmer, which itself consults the lexicon at every stripping step.
pub fn extract_root(word: &NormalizedWord, lexicon: &RootLexicon) -> Result<Root, MorphologyError> {
    if let Some(root) = lexicon.root_of(word) {
        return Ok(root.clone());
    }
    light_stem(word, lexicon)
}

/// True iff both words resolve to the same root.
pub fn same_root(a: &NormalizedWord, b: &NormalizedWord, lexicon: &RootLexicon) -> Result<bool, MorphologyError> {
    Ok(extract_root(a, lexicon)? == extract_root(b, lexicon)?)
}
