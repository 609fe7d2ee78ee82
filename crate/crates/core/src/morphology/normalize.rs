//! Orthographic normalization of Arabic words.
//!
//! Vocalized and bare spellings of the same word must compare equal, so every
//! word that enters an index, a lexicon or a query passes through [`normalize`]:
//!
//! - compatibility forms (presentation-form ligatures such as `ﻷ`) are folded
//!   with NFKC;
//! - harakat, tanwin, shadda, sukun, the other Quranic annotation marks and
//!   tatweel are removed;
//! - `أ إ آ ٱ` become bare `ا`, `ى` becomes `ي` and `ة` becomes `ه`.

use std::borrow::Borrow;
use std::fmt;

use unicode_normalization::UnicodeNormalization;

use super::MorphologyError;

const TATWEEL: char = '\u{0640}';

/// True for code points that belong to one of the Arabic Unicode blocks.
pub fn is_arabic_code_point(c: char) -> bool {
    matches!(c,
        '\u{0600}'..='\u{06FF}'
        | '\u{0750}'..='\u{077F}'
        | '\u{08A0}'..='\u{08FF}'
        | '\u{FB50}'..='\u{FDFF}'
        | '\u{FE70}'..='\u{FEFF}')
}

/// Vowel marks, tanwin, shadda, sukun and the small annotation signs.
pub fn is_diacritic(c: char) -> bool {
    matches!(c,
        '\u{0610}'..='\u{061A}'
        | '\u{064B}'..='\u{065F}'
        | '\u{0670}'
        | '\u{06D6}'..='\u{06DC}'
        | '\u{06DF}'..='\u{06E4}'
        | '\u{06E7}'..='\u{06E8}'
        | '\u{06EA}'..='\u{06ED}'
        | '\u{08D3}'..='\u{08FF}')
}

/// Base letters allowed in a normalized word.
pub fn is_base_letter(c: char) -> bool {
    matches!(c,
        '\u{0621}'..='\u{063F}'
        | '\u{0641}'..='\u{064A}'
        | '\u{066E}'..='\u{066F}'
        | '\u{0671}'..='\u{06D3}'
        | '\u{06D5}'
        | '\u{06EE}'..='\u{06EF}'
        | '\u{06FA}'..='\u{06FC}'
        | '\u{06FF}'
        | '\u{0750}'..='\u{077F}'
        | '\u{08A0}'..='\u{08C9}')
}

fn fold_letter(c: char) -> char {
    match c {
        '\u{0622}' | '\u{0623}' | '\u{0625}' | '\u{0671}' => '\u{0627}',
        '\u{0649}' => '\u{064A}',
        '\u{0629}' => '\u{0647}',
        other => other,
    }
}

/// A single Arabic word as typed: may carry diacritics, tatweel and clitics.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RawWord(String);

impl RawWord {
    pub fn new(text: impl Into<String>) -> Result<Self, MorphologyError> {
        let text = text.into();
        if text.is_empty() {
            return Err(MorphologyError::EmptyWord);
        }
        if let Some(c) = text.chars().find(|&c| !is_arabic_code_point(c)) {
            return Err(MorphologyError::NonArabic { word: text, ch: c });
        }
        Ok(Self(text))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for RawWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A diacritic-free, orthographically folded Arabic word.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NormalizedWord(String);

impl NormalizedWord {
    /// Accepts `text` only if it is already in normalized form.
    pub fn parse(text: &str) -> Result<Self, MorphologyError> {
        let normalized = normalize_str(text)?;
        if normalized.as_str() != text {
            return Err(MorphologyError::NotNormalized(text.to_owned()));
        }
        Ok(normalized)
    }

    pub(crate) fn from_normalized_unchecked(text: String) -> Self {
        debug_assert!(!text.is_empty() && text.chars().all(is_base_letter));
        Self(text)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn char_len(&self) -> usize {
        self.0.chars().count()
    }
}

impl fmt::Display for NormalizedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Borrow<str> for NormalizedWord {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl AsRef<str> for NormalizedWord {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// Normalizes a validated raw word.
pub fn normalize(word: &RawWord) -> Result<NormalizedWord, MorphologyError> {
    normalize_str(word.as_str())
}

/// Normalizes arbitrary text that is expected to hold one Arabic word.
pub fn normalize_str(text: &str) -> Result<NormalizedWord, MorphologyError> {
    let mut out = String::with_capacity(text.len());
    for c in text.nfkc() {
        if c == TATWEEL || is_diacritic(c) {
            continue;
        }
        let c = fold_letter(c);
        if !is_base_letter(c) {
            return Err(MorphologyError::NonArabic {
                word: text.to_owned(),
                ch: c,
            });
        }
        out.push(c);
    }
    if out.is_empty() {
        return Err(MorphologyError::EmptyAfterNormalization(text.to_owned()));
    }
    Ok(NormalizedWord(out))
}
