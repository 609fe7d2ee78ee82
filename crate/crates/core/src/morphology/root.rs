use std::fmt;

use super::{normalize_str, MorphologyError, NormalizedWord};

/// A triliteral or quadriliteral root in normalized spelling.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Root(String);

impl Root {
    pub fn new(text: &str) -> Result<Self, MorphologyError> {
        let normalized = normalize_str(text).map_err(|_| MorphologyError::InvalidRoot(text.to_owned()))?;
        if normalized.as_str() != text {
            return Err(MorphologyError::InvalidRoot(text.to_owned()));
        }
        Self::from_word(&normalized)
    }

    pub fn from_word(word: &NormalizedWord) -> Result<Self, MorphologyError> {
        match word.char_len() {
            3 | 4 => Ok(Self(word.as_str().to_owned())),
            _ => Err(MorphologyError::InvalidRoot(word.as_str().to_owned())),
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn arity(&self) -> usize {
        self.0.chars().count()
    }

    pub fn letters(&self) -> impl Iterator<Item = char> + '_ {
        self.0.chars()
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}
