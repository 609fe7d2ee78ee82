//! Light stemming fallback for words outside the lexicon.
//!
//! Affixes considered: one conjunction (`و ف`), one preposition or article
//! group (`بال كال لل ال ب ك ل`) and up to two pronominal or inflectional
//! suffixes. No strip may leave fewer than three letters.
//!
//! Every stem reachable by optional stripping is first checked against the
//! lexicon, least-stripped first, so a known word wrapped in extra clitics
//! still resolves to its recorded root. Otherwise the greedy residue, reduced
//! by an imperfect prefix or long-vowel infix when it has four letters, must be
//! three or four letters long to count as a root.

use super::{MorphologyError, NormalizedWord, Root, RootLexicon};

const CONJUNCTIONS: &[&str] = &["و", "ف"];
const PREPOSITIONS: &[&str] = &["بال", "كال", "لل", "ال", "ب", "ك", "ل"];
const SUFFIXES: &[&str] = &[
    "هما", "كما", "تما", "ها", "هم", "هن", "كم", "كن", "نا", "ون", "ين", "ان", "ات", "وا", "تم", "ه", "ت", "ي",
];
const IMPERFECT_PREFIXES: &[char] = &['ي', 'ت', 'ن', 'ا'];
const DERIVED_PREFIXES: &[&str] = &["است", "مست", "م"];
const MIN_STEM: usize = 3;

fn chars(s: &str) -> usize {
    s.chars().count()
}

/// Single-letter prepositions are usually part of the stem when only three
/// letters would remain, e.g. `بصر`.
fn min_rest(prefix: &str) -> usize {
    if chars(prefix) == 1 {
        MIN_STEM + 1
    } else {
        MIN_STEM
    }
}

fn prefix_strips<'a>(s: &'a str, options: &[&str]) -> Vec<&'a str> {
    options
        .iter()
        .filter_map(|p| s.strip_prefix(p).filter(|rest| chars(rest) >= min_rest(p)))
        .collect()
}

fn suffix_strips(s: &str) -> Vec<&str> {
    SUFFIXES
        .iter()
        .filter_map(|x| s.strip_suffix(x).filter(|rest| chars(rest) >= MIN_STEM))
        .collect()
}

/// Reduces a four-letter stem by its imperfect prefix or long-vowel infix
/// (`فاعل`, `فعال`, `فعيل`, `فعول`).
fn reduce_four(stem: &str) -> Option<String> {
    let letters: Vec<char> = stem.chars().collect();
    if letters.len() != 4 {
        return None;
    }
    if IMPERFECT_PREFIXES.contains(&letters[0]) {
        return Some(letters[1..].iter().collect());
    }
    let drop = match letters.as_slice() {
        [_, 'ا', _, _] => 1,
        [_, _, 'ا' | 'ي' | 'و', _] => 2,
        _ => return None,
    };
    Some(
        letters
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != drop)
            .map(|(_, c)| *c)
            .collect(),
    )
}

fn known(candidate: &str, lexicon: &RootLexicon) -> Option<Root> {
    let word = NormalizedWord::parse(candidate).ok()?;
    if let Some(root) = lexicon.root_of(&word) {
        return Some(root.clone());
    }
    Root::from_word(&word).ok().filter(|r| lexicon.contains_root(r))
}

/// Every stem reachable by optional affix stripping, least-stripped first.
fn candidates(word: &str) -> Vec<String> {
    let mut prefixed = vec![word];
    for conj in prefix_strips(word, CONJUNCTIONS) {
        prefixed.push(conj);
    }
    for s in prefixed.clone() {
        prefixed.extend(prefix_strips(s, PREPOSITIONS));
    }
    let mut out: Vec<String> = Vec::new();
    for s in prefixed {
        out.push(s.to_owned());
        for once in suffix_strips(s) {
            out.push(once.to_owned());
            out.extend(suffix_strips(once).into_iter().map(str::to_owned));
        }
    }
    let reduced: Vec<String> = out.iter().filter_map(|s| reduce_four(s)).collect();
    out.extend(reduced);
    out.sort_by(|a, b| chars(b).cmp(&chars(a)).then_with(|| a.cmp(b)));
    out.dedup();
    out
}

/// Greedy stripping used when no candidate is known to the lexicon.
fn greedy_residue(word: &str) -> String {
    let mut stem = word;
    if let Some(rest) = prefix_strips(stem, CONJUNCTIONS).first() {
        stem = rest;
    }
    if let Some(rest) = prefix_strips(stem, PREPOSITIONS).first() {
        stem = rest;
    }
    for _ in 0..2 {
        if let Some(rest) = suffix_strips(stem).first() {
            stem = rest;
        }
    }
    if chars(stem) > 4 {
        if let Some(rest) = prefix_strips(stem, DERIVED_PREFIXES).first() {
            stem = rest;
        }
    }
    reduce_four(stem).unwrap_or_else(|| stem.to_owned())
}

/// Approximates the root of `word` by affix stripping.
pub fn light_stem(word: &NormalizedWord, lexicon: &RootLexicon) -> Result<Root, MorphologyError> {
    if !lexicon.is_empty() {
        if let Some(root) = candidates(word.as_str()).iter().find_map(|c| known(c, lexicon)) {
            return Ok(root);
        }
    }
    let unknown = || MorphologyError::UnknownRoot(word.to_string());
    let residue = NormalizedWord::parse(&greedy_residue(word.as_str())).map_err(|_| unknown())?;
    Root::from_word(&residue).map_err(|_| unknown())
}
