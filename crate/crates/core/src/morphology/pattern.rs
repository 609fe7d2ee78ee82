//! Derivation templates.
//!
//! A template is literal normalized text interleaved with root-letter slots
//! `C1`..`C4`, e.g. `يC1C2C3ون`. Slots must appear exactly once each and in
//! order, so a template's arity is the number of slots it carries.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use super::{is_base_letter, normalize_str, MorphologyError, NormalizedWord, Root};

/// The pattern inventory shipped with the crate.
pub const BUILTIN_PATTERNS: &str = include_str!("../../data/patterns-v1.tsv");

/// Letters used to probe a pattern set for injectivity; none of them occur in
/// the literals of the built-in templates.
const PROBE_LETTERS: [char; 4] = ['ث', 'ج', 'ح', 'خ'];

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Segment {
    Literal(String),
    Slot(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DerivationPattern {
    id: String,
    segments: Vec<Segment>,
    arity: usize,
}

impl DerivationPattern {
    pub fn parse(id: &str, template: &str) -> Result<Self, MorphologyError> {
        Self::parse_at(id, template, 0)
    }

    fn parse_at(id: &str, template: &str, line: usize) -> Result<Self, MorphologyError> {
        let err = |msg: String| MorphologyError::PatternSyntax { line, msg };
        if id.is_empty() || id.chars().any(char::is_whitespace) {
            return Err(err(format!("invalid pattern id {id:?}")));
        }
        let mut segments = Vec::new();
        let mut literal = String::new();
        let mut chars = template.chars().peekable();
        while let Some(c) = chars.next() {
            if c == 'C' {
                let slot = chars
                    .next()
                    .and_then(|d| d.to_digit(10))
                    .filter(|d| (1..=4).contains(d))
                    .ok_or_else(|| err(format!("bad slot marker in {template:?}")))?;
                if !literal.is_empty() {
                    segments.push(Segment::Literal(std::mem::take(&mut literal)));
                }
                segments.push(Segment::Slot(slot as usize));
            } else if is_base_letter(c) {
                literal.push(c);
            } else {
                return Err(err(format!("unexpected character {c:?} in {template:?}")));
            }
        }
        if !literal.is_empty() {
            segments.push(Segment::Literal(literal));
        }

        let slots: Vec<usize> = segments
            .iter()
            .filter_map(|s| match s {
                Segment::Slot(n) => Some(*n),
                Segment::Literal(_) => None,
            })
            .collect();
        if !(3..=4).contains(&slots.len()) || slots.iter().enumerate().any(|(i, &n)| n != i + 1) {
            return Err(err(format!(
                "template {template:?} must contain slots C1..C3 or C1..C4 in order"
            )));
        }
        for seg in &segments {
            if let Segment::Literal(text) = seg {
                let normalized = normalize_str(text).map_err(|e| err(e.to_string()))?;
                if normalized.as_str() != text {
                    return Err(err(format!("literal {text:?} is not normalized")));
                }
            }
        }
        Ok(Self {
            id: id.to_owned(),
            arity: slots.len(),
            segments,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn template(&self) -> String {
        self.segments
            .iter()
            .map(|s| match s {
                Segment::Literal(t) => t.clone(),
                Segment::Slot(n) => format!("C{n}"),
            })
            .collect()
    }

    /// Wraps the template in extra literal text, producing a new pattern with
    /// a derived id. Used to move a colliding surface form out of the way.
    pub fn with_affixes(&self, prefix: &str, suffix: &str) -> Self {
        let mut segments = Vec::with_capacity(self.segments.len() + 2);
        if !prefix.is_empty() {
            segments.push(Segment::Literal(prefix.to_owned()));
        }
        segments.extend(self.segments.iter().cloned());
        if !suffix.is_empty() {
            segments.push(Segment::Literal(suffix.to_owned()));
        }
        Self {
            id: format!("{}+{prefix}_{suffix}", self.id),
            segments,
            arity: self.arity,
        }
    }

    fn apply(&self, letters: &[char]) -> String {
        let mut out = String::new();
        for seg in &self.segments {
            match seg {
                Segment::Literal(t) => out.push_str(t),
                Segment::Slot(n) => out.push(letters[n - 1]),
            }
        }
        out
    }
}

impl fmt::Display for DerivationPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\t{}", self.id, self.template())
    }
}

/// Applies `pattern` to `root`.
pub fn derive(root: &Root, pattern: &DerivationPattern) -> Result<NormalizedWord, MorphologyError> {
    let letters: Vec<char> = root.letters().collect();
    if letters.len() != pattern.arity {
        return Err(MorphologyError::ArityMismatch {
            pattern: pattern.id.clone(),
            pattern_arity: pattern.arity,
            root: root.to_string(),
            root_arity: letters.len(),
        });
    }
    Ok(NormalizedWord::from_normalized_unchecked(pattern.apply(&letters)))
}

/// An ordered, versioned set of derivation patterns with unique ids and
/// pairwise-distinct outputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternSet {
    version: String,
    patterns: Vec<DerivationPattern>,
}

impl PatternSet {
    pub fn builtin() -> Self {
        Self::parse(BUILTIN_PATTERNS).expect("built-in pattern file is valid")
    }

    /// Parses the `id TAB template` format. `# version: X` sets the version;
    /// other `#` lines and blank lines are ignored.
    pub fn parse(text: &str) -> Result<Self, MorphologyError> {
        let mut version = None;
        let mut patterns = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                if let Some(v) = comment.trim().strip_prefix("version:") {
                    version = Some(v.trim().to_owned());
                }
                continue;
            }
            let (id, template) = line.split_once('\t').ok_or(MorphologyError::PatternSyntax {
                line: line_no,
                msg: "expected `id<TAB>template`".into(),
            })?;
            patterns.push(DerivationPattern::parse_at(id, template, line_no)?);
        }
        let version = version.ok_or(MorphologyError::PatternSyntax {
            line: 0,
            msg: "missing `# version:` line".into(),
        })?;
        Self::new(version, patterns)
    }

    pub fn new(version: String, patterns: Vec<DerivationPattern>) -> Result<Self, MorphologyError> {
        let mut ids = HashMap::new();
        for (i, p) in patterns.iter().enumerate() {
            if let Some(prev) = ids.insert(p.id.as_str(), i) {
                return Err(MorphologyError::PatternCollision {
                    first: patterns[prev].id.clone(),
                    second: p.id.clone(),
                    word: "(duplicate id)".into(),
                });
            }
        }
        let set = Self { version, patterns };
        set.check_injective()?;
        Ok(set)
    }

    /// Distinct templates of the same arity must yield distinct words for a
    /// root whose letters appear in no literal.
    fn check_injective(&self) -> Result<(), MorphologyError> {
        for arity in [3, 4] {
            let mut seen: BTreeMap<String, &str> = BTreeMap::new();
            for p in self.patterns.iter().filter(|p| p.arity == arity) {
                let word = p.apply(&PROBE_LETTERS[..arity]);
                if let Some(first) = seen.insert(word.clone(), &p.id) {
                    return Err(MorphologyError::PatternCollision {
                        first: first.to_owned(),
                        second: p.id.clone(),
                        word,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn version(&self) -> &str {
        &self.version
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn get(&self, index: usize) -> Option<&DerivationPattern> {
        self.patterns.get(index)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, DerivationPattern> {
        self.patterns.iter()
    }

    /// Patterns usable with a root of the given arity.
    pub fn for_arity(&self, arity: usize) -> Vec<&DerivationPattern> {
        self.patterns.iter().filter(|p| p.arity == arity).collect()
    }

    /// Serializes back to the file format.
    pub fn to_file_string(&self) -> String {
        let mut out = format!("# version: {}\n", self.version);
        for p in &self.patterns {
            out.push_str(&p.to_string());
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use super::*;

    #[test]
    fn builtin_has_one_hundred_triliteral_patterns() {
        let set = PatternSet::builtin();
        assert_eq!(set.len(), 100);
        assert_eq!(set.version(), "1");
        assert!(set.iter().all(|p| p.arity() == 3));
    }

    #[test]
    fn derives_known_words() {
        let p = DerivationPattern::parse("x", "يC1C2C3ون").unwrap();
        let play = Root::new("لعب").unwrap();
        let eat = Root::new("اكل").unwrap();
        assert_eq!(derive(&play, &p).unwrap().as_str(), "يلعبون");
        assert_eq!(derive(&eat, &p).unwrap().as_str(), "ياكلون");
    }

    #[test]
    fn full_set_is_injective_on_play_root() {
        // brute force: every pair of the 100 derivations differs
        let set = PatternSet::builtin();
        let root = Root::new("لعب").unwrap();
        let words: Vec<_> = set.iter().map(|p| derive(&root, p).unwrap()).collect();
        for i in 0..words.len() {
            for j in i + 1..words.len() {
                assert_ne!(
                    words[i],
                    words[j],
                    "{} vs {}",
                    set.get(i).unwrap().id(),
                    set.get(j).unwrap().id()
                );
            }
        }
        assert_eq!(words.iter().collect::<HashSet<_>>().len(), 100);
    }

    #[test]
    fn arity_mismatch() {
        let p = DerivationPattern::parse("x", "C1C2C3").unwrap();
        let quad = Root::new("دحرج").unwrap();
        assert!(matches!(derive(&quad, &p), Err(MorphologyError::ArityMismatch { .. })));
        let p4 = DerivationPattern::parse("y", "يC1C2C3C4").unwrap();
        assert_eq!(derive(&quad, &p4).unwrap().as_str(), "يدحرج");
    }

    #[test]
    fn rejects_malformed_templates() {
        for bad in [
            "C1C3C2",
            "C1C2",
            "يC1C2C3C5",
            "C1xC2C3",
            "C1C2C3C",
            "C1C2C3ة",
            "C1C2C3C1",
        ] {
            assert!(DerivationPattern::parse("x", bad).is_err(), "{bad}");
        }
        assert!(DerivationPattern::parse("a b", "C1C2C3").is_err());
    }

    #[test]
    fn parse_requires_version_and_unique_ids() {
        assert!(PatternSet::parse("p1\tC1C2C3\n").is_err());
        assert!(PatternSet::parse("# version: 2\np1\tC1C2C3\np1\tيC1C2C3\n").is_err());
        let collide = "# version: 2\np1\tC1C2C3\np2\tC1C2C3\n";
        assert!(matches!(
            PatternSet::parse(collide),
            Err(MorphologyError::PatternCollision { .. })
        ));
    }

    #[test]
    fn file_round_trip() {
        let set = PatternSet::builtin();
        assert_eq!(PatternSet::parse(&set.to_file_string()).unwrap(), set);
    }

    #[test]
    fn affixed_pattern_keeps_arity() {
        let p = DerivationPattern::parse("p1", "C1C2C3")
            .unwrap()
            .with_affixes("و", "ها");
        assert_eq!(p.template(), "وC1C2C3ها");
        assert_eq!(p.arity(), 3);
    }
}
