use std::collections::HashSet;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{CorpusError, CorpusManifest, CorpusQuery, CorpusSpec, DocId, Document, PeerId, BUILTIN_ROOTS};
use crate::morphology::{derive, DerivationPattern, NormalizedWord, PatternSet, Root};

const ALT_PREFIXES: &[&str] = &["", "و", "ف", "ب", "ل", "ك", "وال", "فال", "بال", "كال"];
const ALT_SUFFIXES: &[&str] = &["", "ها", "هم", "كم", "هن", "نا"];

/// Clitic wrappings tried, in order, when a derivation collides with a word
/// that already exists in the corpus.
fn alternates(pattern: &DerivationPattern) -> impl Iterator<Item = DerivationPattern> + '_ {
    ALT_SUFFIXES.iter().flat_map(move |suffix| {
        ALT_PREFIXES
            .iter()
            .filter(move |prefix| !(prefix.is_empty() && suffix.is_empty()))
            .map(move |prefix| pattern.with_affixes(prefix, suffix))
    })
}

fn id_width(n: usize) -> usize {
    n.saturating_sub(1).to_string().len()
}

/// Builds the corpus for `spec` from the built-in roots and `patterns`.
///
/// All random choices come from a ChaCha8 stream seeded with `spec.seed`, in a
/// fixed order: root selection, then per root (in canonical order) its
/// pattern subset followed by its query word.
pub fn generate_corpus(spec: &CorpusSpec, patterns: &PatternSet) -> Result<CorpusManifest, CorpusError> {
    spec.validate()?;
    if spec.root_count > BUILTIN_ROOTS.len() {
        return Err(CorpusError::InsufficientRoots {
            needed: spec.root_count,
            available: BUILTIN_ROOTS.len(),
        });
    }
    let triliteral = patterns.for_arity(3);
    if spec.words_per_root > triliteral.len() {
        return Err(CorpusError::InvalidSpec(format!(
            "words_per_root ({}) exceeds the {} available triliteral patterns",
            spec.words_per_root,
            triliteral.len()
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut roots = sample(&mut rng, BUILTIN_ROOTS.len(), spec.root_count)
        .into_iter()
        .map(|i| Root::new(BUILTIN_ROOTS[i]))
        .collect::<Result<Vec<_>, _>>()?;
    roots.sort();

    let doc_width = id_width(spec.document_count()).max(5);
    let query_width = id_width(spec.root_count).max(3);
    let mut seen: HashSet<NormalizedWord> = HashSet::with_capacity(spec.document_count());
    let mut documents = Vec::with_capacity(spec.document_count());
    let mut queries = Vec::with_capacity(spec.root_count);

    for (root_idx, root) in roots.iter().enumerate() {
        let peer_id = PeerId((root_idx / spec.roots_per_peer) as u32 + 1);
        let mut chosen = sample(&mut rng, triliteral.len(), spec.words_per_root).into_vec();
        chosen.sort_unstable();

        let first_doc = documents.len();
        for idx in chosen {
            let pattern = triliteral[idx];
            let mut word = derive(root, pattern)?;
            if seen.contains(&word) {
                word = alternates(pattern)
                    .map(|alt| derive(root, &alt))
                    .find(|w| w.as_ref().map_or(true, |w| !seen.contains(w)))
                    .transpose()?
                    .ok_or_else(|| CorpusError::PatternCollision {
                        root: root.to_string(),
                        pattern: pattern.id().to_owned(),
                    })?;
            }
            seen.insert(word.clone());
            let doc_id =
                DocId::new(format!("doc-{:0doc_width$}", documents.len())).expect("generated doc ids are well-formed");
            documents.push(Document {
                doc_id,
                word,
                root: root.clone(),
                peer_id,
            });
        }

        let pick = rng.random_range(0..spec.words_per_root);
        queries.push(CorpusQuery {
            query_id: format!("q{:0query_width$}", root_idx + 1),
            word: documents[first_doc + pick].word.clone(),
            root: root.clone(),
        });
    }

    CorpusManifest::new(*spec, patterns.version().to_owned(), documents, queries)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn micro() -> CorpusSpec {
        CorpusSpec {
            root_count: 2,
            words_per_root: 3,
            peer_count: 2,
            superpeer_count: 1,
            roots_per_peer: 1,
            seed: 7,
        }
    }

    #[test]
    fn micro_corpus_cardinalities() {
        let m = generate_corpus(&micro(), &PatternSet::builtin()).unwrap();
        assert_eq!(m.documents().len(), 6);
        for root in m.roots() {
            assert_eq!(m.documents().iter().filter(|d| &d.root == root).count(), 3);
        }
        for peer in m.spec().peers() {
            assert_eq!(m.documents_of_peer(peer).count(), 3);
        }
        assert_eq!(m.queries().len(), 2);
    }

    #[test]
    fn same_seed_same_manifest() {
        let patterns = PatternSet::builtin();
        let a = generate_corpus(&micro(), &patterns).unwrap();
        let b = generate_corpus(&micro(), &patterns).unwrap();
        assert_eq!(a, b);
        let c = generate_corpus(&CorpusSpec { seed: 8, ..micro() }, &patterns).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn too_many_roots() {
        let spec = CorpusSpec {
            root_count: 200,
            roots_per_peer: 50,
            ..CorpusSpec::default()
        };
        assert!(matches!(
            generate_corpus(&spec, &PatternSet::builtin()),
            Err(CorpusError::InsufficientRoots { needed: 200, .. })
        ));
    }

    #[test]
    fn too_many_words_per_root() {
        let spec = CorpusSpec {
            words_per_root: 101,
            ..CorpusSpec::default()
        };
        assert!(matches!(
            generate_corpus(&spec, &PatternSet::builtin()),
            Err(CorpusError::InvalidSpec(_))
        ));
    }

    #[test]
    fn collisions_are_moved_to_an_alternate() {
        // Two templates that coincide on roots whose first letter is alef.
        let patterns = PatternSet::new(
            "t".into(),
            vec![
                DerivationPattern::parse("a", "اC1C2C3").unwrap(),
                DerivationPattern::parse("b", "C1اC2C3").unwrap(),
                DerivationPattern::parse("c", "C1C2C3").unwrap(),
            ],
        )
        .unwrap();
        let spec = CorpusSpec {
            root_count: 100,
            words_per_root: 3,
            ..CorpusSpec::default()
        };
        let m = generate_corpus(&spec, &patterns).unwrap();
        let eat: Vec<_> = m
            .documents()
            .iter()
            .filter(|d| d.root.as_str() == "اكل")
            .map(|d| d.word.as_str().to_owned())
            .collect();
        assert_eq!(eat, vec!["ااكل", "وااكل", "اكل"]);
    }
}
