#![allow(dead_code)]

use std::sync::OnceLock;

use arabic_ir::corpus::{generate_corpus, CorpusManifest, CorpusSpec};
use arabic_ir::morphology::{normalize_str, NormalizedWord, PatternSet};

/// The default 100-root, 10,000-document corpus, generated once per test binary.
pub fn default_manifest() -> &'static CorpusManifest {
    static MANIFEST: OnceLock<CorpusManifest> = OnceLock::new();
    MANIFEST.get_or_init(|| generate_corpus(&CorpusSpec::default(), &PatternSet::builtin()).unwrap())
}

pub fn small_spec(seed: u64) -> CorpusSpec {
    CorpusSpec {
        root_count: 8,
        words_per_root: 12,
        peer_count: 4,
        superpeer_count: 2,
        roots_per_peer: 2,
        seed,
    }
}

pub fn small_manifest(seed: u64) -> CorpusManifest {
    generate_corpus(&small_spec(seed), &PatternSet::builtin()).unwrap()
}

pub fn w(s: &str) -> NormalizedWord {
    normalize_str(s).unwrap()
}
