//! On-disk corpus layout.
//!
//! ```text
//! <dir>/manifest.tsv                 header + `doc_id TAB word TAB root TAB peer_id`
//! <dir>/queries.tsv                  header + `query_id TAB word TAB root`
//! <dir>/corpus/<peer_id>/<doc_id>.txt   body = the document's single word
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use super::{CorpusError, CorpusManifest, CorpusQuery, CorpusSpec, DocId, Document, PeerId};
use crate::morphology::{normalize_str, NormalizedWord, Root};

pub const MANIFEST_FILE: &str = "manifest.tsv";
pub const QUERIES_FILE: &str = "queries.tsv";
const CORPUS_DIR: &str = "corpus";
const MANIFEST_MAGIC: &str = "# arabic-ir manifest v1";
const QUERIES_MAGIC: &str = "# arabic-ir queries v1";

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CorpusError + '_ {
    move |source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    }
}

pub fn manifest_to_string(manifest: &CorpusManifest) -> String {
    let s = manifest.spec();
    let mut out = format!(
        "{MANIFEST_MAGIC} root_count={} words_per_root={} peer_count={} superpeer_count={} roots_per_peer={} seed={} patterns={}\n",
        s.root_count, s.words_per_root, s.peer_count, s.superpeer_count, s.roots_per_peer, s.seed,
        manifest.pattern_version()
    );
    for d in manifest.documents() {
        out.push_str(&format!("{}\t{}\t{}\t{}\n", d.doc_id, d.word, d.root, d.peer_id));
    }
    out
}

pub fn queries_to_string(manifest: &CorpusManifest) -> String {
    let mut out = format!("{QUERIES_MAGIC} seed={}\n", manifest.spec().seed);
    for q in manifest.queries() {
        out.push_str(&format!("{}\t{}\t{}\n", q.query_id, q.word, q.root));
    }
    out
}

/// Contents of a manifest file before cross-checking against the query file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestFile {
    pub spec: CorpusSpec,
    pub pattern_version: String,
    pub documents: Vec<Document>,
}

fn parse_err(file: &'static str, line: usize, msg: impl Into<String>) -> CorpusError {
    CorpusError::Parse {
        file,
        line,
        msg: msg.into(),
    }
}

fn parse_word(file: &'static str, line: usize, text: &str) -> Result<NormalizedWord, CorpusError> {
    NormalizedWord::parse(text).map_err(|e| parse_err(file, line, e.to_string()))
}

fn parse_root(file: &'static str, line: usize, text: &str) -> Result<Root, CorpusError> {
    Root::new(text).map_err(|e| parse_err(file, line, e.to_string()))
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .skip(1)
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn split_fields<'a, const N: usize>(
    file: &'static str,
    line_no: usize,
    line: &'a str,
) -> Result<[&'a str; N], CorpusError> {
    let fields: Vec<&str> = line.split('\t').collect();
    fields
        .try_into()
        .map_err(|f: Vec<&str>| parse_err(file, line_no, format!("expected {N} fields, found {}", f.len())))
}

pub fn parse_manifest(text: &str) -> Result<ManifestFile, CorpusError> {
    let header = text.lines().next().unwrap_or_default();
    let params = header
        .strip_prefix(MANIFEST_MAGIC)
        .ok_or_else(|| parse_err(MANIFEST_FILE, 1, format!("missing `{MANIFEST_MAGIC}` header")))?;

    let mut spec = CorpusSpec::default();
    let mut pattern_version = None;
    let mut seen = 0u8;
    for token in params.split_whitespace() {
        let (key, value) = token
            .split_once('=')
            .ok_or_else(|| parse_err(MANIFEST_FILE, 1, format!("bad header token {token:?}")))?;
        let num = || {
            value
                .parse::<u64>()
                .map_err(|_| parse_err(MANIFEST_FILE, 1, format!("bad number for {key}: {value:?}")))
        };
        let small = || {
            num().and_then(|n| {
                usize::try_from(n)
                    .ok()
                    .filter(|&n| n <= 1_000_000)
                    .ok_or_else(|| parse_err(MANIFEST_FILE, 1, format!("{key} out of range")))
            })
        };
        let bit = match key {
            "root_count" => {
                spec.root_count = small()?;
                1
            }
            "words_per_root" => {
                spec.words_per_root = small()?;
                2
            }
            "peer_count" => {
                spec.peer_count = small()?;
                4
            }
            "superpeer_count" => {
                spec.superpeer_count = small()?;
                8
            }
            "roots_per_peer" => {
                spec.roots_per_peer = small()?;
                16
            }
            "seed" => {
                spec.seed = num()?;
                32
            }
            "patterns" => {
                pattern_version = Some(value.to_owned());
                64
            }
            other => return Err(parse_err(MANIFEST_FILE, 1, format!("unknown header key {other:?}"))),
        };
        seen |= bit;
    }
    if seen != 127 {
        return Err(parse_err(MANIFEST_FILE, 1, "header is missing parameters"));
    }
    spec.validate()?;

    let mut documents = Vec::new();
    for (line_no, line) in data_lines(text) {
        let [doc_id, word, root, peer] = split_fields::<4>(MANIFEST_FILE, line_no, line)?;
        documents.push(Document {
            doc_id: DocId::new(doc_id).map_err(|e| parse_err(MANIFEST_FILE, line_no, e))?,
            word: parse_word(MANIFEST_FILE, line_no, word)?,
            root: parse_root(MANIFEST_FILE, line_no, root)?,
            peer_id: peer
                .parse::<PeerId>()
                .map_err(|e| parse_err(MANIFEST_FILE, line_no, e))?,
        });
    }
    Ok(ManifestFile {
        spec,
        pattern_version: pattern_version.unwrap_or_default(),
        documents,
    })
}

pub fn parse_queries(text: &str) -> Result<Vec<CorpusQuery>, CorpusError> {
    if !text.starts_with(QUERIES_MAGIC) {
        return Err(parse_err(QUERIES_FILE, 1, format!("missing `{QUERIES_MAGIC}` header")));
    }
    data_lines(text)
        .map(|(line_no, line)| {
            let [query_id, word, root] = split_fields::<3>(QUERIES_FILE, line_no, line)?;
            if query_id.is_empty() || query_id.chars().any(char::is_whitespace) {
                return Err(parse_err(QUERIES_FILE, line_no, "bad query id"));
            }
            Ok(CorpusQuery {
                query_id: query_id.to_owned(),
                word: parse_word(QUERIES_FILE, line_no, word)?,
                root: parse_root(QUERIES_FILE, line_no, root)?,
            })
        })
        .collect()
}

/// Relative path of a document file inside a corpus directory.
pub fn document_path(doc: &Document) -> PathBuf {
    Path::new(CORPUS_DIR)
        .join(doc.peer_id.to_string())
        .join(format!("{}.txt", doc.doc_id))
}

fn file_entries(manifest: &CorpusManifest) -> Vec<(String, Vec<u8>)> {
    let mut entries = vec![
        (MANIFEST_FILE.to_owned(), manifest_to_string(manifest).into_bytes()),
        (QUERIES_FILE.to_owned(), queries_to_string(manifest).into_bytes()),
    ];
    for doc in manifest.documents() {
        entries.push((rel_string(&document_path(doc)), doc.word.as_str().as_bytes().to_vec()));
    }
    entries
}

fn rel_string(path: &Path) -> String {
    path.components()
        .map(|c| c.as_os_str().to_string_lossy().into_owned())
        .collect::<Vec<_>>()
        .join("/")
}

fn digest_entries(mut entries: Vec<(String, Vec<u8>)>) -> String {
    entries.sort_by(|a, b| a.0.cmp(&b.0));
    let mut hasher = Sha256::new();
    for (path, bytes) in &entries {
        hasher.update(path.as_bytes());
        hasher.update([0]);
        hasher.update((bytes.len() as u64).to_le_bytes());
        hasher.update(bytes);
    }
    hex::encode(hasher.finalize())
}

/// SHA-256 over every file [`write_corpus`] would produce.
pub fn corpus_digest(manifest: &CorpusManifest) -> String {
    digest_entries(file_entries(manifest))
}

/// Same digest as [`corpus_digest`], computed from the files on disk.
pub fn digest_directory(dir: &Path) -> Result<String, CorpusError> {
    let mut entries = Vec::new();
    for name in [MANIFEST_FILE, QUERIES_FILE] {
        let path = dir.join(name);
        entries.push((name.to_owned(), fs::read(&path).map_err(io_err(&path))?));
    }
    let mut stack = vec![dir.join(CORPUS_DIR)];
    while let Some(current) = stack.pop() {
        for entry in fs::read_dir(&current).map_err(io_err(&current))? {
            let entry = entry.map_err(io_err(&current))?;
            let path = entry.path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let rel = path.strip_prefix(dir).expect("walk stays under dir");
                entries.push((rel_string(rel), fs::read(&path).map_err(io_err(&path))?));
            }
        }
    }
    Ok(digest_entries(entries))
}

/// Writes the corpus files into `dir` and returns their digest.
pub fn write_corpus(manifest: &CorpusManifest, dir: &Path) -> Result<String, CorpusError> {
    let corpus_root = dir.join(CORPUS_DIR);
    if corpus_root.exists() {
        fs::remove_dir_all(&corpus_root).map_err(io_err(&corpus_root))?;
    }
    for peer in manifest.spec().peers() {
        let peer_dir = corpus_root.join(peer.to_string());
        fs::create_dir_all(&peer_dir).map_err(io_err(&peer_dir))?;
    }
    let entries = file_entries(manifest);
    for (rel, bytes) in &entries {
        let path = dir.join(rel);
        fs::write(&path, bytes).map_err(io_err(&path))?;
    }
    Ok(digest_entries(entries))
}

/// Loads and cross-validates `manifest.tsv` and `queries.tsv` from `dir`.
pub fn load_corpus(dir: &Path) -> Result<CorpusManifest, CorpusError> {
    let read = |name: &str| {
        let path = dir.join(name);
        fs::read_to_string(&path).map_err(io_err(&path))
    };
    let file = parse_manifest(&read(MANIFEST_FILE)?)?;
    let queries = parse_queries(&read(QUERIES_FILE)?)?;
    CorpusManifest::new(file.spec, file.pattern_version, file.documents, queries)
}

/// Reads every document body from disk and normalizes it.
pub fn read_documents(dir: &Path, manifest: &CorpusManifest) -> Result<Vec<(DocId, NormalizedWord)>, CorpusError> {
    manifest
        .documents()
        .iter()
        .map(|doc| {
            let path = dir.join(document_path(doc));
            let body = fs::read_to_string(&path).map_err(io_err(&path))?;
            let word = normalize_str(body.trim())?;
            Ok((doc.doc_id.clone(), word))
        })
        .collect()
}

/// Checks that each document body, normalized, equals its manifest word.
pub fn verify_documents(dir: &Path, manifest: &CorpusManifest) -> Result<(), CorpusError> {
    let bodies = read_documents(dir, manifest)?;
    for (doc, (_, word)) in manifest.documents().iter().zip(&bodies) {
        if &doc.word != word {
            return Err(CorpusError::Inconsistent(format!(
                "{} body {word} does not match manifest word {}",
                doc.doc_id, doc.word
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::generate_corpus;
    use crate::morphology::PatternSet;

    fn micro() -> CorpusManifest {
        let spec = CorpusSpec {
            root_count: 4,
            words_per_root: 5,
            peer_count: 2,
            superpeer_count: 1,
            roots_per_peer: 2,
            seed: 3,
        };
        generate_corpus(&spec, &PatternSet::builtin()).unwrap()
    }

    #[test]
    fn manifest_text_round_trips() {
        let m = micro();
        let file = parse_manifest(&manifest_to_string(&m)).unwrap();
        let queries = parse_queries(&queries_to_string(&m)).unwrap();
        let back = CorpusManifest::new(file.spec, file.pattern_version, file.documents, queries).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn write_then_load() {
        let m = micro();
        let dir = tempfile::tempdir().unwrap();
        let digest = write_corpus(&m, dir.path()).unwrap();
        assert_eq!(digest, corpus_digest(&m));
        assert_eq!(digest_directory(dir.path()).unwrap(), digest);
        assert_eq!(load_corpus(dir.path()).unwrap(), m);
        verify_documents(dir.path(), &m).unwrap();
        let first = &m.documents()[0];
        assert!(dir
            .path()
            .join(format!("corpus/{}/{}.txt", first.peer_id, first.doc_id))
            .is_file());
    }

    #[test]
    fn tampered_body_is_detected() {
        let m = micro();
        let dir = tempfile::tempdir().unwrap();
        write_corpus(&m, dir.path()).unwrap();
        let doc = &m.documents()[0];
        fs::write(dir.path().join(document_path(doc)), "زززز").unwrap();
        assert!(verify_documents(dir.path(), &m).is_err());
        assert_ne!(digest_directory(dir.path()).unwrap(), corpus_digest(&m));
    }

    #[test]
    fn manifest_parse_errors() {
        assert!(parse_manifest("").is_err());
        assert!(parse_manifest("doc-1\tكتب\tكتب\tpeer-1\n").is_err());
        let header = "# arabic-ir manifest v1 root_count=1 words_per_root=1 peer_count=1 superpeer_count=1 roots_per_peer=1 seed=1 patterns=1\n";
        assert!(parse_manifest(&format!("{header}doc-1\tكتب\tكتب\n")).is_err());
        assert!(parse_manifest(&format!("{header}doc-1\tكَتب\tكتب\tpeer-1\n")).is_err());
        assert!(parse_manifest(&format!("{header}doc-1\tكتب\tكتب\tpeer-0\n")).is_err());
        let ok = parse_manifest(&format!("{header}doc-1\tكتب\tكتب\tpeer-1\n")).unwrap();
        assert_eq!(ok.documents.len(), 1);
        assert!(parse_manifest(&header.replace(" seed=1", "")).is_err());
    }

    #[test]
    fn queries_parse_errors() {
        assert!(parse_queries("q1\tكتب\tكتب\n").is_err());
        assert!(parse_queries("# arabic-ir queries v1\nq1\tكتب\n").is_err());
        assert_eq!(
            parse_queries("# arabic-ir queries v1\nq1\tكتب\tكتب\n").unwrap().len(),
            1
        );
    }
}
