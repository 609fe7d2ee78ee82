//! Replays the checked-in fuzz seeds through the same parsers and checks the
//! fuzz targets exercise, so regressions show up without a nightly toolchain.

use std::fs;
use std::path::PathBuf;

use arabic_ir::corpus::{parse_manifest, parse_queries};
use arabic_ir::eval::{parse_results_file, parse_summary_file};
use arabic_ir::index::{decode_snapshot, encode_snapshot};
use arabic_ir::morphology::{light_stem, normalize_str, PatternSet, RootLexicon};
use arabic_ir::search::Query;

fn seeds(target: &str) -> Vec<(String, Vec<u8>)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut out: Vec<_> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let path = e.unwrap().path();
            (
                path.file_name().unwrap().to_string_lossy().into_owned(),
                fs::read(&path).unwrap(),
            )
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

fn text(bytes: &[u8]) -> &str {
    std::str::from_utf8(bytes).unwrap()
}

#[test]
fn pattern_file_seeds() {
    let mut parsed = 0;
    for (name, bytes) in seeds("pattern_file") {
        if let Ok(set) = PatternSet::parse(text(&bytes)) {
            let again = PatternSet::parse(&set.to_file_string()).unwrap();
            assert_eq!(again.len(), set.len(), "{name}");
            parsed += 1;
        }
    }
    assert!(parsed >= 2);
}

#[test]
fn manifest_and_query_seeds() {
    let results: Vec<_> = seeds("manifest")
        .iter()
        .map(|(_, b)| parse_manifest(text(b)).is_ok())
        .collect();
    assert!(results.contains(&true));
    for (_, b) in seeds("queries") {
        assert!(parse_queries(text(&b)).is_ok());
    }
}

#[test]
fn results_seeds() {
    for (name, b) in seeds("results_tsv") {
        let t = text(&b);
        if name == "summary.tsv" {
            assert_eq!(parse_summary_file(t).unwrap().rows.len(), 4);
            assert!(parse_results_file(t).is_err());
        } else {
            assert!(parse_results_file(t).is_ok(), "{name}");
            assert!(parse_summary_file(t).is_err());
        }
    }
}

#[test]
fn snapshot_seeds() {
    for (name, b) in seeds("index_snapshot") {
        match decode_snapshot(&b) {
            Ok(index) => assert_eq!(encode_snapshot(&index), b, "{name}"),
            Err(_) => assert!(name.starts_with("truncated")),
        }
    }
}

#[test]
fn query_word_seeds() {
    let mut accepted = 0;
    for (_, b) in seeds("query_word") {
        let Ok(t) = std::str::from_utf8(&b) else { continue };
        if let Ok(q) = Query::parse("seed", t) {
            assert_eq!(normalize_str(q.normalized.as_str()).unwrap(), q.normalized);
            if let Ok(root) = light_stem(&q.normalized, &RootLexicon::default()) {
                assert!((3..=4).contains(&root.arity()));
            }
            accepted += 1;
        }
    }
    assert!(accepted >= 6);
}
