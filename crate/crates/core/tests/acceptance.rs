//! End-to-end acceptance criteria on the default corpus. Runs without the
//! libtest harness so every criterion prints a PASS/FAIL line.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use arabic_ir::corpus::{
    digest_directory, generate_corpus, manifest_to_string, relevant_set, write_corpus, CorpusManifest, CorpusSpec,
};
use arabic_ir::eval::{
    format4, format4_big, format_percent, precision, recall, render_result_files, run_evaluation, EvalOptions,
    EvalReport, Fraction,
};
use arabic_ir::index::{IndexMode, InvertedIndex};
use arabic_ir::morphology::{derive, extract_root, same_root, PatternSet, Root};
use arabic_ir::p2p::{build_overlay, p2p_search, MessageKind, NodeId};
use arabic_ir::search::{Engine, Query};
use num::rational::BigRational;

type Check = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Check + 'a>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn default_corpus() -> CorpusManifest {
    generate_corpus(&CorpusSpec::default(), &PatternSet::builtin()).expect("default corpus")
}

fn evaluate(m: &CorpusManifest, engines: &[Engine]) -> EvalReport {
    run_evaluation(m, engines, &EvalOptions::default()).expect("evaluation")
}

fn baseline_reproduction() -> Check {
    let start = Instant::now();
    let m = default_corpus();
    let report = evaluate(&m, &[Engine::Baseline]);
    let elapsed = start.elapsed();
    let one = Fraction::from_integer(1);
    for r in &report.records[&Engine::Baseline] {
        ensure(r.s_found.len() == 1, || {
            format!("{} found {}", r.query_id, r.s_found.len())
        })?;
        ensure(format4(&r.precision) == "1.0000", || {
            format!("{} precision {}", r.query_id, r.precision)
        })?;
        ensure(r.precision == one, || r.query_id.clone())?;
    }
    let p = report.mean_precision(Engine::Baseline).unwrap();
    let rc = report.mean_recall(Engine::Baseline).unwrap();
    ensure(p == BigRational::from_integer(1.into()), || {
        format!("mean precision {p}")
    })?;
    ensure(rc == BigRational::new(1.into(), 100.into()), || {
        format!("mean recall {rc}")
    })?;
    ensure(elapsed < Duration::from_secs(10), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "mean P {} R {} in {:.2?}",
        format_percent(&p),
        format_percent(&rc),
        elapsed
    ))
}

fn root_aware_reproduction(m: &CorpusManifest, report: &EvalReport) -> Check {
    let one = Fraction::from_integer(1);
    for e in [Engine::Expanded, Engine::P2pAdvanced] {
        let records = &report.records[&e];
        ensure(records.len() == 100, || format!("{e}: {} records", records.len()))?;
        for r in records {
            ensure(r.precision == one && r.recall == one, || {
                format!("{e} {}: P {} R {}", r.query_id, r.precision, r.recall)
            })?;
        }
    }
    Ok(format!(
        "expanded and p2p-advanced P = R = 1 on {} queries",
        m.queries().len()
    ))
}

fn distribution_transparency(report: &EvalReport) -> Check {
    for (a, b) in [
        (Engine::Baseline, Engine::P2pSimple),
        (Engine::Expanded, Engine::P2pAdvanced),
    ] {
        for (x, y) in report.records[&a].iter().zip(&report.records[&b]) {
            ensure(x.query_id == y.query_id && x.s_found == y.s_found, || {
                format!("{a} vs {b} differ on {}", x.query_id)
            })?;
        }
    }
    Ok("baseline = p2p-simple, expanded = p2p-advanced on 100/100 queries".into())
}

fn morphology_round_trip(m: &CorpusManifest) -> Check {
    let lex = m.lexicon();
    let patterns = PatternSet::builtin();
    let mut ok = 0;
    for d in m.documents() {
        if extract_root(&d.word, lex).map_err(|e| e.to_string())? == d.root {
            ok += 1;
        }
    }
    ensure(ok == 10_000, || format!("{ok}/10000 round trips"))?;
    // unaltered derivations round trip through derive() directly
    let mut direct = 0;
    for root in m.roots() {
        for p in patterns.iter() {
            let word = derive(root, p).map_err(|e| e.to_string())?;
            if lex.root_of(&word) == Some(root) {
                ensure(&extract_root(&word, lex).unwrap() == root, || format!("{word}"))?;
                direct += 1;
            }
        }
    }
    let mut classes: BTreeMap<Root, BTreeSet<&str>> = BTreeMap::new();
    for d in m.documents() {
        classes
            .entry(extract_root(&d.word, lex).unwrap())
            .or_default()
            .insert(d.word.as_str());
    }
    ensure(classes.len() == 100, || format!("{} classes", classes.len()))?;
    for root in m.roots() {
        let expected: BTreeSet<&str> = lex.group(root).unwrap().iter().map(|w| w.as_str()).collect();
        ensure(classes.get(root) == Some(&expected), || {
            format!("class of {root} differs")
        })?;
    }
    let reps: Vec<_> = m.roots().iter().map(|r| lex.group(r).unwrap()).collect();
    for (i, a) in reps.iter().enumerate() {
        let first = a.iter().next().unwrap();
        for w in a.iter() {
            ensure(same_root(first, w, lex).unwrap(), || format!("{first} / {w}"))?;
        }
        for b in &reps[i + 1..] {
            let other = b.iter().next().unwrap();
            ensure(!same_root(first, other, lex).unwrap(), || format!("{first} ~ {other}"))?;
        }
    }
    Ok(format!("10000/10000 words, {direct} literal derivations, 100 classes"))
}

fn index_oracle(m: &CorpusManifest) -> Check {
    let adv = InvertedIndex::build(m.documents(), IndexMode::Advanced, m.lexicon()).map_err(|e| e.to_string())?;
    let mut matches = 0;
    for d in m.documents() {
        if adv.lookup(&d.word) == &relevant_set(&d.word, m).map_err(|e| e.to_string())? {
            matches += 1;
        }
    }
    ensure(matches == 10_000, || format!("{matches}/10000"))?;
    Ok("10000/10000 advanced lookups equal the manifest oracle".into())
}

fn routing_precision(m: &CorpusManifest) -> Check {
    let overlay = build_overlay(m, IndexMode::Advanced).map_err(|e| e.to_string())?;
    let mut runs = 0;
    for cq in m.queries() {
        let owners = m.owners_of(&cq.root);
        ensure(owners.len() == 1, || format!("{} has {} owners", cq.root, owners.len()))?;
        let q = Query::from_normalized(cq.query_id.clone(), cq.word.clone());
        for origin in m.spec().peers() {
            let out = p2p_search(&q, &overlay, origin, IndexMode::Advanced).map_err(|e| e.to_string())?;
            let fan_out: BTreeSet<_> = out
                .messages
                .iter()
                .filter(|msg| msg.kind == MessageKind::QueryForward)
                .filter_map(|msg| match msg.to {
                    NodeId::Peer(p) => Some(p),
                    NodeId::Super(_) => None,
                })
                .collect();
            ensure(fan_out == owners, || {
                format!("{} from {origin}: {fan_out:?}", cq.query_id)
            })?;
            runs += 1;
        }
    }
    Ok(format!("{runs} query/origin runs forward only to the owning peer"))
}

fn determinism() -> Check {
    let run = || -> Result<(String, String, BTreeMap<String, String>), String> {
        let m = default_corpus();
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        let written = write_corpus(&m, dir.path()).map_err(|e| e.to_string())?;
        let on_disk = digest_directory(dir.path()).map_err(|e| e.to_string())?;
        ensure(written == on_disk, || "digest of written files differs".into())?;
        let options = EvalOptions {
            origin: None,
            corpus_digest: on_disk.clone(),
        };
        let report = run_evaluation(&m, &Engine::ALL, &options).map_err(|e| e.to_string())?;
        Ok((on_disk, manifest_to_string(&m), render_result_files(&report)))
    };
    let (d1, m1, r1) = run()?;
    let (d2, m2, r2) = run()?;
    ensure(d1 == d2, || format!("corpus digests {d1} vs {d2}"))?;
    ensure(m1 == m2, || "manifests differ".into())?;
    ensure(r1 == r2, || "results files differ".into())?;
    Ok(format!(
        "corpus {}…, manifest and {} results files identical",
        &d1[..12],
        r1.len()
    ))
}

fn metric_suite(report: &EvalReport) -> Check {
    let f = Fraction::new;
    let s = |v: &[u32]| v.iter().copied().collect::<BTreeSet<u32>>();
    let r = |a: u32, b: u32| (a..=b).collect::<BTreeSet<u32>>();
    let cases = [
        (s(&[1]), s(&[1]), f(1, 1), f(1, 1)),
        (s(&[1]), r(1, 100), f(1, 1), f(1, 100)),
        (r(1, 100), r(1, 100), f(1, 1), f(1, 1)),
        (s(&[1, 2]), s(&[1]), f(1, 2), f(1, 1)),
        (s(&[1, 2, 3]), s(&[1, 2]), f(2, 3), f(1, 1)),
        (s(&[1, 2, 3, 4]), s(&[2, 4, 6, 8]), f(1, 2), f(1, 2)),
        (s(&[1]), s(&[2]), f(0, 1), f(0, 1)),
        (s(&[]), s(&[1]), f(0, 1), f(0, 1)),
        (s(&[]), r(1, 100), f(0, 1), f(0, 1)),
        (s(&[1]), s(&[]), f(0, 1), f(1, 1)),
        (s(&[]), s(&[]), f(0, 1), f(1, 1)),
        (s(&[1]), r(1, 17), f(1, 1), f(1, 17)),
        (s(&[1]), r(1, 14), f(1, 1), f(1, 14)),
        (s(&[1, 2]), r(1, 14), f(1, 1), f(1, 7)),
        (r(1, 10), r(6, 15), f(1, 2), f(1, 2)),
        (r(1, 3), r(1, 9), f(1, 1), f(1, 3)),
        (r(1, 9), r(1, 3), f(1, 3), f(1, 1)),
        (r(1, 7), r(3, 5), f(3, 7), f(1, 1)),
        (r(1, 6), r(4, 13), f(1, 2), f(3, 10)),
        (r(1, 4), r(3, 10), f(1, 2), f(1, 4)),
        (r(1, 5), r(6, 9), f(0, 1), f(0, 1)),
    ];
    for (found, relevant, p, rc) in &cases {
        let pv = precision(found, relevant);
        let rv = recall(found, relevant);
        ensure(pv.value == *p && rv.value == *rc, || {
            format!("{found:?} vs {relevant:?}")
        })?;
        ensure(
            pv.empty_found == found.is_empty() && rv.empty_relevant == relevant.is_empty(),
            || format!("flags for {found:?} vs {relevant:?}"),
        )?;
    }
    let mut recomputed = 0;
    for records in report.records.values() {
        for rec in records {
            ensure(precision(&rec.s_found, &rec.s_relevant).value == rec.precision, || {
                rec.query_id.clone()
            })?;
            ensure(recall(&rec.s_found, &rec.s_relevant).value == rec.recall, || {
                rec.query_id.clone()
            })?;
            recomputed += 1;
        }
    }
    let mean = report.mean_recall(Engine::Baseline).unwrap();
    ensure(format4_big(&mean) == "0.0100", || format4_big(&mean))?;
    Ok(format!(
        "{} hand-computed pairs, {recomputed} stored records recomputed",
        cases.len()
    ))
}

fn main() -> ExitCode {
    let m = default_corpus();
    let report = evaluate(&m, &Engine::ALL);
    let criteria: Vec<Criterion> = vec![
        ("1 baseline reproduction", Box::new(baseline_reproduction)),
        (
            "2 root-aware reproduction",
            Box::new(|| root_aware_reproduction(&m, &report)),
        ),
        (
            "3 distribution transparency",
            Box::new(|| distribution_transparency(&report)),
        ),
        ("4 morphology round trip", Box::new(|| morphology_round_trip(&m))),
        ("5 index oracle equivalence", Box::new(|| index_oracle(&m))),
        ("6 routing precision", Box::new(|| routing_precision(&m))),
        ("7 determinism", Box::new(determinism)),
        ("8 precision/recall suite", Box::new(|| metric_suite(&report))),
    ];
    let mut failed = 0;
    for (name, check) in &criteria {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name}: {why}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
