mod common;

use std::collections::BTreeSet;

use arabic_ir::corpus::PeerId;
use arabic_ir::index::{IndexMode, InvertedIndex};
use arabic_ir::p2p::{build_overlay, p2p_search, MessageKind};
use arabic_ir::search::{search_exact, search_expanded, Query};
use proptest::prelude::*;

use common::{default_manifest, small_manifest, w};

#[test]
fn distribution_is_result_transparent() {
    let m = default_manifest();
    let idx = InvertedIndex::build(m.documents(), IndexMode::Simple, m.lexicon()).unwrap();
    let simple = build_overlay(m, IndexMode::Simple).unwrap();
    let advanced = build_overlay(m, IndexMode::Advanced).unwrap();
    for cq in m.queries() {
        let q = Query::from_normalized(cq.query_id.clone(), cq.word.clone());
        let exact = search_exact(&q, &idx).found;
        let expanded = search_expanded(&q, &idx, m.lexicon()).found;
        for origin in m.spec().peers() {
            let s = p2p_search(&q, &simple, origin, IndexMode::Simple).unwrap();
            let a = p2p_search(&q, &advanced, origin, IndexMode::Advanced).unwrap();
            assert_eq!(s.result.found, exact, "{} from {origin}", cq.word);
            assert_eq!(a.result.found, expanded, "{} from {origin}", cq.word);
            s.check_causality(&simple).unwrap();
            a.check_causality(&advanced).unwrap();
        }
    }
}

#[test]
fn advanced_forwarding_hits_only_root_owners() {
    let m = default_manifest();
    let overlay = build_overlay(m, IndexMode::Advanced).unwrap();
    for cq in m.queries() {
        let owners = m.owners_of(&cq.root);
        assert_eq!(owners.len(), 1);
        let q = Query::from_normalized(cq.query_id.clone(), cq.word.clone());
        for origin in m.spec().peers() {
            let out = p2p_search(&q, &overlay, origin, IndexMode::Advanced).unwrap();
            let forwarded: BTreeSet<PeerId> = out
                .messages
                .iter()
                .filter(|msg| msg.kind == MessageKind::QueryForward)
                .map(|msg| match msg.to {
                    arabic_ir::p2p::NodeId::Peer(p) => p,
                    other => panic!("QUERY_FORWARD to {other}"),
                })
                .collect();
            assert_eq!(forwarded, owners);
            assert_eq!(out.peers_contacted, 1);
        }
    }
}

#[test]
fn message_logs_are_reproducible() {
    let m = default_manifest();
    let overlay = build_overlay(m, IndexMode::Advanced).unwrap();
    let q = Query::parse("q", "يلعبون").unwrap();
    for origin in m.spec().peers() {
        let a = p2p_search(&q, &overlay, origin, IndexMode::Advanced).unwrap();
        let b = p2p_search(&q, &overlay, origin, IndexMode::Advanced).unwrap();
        assert_eq!(a.message_log(), b.message_log());
        assert_eq!(a.messages, b.messages);
    }
}

#[test]
fn out_of_vocabulary_words_find_nothing_anywhere() {
    let m = default_manifest();
    for mode in [IndexMode::Simple, IndexMode::Advanced] {
        let overlay = build_overlay(m, mode).unwrap();
        for word in ["زقزق", "عن"] {
            let q = Query::from_normalized("q", w(word));
            let out = p2p_search(&q, &overlay, PeerId(2), mode).unwrap();
            assert!(out.result.found.is_empty());
            assert_eq!(out.peers_contacted, 0);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn found_sets_do_not_depend_on_origin(seed in any::<u64>(), doc in 0usize..96) {
        let m = small_manifest(seed);
        let word = m.documents()[doc].word.clone();
        let q = Query::from_normalized("q", word);
        for mode in [IndexMode::Simple, IndexMode::Advanced] {
            let overlay = build_overlay(&m, mode).unwrap();
            let results: Vec<_> = m
                .spec()
                .peers()
                .map(|o| p2p_search(&q, &overlay, o, mode).unwrap().result.found)
                .collect();
            prop_assert!(results.windows(2).all(|r| r[0] == r[1]));
            prop_assert!(!results[0].is_empty());
        }
    }
}
