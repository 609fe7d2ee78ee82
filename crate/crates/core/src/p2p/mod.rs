//! Simulated super-peer overlay.
//!
//! Peers own document shards and a local index; super-peers own a summary of
//! each child (its surface words in simple mode, its roots in advanced mode)
//! and route queries to the children whose summary matches.
//!
//! A search runs as a message exchange:
//!
//! 1. the origin peer computes the query key-set (in advanced mode it resolves
//!    the root and expands to every root-mate) and sends `QUERY_UP` to its
//!    super-peer;
//! 2. that super-peer sends `QUERY_SIBLING` to every other super-peer and
//!    `QUERY_FORWARD` to each matching child, the origin included;
//! 3. a sibling forwards to its own matching children;
//! 4. peers answer with `RESULTS_BACK`, super-peers merge and answer their
//!    requester once every outstanding query is answered.
//!
//! Super-peers only intersect key-sets with summaries, so their logic does
//! not depend on the indexation mode. Super-peers form a full mesh; the default
//! layout has two.

mod transport;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use crate::corpus::{CorpusManifest, CorpusSpec, DocId, Document, PeerId, SuperPeerId};
use crate::index::{IndexMode, InvertedIndex};
use crate::morphology::{extract_root, MorphologyError, NormalizedWord, RootLexicon};
use crate::search::{Engine, Query, SearchResult};

pub use transport::{
    export_message_log, MessageKind, NodeId, OverlayMessage, Payload, SimTransport, SummaryKey, Transport,
};

#[derive(Debug, Error)]
pub enum P2pError {
    #[error("overlay was built in {built} mode but {requested} search was requested")]
    ModeMismatch { built: IndexMode, requested: IndexMode },
    #[error("unknown origin {0}")]
    UnknownPeer(PeerId),
    #[error("manifest does not match its spec: {0}")]
    Topology(String),
    #[error(transparent)]
    Morphology(#[from] MorphologyError),
    #[error("protocol violation: {0}")]
    Protocol(String),
}

#[derive(Debug, Clone)]
pub struct PeerNode {
    pub peer_id: PeerId,
    pub shard: Vec<Document>,
    pub local_index: InvertedIndex,
    pub parent: SuperPeerId,
}

#[derive(Debug, Clone)]
pub struct SuperPeer {
    pub superpeer_id: SuperPeerId,
    pub children: Vec<PeerId>,
    pub summary: BTreeMap<PeerId, BTreeSet<SummaryKey>>,
}

impl SuperPeer {
    fn matching_children(&self, keys: &[SummaryKey]) -> Vec<PeerId> {
        self.children
            .iter()
            .copied()
            .filter(|c| {
                let summary = &self.summary[c];
                keys.iter().any(|k| summary.contains(k))
            })
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct Overlay {
    mode: IndexMode,
    peers: BTreeMap<PeerId, PeerNode>,
    superpeers: BTreeMap<SuperPeerId, SuperPeer>,
    lexicon: RootLexicon,
}

fn summary_of(node: &PeerNode, mode: IndexMode) -> BTreeSet<SummaryKey> {
    match mode {
        IndexMode::Simple => node.local_index.keys().cloned().map(SummaryKey::Word).collect(),
        IndexMode::Advanced => node.shard.iter().map(|d| SummaryKey::Root(d.root.clone())).collect(),
    }
}

/// Places each peer's shard, builds its local index in `mode` and derives the
/// super-peer summaries.
pub fn build_overlay(manifest: &CorpusManifest, mode: IndexMode) -> Result<Overlay, P2pError> {
    let spec: &CorpusSpec = manifest.spec();
    let lexicon = manifest.lexicon().clone();
    let mut peers = BTreeMap::new();
    for peer_id in spec.peers() {
        let shard: Vec<Document> = manifest.documents_of_peer(peer_id).cloned().collect();
        if shard.is_empty() {
            return Err(P2pError::Topology(format!("{peer_id} has no documents")));
        }
        let local_index = InvertedIndex::build(&shard, mode, &lexicon)?;
        peers.insert(
            peer_id,
            PeerNode {
                peer_id,
                shard,
                local_index,
                parent: spec.superpeer_of(peer_id),
            },
        );
    }
    let placed: usize = peers.values().map(|p| p.shard.len()).sum();
    if placed != manifest.documents().len() {
        return Err(P2pError::Topology(format!(
            "{placed} of {} documents placed on peers",
            manifest.documents().len()
        )));
    }

    let superpeers = spec
        .superpeers()
        .map(|sp| {
            let children = spec.children_of(sp);
            let summary = children.iter().map(|c| (*c, summary_of(&peers[c], mode))).collect();
            (
                sp,
                SuperPeer {
                    superpeer_id: sp,
                    children,
                    summary,
                },
            )
        })
        .collect();

    Ok(Overlay {
        mode,
        peers,
        superpeers,
        lexicon,
    })
}

impl Overlay {
    pub fn mode(&self) -> IndexMode {
        self.mode
    }

    pub fn peers(&self) -> impl Iterator<Item = &PeerNode> {
        self.peers.values()
    }

    pub fn peer(&self, id: PeerId) -> Option<&PeerNode> {
        self.peers.get(&id)
    }

    pub fn superpeers(&self) -> impl Iterator<Item = &SuperPeer> {
        self.superpeers.values()
    }

    pub fn superpeer(&self, id: SuperPeerId) -> Option<&SuperPeer> {
        self.superpeers.get(&id)
    }

    pub fn lexicon(&self) -> &RootLexicon {
        &self.lexicon
    }
}

#[derive(Debug, Clone)]
pub struct P2pSearchOutcome {
    pub result: SearchResult,
    pub messages: Vec<OverlayMessage>,
    /// Distinct peers that received a `QUERY_FORWARD`.
    pub peers_contacted: usize,
}

impl P2pSearchOutcome {
    pub fn forwarded_to(&self) -> BTreeSet<PeerId> {
        self.messages
            .iter()
            .filter(|m| m.kind == MessageKind::QueryForward)
            .filter_map(|m| match m.to {
                NodeId::Peer(p) => Some(p),
                NodeId::Super(_) => None,
            })
            .collect()
    }

    pub fn message_log(&self) -> String {
        export_message_log(&self.messages)
    }

    /// Checks that every forward targets a child of its sender and every
    /// answer replies to exactly one earlier query in the opposite direction.
    pub fn check_causality(&self, overlay: &Overlay) -> Result<(), P2pError> {
        let violation = |msg: String| Err(P2pError::Protocol(msg));
        let mut open: HashMap<(NodeId, NodeId), usize> = HashMap::new();
        for m in &self.messages {
            match m.kind {
                MessageKind::QueryForward => {
                    let (NodeId::Super(sp), NodeId::Peer(child)) = (m.from, m.to) else {
                        return violation(format!("#{}: forward must go super-peer → peer", m.seq));
                    };
                    if !overlay.superpeers[&sp].children.contains(&child) {
                        return violation(format!("#{}: {child} is not a child of {sp}", m.seq));
                    }
                    *open.entry((m.from, m.to)).or_default() += 1;
                }
                MessageKind::QueryUp | MessageKind::QuerySibling => {
                    *open.entry((m.from, m.to)).or_default() += 1;
                }
                MessageKind::ResultsBack => {
                    let pending = open.entry((m.to, m.from)).or_default();
                    if *pending == 0 {
                        return violation(format!("#{}: {} answers {} without a query", m.seq, m.from, m.to));
                    }
                    *pending -= 1;
                }
            }
        }
        if let Some(((from, to), _)) = open.iter().find(|(_, &n)| n > 0) {
            return violation(format!("query {from} → {to} never answered"));
        }
        Ok(())
    }
}

struct Pending {
    requester: NodeId,
    outstanding: usize,
    found: BTreeSet<DocId>,
}

/// One query's run over the overlay.
struct Session<'a, T: Transport> {
    overlay: &'a Overlay,
    transport: &'a mut T,
    origin: PeerId,
    log: Vec<OverlayMessage>,
    pending: HashMap<SuperPeerId, Pending>,
    answer: Option<BTreeSet<DocId>>,
}

impl<T: Transport> Session<'_, T> {
    fn send(&mut self, kind: MessageKind, from: NodeId, to: NodeId, payload: Payload) {
        let message = OverlayMessage {
            seq: self.log.len() as u64,
            kind,
            from,
            to,
            payload,
        };
        self.log.push(message.clone());
        self.transport.send(message);
    }

    fn run(&mut self, route_keys: Vec<SummaryKey>, terms: Vec<NormalizedWord>) -> Result<BTreeSet<DocId>, P2pError> {
        let parent = self.overlay.peers[&self.origin].parent;
        self.send(
            MessageKind::QueryUp,
            NodeId::Peer(self.origin),
            NodeId::Super(parent),
            Payload::Query { route_keys, terms },
        );
        while let Some(message) = self.transport.recv() {
            self.deliver(message)?;
        }
        self.answer
            .take()
            .ok_or_else(|| P2pError::Protocol("origin never received an answer".into()))
    }

    fn deliver(&mut self, m: OverlayMessage) -> Result<(), P2pError> {
        match (m.to, m.kind, m.payload) {
            (
                NodeId::Super(sp),
                MessageKind::QueryUp | MessageKind::QuerySibling,
                Payload::Query { route_keys, terms },
            ) => {
                let node = &self.overlay.superpeers[&sp];
                let targets = node.matching_children(&route_keys);
                let siblings: Vec<SuperPeerId> = if m.kind == MessageKind::QueryUp {
                    self.overlay.superpeers.keys().copied().filter(|&s| s != sp).collect()
                } else {
                    Vec::new()
                };
                let outstanding = targets.len() + siblings.len();
                self.pending.insert(
                    sp,
                    Pending {
                        requester: m.from,
                        outstanding,
                        found: BTreeSet::new(),
                    },
                );
                for sibling in siblings {
                    let payload = Payload::Query {
                        route_keys: route_keys.clone(),
                        terms: terms.clone(),
                    };
                    self.send(
                        MessageKind::QuerySibling,
                        NodeId::Super(sp),
                        NodeId::Super(sibling),
                        payload,
                    );
                }
                for child in targets {
                    let payload = Payload::Query {
                        route_keys: route_keys.clone(),
                        terms: terms.clone(),
                    };
                    self.send(
                        MessageKind::QueryForward,
                        NodeId::Super(sp),
                        NodeId::Peer(child),
                        payload,
                    );
                }
                if outstanding == 0 {
                    self.answer_requester(sp);
                }
            }
            (NodeId::Peer(peer), MessageKind::QueryForward, Payload::Query { terms, .. }) => {
                let index = &self.overlay.peers[&peer].local_index;
                let found = terms.iter().flat_map(|t| index.lookup(t).iter().cloned()).collect();
                self.send(MessageKind::ResultsBack, m.to, m.from, Payload::Results(found));
            }
            (NodeId::Super(sp), MessageKind::ResultsBack, Payload::Results(docs)) => {
                let state = self
                    .pending
                    .get_mut(&sp)
                    .ok_or_else(|| P2pError::Protocol(format!("{sp} got results without a pending query")))?;
                state.found.extend(docs);
                state.outstanding -= 1;
                if state.outstanding == 0 {
                    self.answer_requester(sp);
                }
            }
            (NodeId::Peer(peer), MessageKind::ResultsBack, Payload::Results(docs)) if peer == self.origin => {
                self.answer = Some(docs);
            }
            (to, kind, _) => {
                return Err(P2pError::Protocol(format!("{to} cannot handle {kind} #{}", m.seq)));
            }
        }
        Ok(())
    }

    fn answer_requester(&mut self, sp: SuperPeerId) {
        let state = self.pending.remove(&sp).expect("pending entry exists");
        self.send(
            MessageKind::ResultsBack,
            NodeId::Super(sp),
            state.requester,
            Payload::Results(state.found),
        );
    }
}

/// Runs `query` from `origin` over the deterministic in-process transport.
pub fn p2p_search(
    query: &Query,
    overlay: &Overlay,
    origin: PeerId,
    mode: IndexMode,
) -> Result<P2pSearchOutcome, P2pError> {
    p2p_search_with(query, overlay, origin, mode, &mut SimTransport::default())
}

pub fn p2p_search_with<T: Transport>(
    query: &Query,
    overlay: &Overlay,
    origin: PeerId,
    mode: IndexMode,
    transport: &mut T,
) -> Result<P2pSearchOutcome, P2pError> {
    if mode != overlay.mode {
        return Err(P2pError::ModeMismatch {
            built: overlay.mode,
            requested: mode,
        });
    }
    if !overlay.peers.contains_key(&origin) {
        return Err(P2pError::UnknownPeer(origin));
    }

    let word = query.normalized.clone();
    let (route_keys, terms, degraded) = match mode {
        IndexMode::Simple => (vec![SummaryKey::Word(word.clone())], vec![word], false),
        IndexMode::Advanced => match extract_root(&word, &overlay.lexicon) {
            Ok(root) => {
                let terms = match overlay.lexicon.group(&root) {
                    Some(group) if !group.is_empty() => group.iter().cloned().collect(),
                    _ => vec![word],
                };
                (vec![SummaryKey::Root(root)], terms, false)
            }
            Err(_) => (vec![SummaryKey::Word(word.clone())], vec![word], true),
        },
    };

    let mut session = Session {
        overlay,
        transport,
        origin,
        log: Vec::new(),
        pending: HashMap::new(),
        answer: None,
    };
    let found = session.run(route_keys, terms.clone())?;
    let messages = session.log;

    let engine = match mode {
        IndexMode::Simple => Engine::P2pSimple,
        IndexMode::Advanced => Engine::P2pAdvanced,
    };
    let expanded_terms = if engine == Engine::P2pAdvanced && !degraded {
        terms
    } else {
        Vec::new()
    };
    let mut outcome = P2pSearchOutcome {
        result: SearchResult {
            query_id: query.query_id.clone(),
            engine,
            found,
            expanded_terms,
            degraded,
        },
        messages,
        peers_contacted: 0,
    };
    outcome.peers_contacted = outcome.forwarded_to().len();
    Ok(outcome)
}
