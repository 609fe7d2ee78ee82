use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use crate::corpus::{DocId, PeerId, SuperPeerId};
use crate::morphology::{NormalizedWord, Root};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NodeId {
    Peer(PeerId),
    Super(SuperPeerId),
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeId::Peer(p) => p.fmt(f),
            NodeId::Super(s) => s.fmt(f),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MessageKind {
    /// Origin peer → its super-peer.
    QueryUp,
    /// Super-peer → another super-peer.
    QuerySibling,
    /// Super-peer → one of its children.
    QueryForward,
    /// Answer to any of the above, carrying doc ids.
    ResultsBack,
}

impl MessageKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MessageKind::QueryUp => "QUERY_UP",
            MessageKind::QuerySibling => "QUERY_SIBLING",
            MessageKind::QueryForward => "QUERY_FORWARD",
            MessageKind::ResultsBack => "RESULTS_BACK",
        }
    }

    pub fn is_query(self) -> bool {
        !matches!(self, MessageKind::ResultsBack)
    }
}

impl fmt::Display for MessageKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// What super-peer summaries hold and queries are routed on.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SummaryKey {
    Word(NormalizedWord),
    Root(Root),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Payload {
    Query {
        /// Matched against child summaries.
        route_keys: Vec<SummaryKey>,
        /// Looked up, one by one, in each contacted peer's local index.
        terms: Vec<NormalizedWord>,
    },
    Results(BTreeSet<DocId>),
}

impl Payload {
    pub fn size(&self) -> usize {
        match self {
            Payload::Query { terms, .. } => terms.len(),
            Payload::Results(docs) => docs.len(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OverlayMessage {
    pub seq: u64,
    pub kind: MessageKind,
    pub from: NodeId,
    pub to: NodeId,
    pub payload: Payload,
}

/// Message delivery between overlay nodes.
///
/// Implementations must preserve send order per (sender, receiver) pair.
pub trait Transport {
    fn send(&mut self, message: OverlayMessage);
    fn recv(&mut self) -> Option<OverlayMessage>;
}

/// Single FIFO queue: deterministic global delivery order.
#[derive(Debug, Default)]
pub struct SimTransport {
    queue: VecDeque<OverlayMessage>,
}

impl Transport for SimTransport {
    fn send(&mut self, message: OverlayMessage) {
        self.queue.push_back(message);
    }

    fn recv(&mut self) -> Option<OverlayMessage> {
        self.queue.pop_front()
    }
}

/// One line per message: `seq TAB kind TAB from TAB to TAB payload_size`.
pub fn export_message_log(messages: &[OverlayMessage]) -> String {
    let mut out = String::new();
    for m in messages {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\n",
            m.seq,
            m.kind,
            m.from,
            m.to,
            m.payload.size()
        ));
    }
    out
}
