//! Arabic root-aware information retrieval testbed.
//!
//! Four retrieval configurations are compared over a deterministically
//! generated single-word-document corpus:
//!
//! | engine         | index  | root handling                                  |
//! |----------------|--------|------------------------------------------------|
//! | `baseline`     | simple | none, exact surface match                      |
//! | `expanded`     | simple | query rewritten to every root-mate             |
//! | `p2p-simple`   | simple | none, routed through a super-peer overlay      |
//! | `p2p-advanced` | advanced | documents indexed under every root-mate      |
//!
//! [`corpus`] builds the documents and ground truth, [`index`] and [`search`]
//! provide the centralized engines, [`p2p`] simulates the overlay and
//! [`eval`] scores everything with precision and recall.

pub mod corpus;
pub mod eval;
pub mod index;
pub mod morphology;
pub mod p2p;
pub mod search;
