//! Versioned binary snapshot of an [`InvertedIndex`].
//!
//! Layout, all integers little-endian, strings as `u32 length + UTF-8 bytes`:
//!
//! ```text
//! magic "ARIDX\0" | version u16 | mode u8 | doc_count u64
//! entry_count u32 | { key str | n u32 | n × doc_id str }*
//! group_count u32 | { root str | n u32 | n × word str }*
//! ```
//!
//! The format is tied to this crate version; it is a cache, not an exchange
//! format.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::{IndexMode, InvertedIndex};
use crate::corpus::DocId;
use crate::morphology::{NormalizedWord, Root};

const MAGIC: &[u8; 6] = b"ARIDX\0";
pub const SNAPSHOT_VERSION: u16 = 1;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SnapshotError {
    #[error("not an index snapshot")]
    BadMagic,
    #[error("unsupported snapshot version {0}")]
    Version(u16),
    #[error("truncated snapshot at byte {0}")]
    Truncated(usize),
    #[error("invalid snapshot at byte {offset}: {msg}")]
    Invalid { offset: usize, msg: String },
}

fn put_str(out: &mut Vec<u8>, s: &str) {
    out.extend_from_slice(&(s.len() as u32).to_le_bytes());
    out.extend_from_slice(s.as_bytes());
}

pub fn encode_snapshot(index: &InvertedIndex) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&SNAPSHOT_VERSION.to_le_bytes());
    out.push(match index.mode {
        IndexMode::Simple => 0,
        IndexMode::Advanced => 1,
    });
    out.extend_from_slice(&(index.doc_count as u64).to_le_bytes());
    out.extend_from_slice(&(index.entries.len() as u32).to_le_bytes());
    for (key, docs) in &index.entries {
        put_str(&mut out, key.as_str());
        out.extend_from_slice(&(docs.len() as u32).to_le_bytes());
        for d in docs {
            put_str(&mut out, d.as_str());
        }
    }
    out.extend_from_slice(&(index.root_groups.len() as u32).to_le_bytes());
    for (root, words) in &index.root_groups {
        put_str(&mut out, root.as_str());
        out.extend_from_slice(&(words.len() as u32).to_le_bytes());
        for w in words {
            put_str(&mut out, w.as_str());
        }
    }
    out
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], SnapshotError> {
        let end = self
            .pos
            .checked_add(n)
            .filter(|&e| e <= self.bytes.len())
            .ok_or(SnapshotError::Truncated(self.pos))?;
        let slice = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(slice)
    }

    fn array<const N: usize>(&mut self) -> Result<[u8; N], SnapshotError> {
        Ok(self.take(N)?.try_into().expect("take returns N bytes"))
    }

    fn u32(&mut self) -> Result<u32, SnapshotError> {
        self.array().map(u32::from_le_bytes)
    }

    fn invalid(&self, msg: impl Into<String>) -> SnapshotError {
        SnapshotError::Invalid {
            offset: self.pos,
            msg: msg.into(),
        }
    }

    fn str(&mut self) -> Result<&'a str, SnapshotError> {
        let len = self.u32()? as usize;
        let at = self.pos;
        std::str::from_utf8(self.take(len)?).map_err(|e| SnapshotError::Invalid {
            offset: at,
            msg: e.to_string(),
        })
    }

    fn word(&mut self) -> Result<NormalizedWord, SnapshotError> {
        let s = self.str()?;
        NormalizedWord::parse(s).map_err(|e| self.invalid(e.to_string()))
    }

    fn done(&self) -> bool {
        self.pos == self.bytes.len()
    }
}

pub fn decode_snapshot(bytes: &[u8]) -> Result<InvertedIndex, SnapshotError> {
    let mut r = Reader { bytes, pos: 0 };
    if r.take(MAGIC.len()).map_err(|_| SnapshotError::BadMagic)? != MAGIC {
        return Err(SnapshotError::BadMagic);
    }
    let version = u16::from_le_bytes(r.array()?);
    if version != SNAPSHOT_VERSION {
        return Err(SnapshotError::Version(version));
    }
    let mode = match r.array::<1>()?[0] {
        0 => IndexMode::Simple,
        1 => IndexMode::Advanced,
        other => return Err(r.invalid(format!("unknown mode byte {other}"))),
    };
    let doc_count = usize::try_from(u64::from_le_bytes(r.array()?)).map_err(|_| r.invalid("doc_count overflow"))?;

    let mut entries = BTreeMap::new();
    let mut all_docs = BTreeSet::new();
    for _ in 0..r.u32()? {
        let key = r.word()?;
        let mut docs = BTreeSet::new();
        for _ in 0..r.u32()? {
            let id = r.str()?;
            let id = DocId::new(id).map_err(|e| r.invalid(e))?;
            all_docs.insert(id.clone());
            docs.insert(id);
        }
        if entries.insert(key, docs).is_some() {
            return Err(r.invalid("duplicate key"));
        }
    }
    if all_docs.len() > doc_count {
        return Err(r.invalid(format!(
            "{} distinct documents but doc_count is {doc_count}",
            all_docs.len()
        )));
    }

    let mut root_groups = BTreeMap::new();
    for _ in 0..r.u32()? {
        let root_text = r.str()?;
        let root = Root::new(root_text).map_err(|e| r.invalid(e.to_string()))?;
        let mut words = BTreeSet::new();
        for _ in 0..r.u32()? {
            words.insert(r.word()?);
        }
        if root_groups.insert(root, words).is_some() {
            return Err(r.invalid("duplicate root group"));
        }
    }
    if !r.done() {
        return Err(r.invalid("trailing bytes"));
    }
    Ok(InvertedIndex::from_parts(mode, entries, root_groups, doc_count))
}
