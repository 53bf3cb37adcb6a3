//! Append-only, hash-chained bulletin board.
//!
//! Each entry commits to its predecessor, so any edit to an earlier entry is
//! detected by [`Board::verify_chain`]. Dropping entries from the end is not
//! detectable from the board alone; readers who need that guarantee must
//! remember [`Board::head_hash`] out of band.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use sha2::{Digest, Sha256};
use thiserror::Error;

pub const MAX_PAYLOAD: usize = 1 << 20;
pub const FORMAT_HEADER: &str = "laocoon-board v1";

/// Chain anchor for entry 0.
pub fn genesis_hash() -> [u8; 32] {
    Sha256::digest(b"laocoon/bulletin-genesis/v1").into()
}

/// Protocol phases, in the only order the board accepts them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Phase {
    Setup,
    Dispatch,
    Cast,
    Open,
    Tally,
    Audit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    Params,
    AdminCert,
    RekeyList,
    HashSpec,
    CandidateKey,
    PhaseMarker,
    Ballot,
    Transaction,
    CandidateSecret,
    TallyResult,
    CommitKey,
    Claim,
}

macro_rules! text_enum {
    ($ty:ident, $what:literal, { $($variant:ident => ($code:expr, $text:literal)),* $(,)? }) => {
        impl $ty {
            pub const ALL: &'static [$ty] = &[$($ty::$variant),*];

            pub fn code(self) -> u8 {
                match self { $($ty::$variant => $code),* }
            }

            pub fn as_str(self) -> &'static str {
                match self { $($ty::$variant => $text),* }
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $ty {
            type Err = String;
            fn from_str(s: &str) -> Result<Self, String> {
                match s {
                    $($text => Ok($ty::$variant),)*
                    other => Err(format!("unknown {} {:?}", $what, other)),
                }
            }
        }
    };
}

text_enum!(Phase, "phase", {
    Setup => (0, "setup"),
    Dispatch => (1, "dispatch"),
    Cast => (2, "cast"),
    Open => (3, "open"),
    Tally => (4, "tally"),
    Audit => (5, "audit"),
});

text_enum!(Kind, "kind", {
    Params => (0, "params"),
    AdminCert => (1, "admin-cert"),
    RekeyList => (2, "rekey-list"),
    HashSpec => (3, "hash-spec"),
    CandidateKey => (4, "candidate-key"),
    PhaseMarker => (5, "phase-marker"),
    Ballot => (6, "ballot"),
    Transaction => (7, "transaction"),
    CandidateSecret => (8, "candidate-secret"),
    TallyResult => (9, "tally-result"),
    CommitKey => (10, "commit-key"),
    Claim => (11, "claim"),
});

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BulletinEntry {
    pub seq: u64,
    pub phase: Phase,
    pub kind: Kind,
    pub payload: Vec<u8>,
    pub prev_hash: [u8; 32],
    pub entry_hash: [u8; 32],
}

/// `SHA-256(seq || phase || kind || payload || prev_hash)` with seq as u64
/// big-endian and phase/kind as one byte each.
pub fn entry_hash(seq: u64, phase: Phase, kind: Kind, payload: &[u8], prev_hash: &[u8; 32]) -> [u8; 32] {
    Sha256::new()
        .chain_update(seq.to_be_bytes())
        .chain_update([phase.code(), kind.code()])
        .chain_update(payload)
        .chain_update(prev_hash)
        .finalize()
        .into()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AppendError {
    #[error("cannot append to phase {requested}: board already reached phase {current}")]
    PhaseRegression { current: Phase, requested: Phase },
    #[error("payload of {0} bytes exceeds the 1 MiB limit")]
    PayloadTooLarge(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("chain broken at entry {seq}: {reason}")]
pub struct ChainError {
    pub seq: u64,
    pub reason: String,
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {reason}")]
    Line { line: usize, reason: String },
    #[error(transparent)]
    Chain(#[from] ChainError),
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Board {
    entries: Vec<BulletinEntry>,
}

impl Board {
    pub fn new() -> Self {
        Self::default()
    }

    /// Wraps raw entries without checking them. Use [`Board::verify_chain`]
    /// before trusting the result.
    pub fn from_entries_unchecked(entries: Vec<BulletinEntry>) -> Self {
        Board { entries }
    }

    pub fn entries(&self) -> &[BulletinEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn head_hash(&self) -> [u8; 32] {
        self.entries
            .last()
            .map(|e| e.entry_hash)
            .unwrap_or_else(genesis_hash)
    }

    pub fn current_phase(&self) -> Option<Phase> {
        self.entries.last().map(|e| e.phase)
    }

    pub fn append(&mut self, phase: Phase, kind: Kind, payload: Vec<u8>) -> Result<u64, AppendError> {
        if payload.len() > MAX_PAYLOAD {
            return Err(AppendError::PayloadTooLarge(payload.len()));
        }
        if let Some(current) = self.current_phase() {
            if phase < current {
                return Err(AppendError::PhaseRegression {
                    current,
                    requested: phase,
                });
            }
        }
        let seq = self.entries.len() as u64;
        let prev_hash = self.head_hash();
        let entry_hash = entry_hash(seq, phase, kind, &payload, &prev_hash);
        self.entries.push(BulletinEntry {
            seq,
            phase,
            kind,
            payload,
            prev_hash,
            entry_hash,
        });
        Ok(seq)
    }

    /// Checks sequence density, phase order, linkage and every entry hash.
    pub fn verify_chain(&self) -> Result<(), ChainError> {
        let mut prev = genesis_hash();
        let mut phase = Phase::Setup;
        for (idx, e) in self.entries.iter().enumerate() {
            let fail = |reason: &str| ChainError {
                seq: idx as u64,
                reason: reason.to_string(),
            };
            if e.seq != idx as u64 {
                return Err(fail("sequence number out of place"));
            }
            if e.prev_hash != prev {
                return Err(fail("previous-hash link mismatch"));
            }
            if e.entry_hash != entry_hash(e.seq, e.phase, e.kind, &e.payload, &e.prev_hash) {
                return Err(fail("entry hash mismatch"));
            }
            if e.phase < phase {
                return Err(fail("phase regression"));
            }
            phase = e.phase;
            prev = e.entry_hash;
        }
        Ok(())
    }

    /// Entries matching the optional filters, in sequence order.
    pub fn query(&self, phase: Option<Phase>, kind: Option<Kind>) -> Vec<&BulletinEntry> {
        self.entries
            .iter()
            .filter(|e| phase.is_none_or(|p| e.phase == p))
            .filter(|e| kind.is_none_or(|k| e.kind == k))
            .collect()
    }

    pub fn of_kind(&self, kind: Kind) -> impl Iterator<Item = &BulletinEntry> {
        self.entries.iter().filter(move |e| e.kind == kind)
    }

    /// Line-oriented text form: a header line, then one
    /// `seq phase kind payload-hex prev-hash-hex entry-hash-hex` line per
    /// entry. An empty payload is written as `-`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(FORMAT_HEADER);
        out.push('\n');
        for e in &self.entries {
            let payload = if e.payload.is_empty() {
                "-".to_string()
            } else {
                hex::encode(&e.payload)
            };
            out.push_str(&format!(
                "{} {} {} {} {} {}\n",
                e.seq,
                e.phase,
                e.kind,
                payload,
                hex::encode(e.prev_hash),
                hex::encode(e.entry_hash)
            ));
        }
        out
    }

    /// Parses the text form without checking the chain. An empty input is an
    /// empty board.
    pub fn parse_unverified(text: &str) -> Result<Board, LoadError> {
        let mut lines = text.lines().enumerate();
        let Some((_, header)) = lines.next() else {
            return Ok(Board::new());
        };
        if header != FORMAT_HEADER {
            return Err(LoadError::Line {
                line: 1,
                reason: format!("expected header {FORMAT_HEADER:?}, found {header:?}"),
            });
        }
        let mut entries = Vec::new();
        for (idx, line) in lines {
            let line_no = idx + 1;
            let err = |reason: String| LoadError::Line { line: line_no, reason };
            let fields: Vec<&str> = line.split(' ').collect();
            if fields.len() != 6 {
                return Err(err(format!("expected 6 fields, found {}", fields.len())));
            }
            let seq = fields[0]
                .parse::<u64>()
                .map_err(|e| err(format!("bad sequence number: {e}")))?;
            let phase = fields[1].parse::<Phase>().map_err(err)?;
            let kind = fields[2].parse::<Kind>().map_err(err)?;
            let payload = if fields[3] == "-" {
                Vec::new()
            } else {
                hex::decode(fields[3]).map_err(|e| err(format!("bad payload hex: {e}")))?
            };
            let hash = |s: &str, what: &str| -> Result<[u8; 32], LoadError> {
                let v = hex::decode(s).map_err(|e| err(format!("bad {what} hex: {e}")))?;
                v.try_into()
                    .map_err(|_| err(format!("{what} must be 32 bytes")))
            };
            let prev_hash = hash(fields[4], "prev-hash")?;
            let entry_hash = hash(fields[5], "entry-hash")?;
            entries.push(BulletinEntry {
                seq,
                phase,
                kind,
                payload,
                prev_hash,
                entry_hash,
            });
        }
        Ok(Board { entries })
    }

    /// Parses and verifies; a broken chain is reported with the line that
    /// holds the first bad entry.
    pub fn parse(text: &str) -> Result<Board, LoadError> {
        let board = Self::parse_unverified(text)?;
        board.verify_chain().map_err(|e| LoadError::Line {
            line: e.seq as usize + 2,
            reason: e.to_string(),
        })?;
        Ok(board)
    }

    pub fn persist(&self, path: impl AsRef<Path>) -> std::io::Result<()> {
        std::fs::write(path, self.to_text())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Board, LoadError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn board_of(n: usize) -> Board {
        let mut b = Board::new();
        for i in 0..n {
            b.append(Phase::Cast, Kind::Transaction, format!("tx {i}").into_bytes())
                .unwrap();
        }
        b
    }

    #[test]
    fn first_append_chains_from_genesis() {
        let mut b = Board::new();
        assert_eq!(b.append(Phase::Setup, Kind::Params, b"par".to_vec()).unwrap(), 0);
        assert_eq!(b.entries()[0].prev_hash, genesis_hash());
        assert_eq!(b.head_hash(), b.entries()[0].entry_hash);
        assert_eq!(b.append(Phase::Setup, Kind::HashSpec, b"sha-256".to_vec()).unwrap(), 1);
        assert!(b.verify_chain().is_ok());
    }

    #[test]
    fn phases_cannot_regress() {
        let mut b = Board::new();
        b.append(Phase::Tally, Kind::TallyResult, vec![1]).unwrap();
        assert_eq!(
            b.append(Phase::Cast, Kind::Transaction, vec![2]),
            Err(AppendError::PhaseRegression {
                current: Phase::Tally,
                requested: Phase::Cast
            })
        );
        assert!(b.append(Phase::Audit, Kind::CommitKey, vec![3]).is_ok());
    }

    #[test]
    fn oversized_payload_is_refused() {
        let mut b = Board::new();
        assert_eq!(
            b.append(Phase::Setup, Kind::Params, vec![0; MAX_PAYLOAD + 1]),
            Err(AppendError::PayloadTooLarge(MAX_PAYLOAD + 1))
        );
        assert!(b.is_empty());
    }

    #[test]
    fn tampering_is_located() {
        let b = board_of(100);
        assert!(b.verify_chain().is_ok());
        let mut entries = b.entries().to_vec();
        entries[7].payload[0] ^= 1;
        let err = Board::from_entries_unchecked(entries).verify_chain().unwrap_err();
        assert_eq!(err.seq, 7);
    }

    #[test]
    fn truncation_is_not_detectable_without_the_head() {
        let b = board_of(10);
        let head = b.head_hash();
        let mut entries = b.entries().to_vec();
        entries.pop();
        let truncated = Board::from_entries_unchecked(entries);
        assert!(truncated.verify_chain().is_ok());
        assert_ne!(truncated.head_hash(), head);
    }

    #[test]
    fn query_filters_preserve_order() {
        let mut b = Board::new();
        b.append(Phase::Setup, Kind::Params, vec![0]).unwrap();
        for i in 0..3u8 {
            b.append(Phase::Cast, Kind::Ballot, vec![i]).unwrap();
            b.append(Phase::Cast, Kind::Transaction, vec![i]).unwrap();
        }
        let txs = b.query(None, Some(Kind::Transaction));
        assert_eq!(txs.iter().map(|e| e.seq).collect::<Vec<_>>(), vec![2, 4, 6]);
        assert_eq!(b.query(None, None).len(), 7);
        assert_eq!(b.query(Some(Phase::Setup), None).len(), 1);
        assert!(b.query(None, Some(Kind::Claim)).is_empty());
    }

    #[test]
    fn text_round_trip_is_exact() {
        let mut b = board_of(5);
        b.append(Phase::Open, Kind::PhaseMarker, Vec::new()).unwrap();
        let text = b.to_text();
        assert_eq!(text, b.to_text());
        let back = Board::parse(&text).unwrap();
        assert_eq!(back, b);
        assert_eq!(back.to_text(), text);
    }

    #[test]
    fn corrupted_line_is_named() {
        let text = board_of(4).to_text();
        let mut lines: Vec<String> = text.lines().map(str::to_string).collect();
        lines[3] = lines[3].replacen(" cast ", " kast ", 1);
        match Board::parse(&(lines.join("\n") + "\n")) {
            Err(LoadError::Line { line, .. }) => assert_eq!(line, 4),
            other => panic!("unexpected {other:?}"),
        }

        // Valid syntax, wrong payload: rejected by the chain check on line 3.
        let mut lines: Vec<String> = text.lines().map(str::to_string).collect();
        let mut fields: Vec<String> = lines[2].split(' ').map(str::to_string).collect();
        fields[3] = hex::encode(b"forged");
        lines[2] = fields.join(" ");
        match Board::parse(&(lines.join("\n") + "\n")) {
            Err(LoadError::Line { line, reason }) => {
                assert_eq!(line, 3);
                assert!(reason.contains("entry 1"));
            }
            other => panic!("unexpected {other:?}"),
        }

        let truncated_line = &text[..text.len() - 10];
        assert!(Board::parse(truncated_line).is_err());
    }

    #[test]
    fn empty_file_is_empty_board() {
        assert_eq!(Board::parse("").unwrap(), Board::new());
        assert_eq!(Board::parse(&Board::new().to_text()).unwrap(), Board::new());
    }

    #[test]
    fn persist_and_load() {
        let dir = std::env::temp_dir().join(format!("laocoon-board-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("board.txt");
        let b = board_of(12);
        b.persist(&path).unwrap();
        let first = std::fs::read(&path).unwrap();
        b.persist(&path).unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), first);
        assert_eq!(Board::load(&path).unwrap(), b);
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
