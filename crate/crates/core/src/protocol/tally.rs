//! The tallying script: everything here works from board contents alone.

use crate::bulletin::{Board, Kind};
use crate::envelope::Commitment;
use crate::groups::{GroupContext, Scalar};
use crate::pre::{dec1, PreKeyPair};
use crate::wire::DecodeError;

use super::messages::{
    AdminCertificate, CandidateKeyEntry, CandidateSecret, RekeyListEntry, TallyReport, VotingTransaction,
};
use super::ProtocolError;

/// Prefix of the phase marker that fires the tallying script.
pub const TALLY_TRIGGER: &str = "tally-trigger ";

/// Decoded board, grouped by entry kind.
pub struct BoardView {
    pub ctx: GroupContext,
    pub admin: AdminCertificate,
    pub rekeys: Vec<RekeyListEntry>,
    pub candidates: Vec<CandidateKeyEntry>,
    pub markers: Vec<String>,
    pub ballots: usize,
    pub transactions: Vec<(u64, VotingTransaction)>,
    pub secrets: Vec<CandidateSecret>,
    pub tally: Option<(u64, TallyReport)>,
    pub commit_key: Option<[u8; 32]>,
    pub claims: Vec<(u64, Commitment)>,
}

fn single(board: &Board, kind: Kind) -> Result<&[u8], ProtocolError> {
    let mut it = board.of_kind(kind);
    let first = it.next().ok_or(ProtocolError::MissingEntry(kind))?;
    if it.next().is_some() {
        return Err(ProtocolError::DuplicateEntry(kind));
    }
    Ok(&first.payload)
}

fn decode_each<T>(
    board: &Board,
    kind: Kind,
    f: impl Fn(&[u8]) -> Result<T, DecodeError>,
) -> Result<Vec<(u64, T)>, ProtocolError> {
    board
        .of_kind(kind)
        .map(|e| f(&e.payload).map(|v| (e.seq, v)).map_err(|err| ProtocolError::Malformed(kind.as_str(), e.seq, err)))
        .collect()
}

fn values<T>(v: Vec<(u64, T)>) -> Vec<T> {
    v.into_iter().map(|(_, x)| x).collect()
}

fn key32(bytes: &[u8]) -> Result<[u8; 32], DecodeError> {
    bytes.try_into().map_err(|_| DecodeError::Length(bytes.len()))
}

impl BoardView {
    pub fn read(board: &Board) -> Result<Self, ProtocolError> {
        let ctx = GroupContext::from_bytes(single(board, Kind::Params)?)
            .map_err(|e| ProtocolError::Malformed("params", 0, e))?;
        let admin = AdminCertificate::from_bytes(single(board, Kind::AdminCert)?)
            .map_err(|e| ProtocolError::Malformed("admin-cert", 1, e))?;
        let tallies = decode_each(board, Kind::TallyResult, TallyReport::from_bytes)?;
        if tallies.len() > 1 {
            return Err(ProtocolError::DuplicateEntry(Kind::TallyResult));
        }
        let keys = decode_each(board, Kind::CommitKey, key32)?;
        if keys.len() > 1 {
            return Err(ProtocolError::DuplicateEntry(Kind::CommitKey));
        }
        Ok(BoardView {
            rekeys: values(decode_each(board, Kind::RekeyList, RekeyListEntry::from_bytes)?),
            candidates: values(decode_each(board, Kind::CandidateKey, CandidateKeyEntry::from_bytes)?),
            markers: board
                .of_kind(Kind::PhaseMarker)
                .map(|e| String::from_utf8_lossy(&e.payload).into_owned())
                .collect(),
            ballots: board.of_kind(Kind::Ballot).count(),
            transactions: decode_each(board, Kind::Transaction, VotingTransaction::from_bytes)?,
            secrets: values(decode_each(board, Kind::CandidateSecret, CandidateSecret::from_bytes)?),
            tally: tallies.into_iter().next(),
            commit_key: keys.into_iter().next().map(|(_, k)| k),
            claims: decode_each(board, Kind::Claim, |b| key32(b).map(|digest| Commitment { digest }))?,
            ctx,
            admin,
        })
    }

    pub fn tally_triggered(&self) -> bool {
        self.markers.iter().any(|m| m.starts_with(TALLY_TRIGGER))
    }

    /// Whether some transaction carries `c`.
    pub fn has_commitment(&self, c: &Commitment) -> bool {
        self.transactions.iter().any(|(_, tx)| tx.commitment.as_ref() == Some(c))
    }
}

/// What the board alone says about the result.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Recount {
    /// In the order candidate keys were published.
    pub counts: Vec<(String, u64)>,
    pub total_valid: u64,
    /// Sequence numbers of transactions no published key opens.
    pub unopened: Vec<u64>,
    /// Candidates with a public key but no published secret.
    pub withheld: Vec<String>,
    /// Published secrets whose candidate never posted a public key. They
    /// take no part in the count.
    pub orphan_secrets: Vec<String>,
}

impl Recount {
    pub fn into_report(self, rejected: super::RejectionCounts) -> TallyReport {
        TallyReport {
            counts: self.counts,
            total_valid: self.total_valid,
            rejected,
            unopened: self.unopened.len() as u64,
        }
    }
}

/// Assigns every transaction to the unique published key whose level-1
/// decryption yields `Z^stp`.
pub fn recount(view: &BoardView) -> Result<Recount, ProtocolError> {
    if !view.tally_triggered() {
        return Err(ProtocolError::TallyNotTriggered);
    }
    let ctx = &view.ctx;
    let mut keys: Vec<Option<PreKeyPair>> = Vec::with_capacity(view.candidates.len());
    let mut withheld = Vec::new();
    for cand in &view.candidates {
        match view.secrets.iter().find(|s| s.id == cand.id) {
            Some(s) => {
                let pair = PreKeyPair::from_secret(ctx, s.sk1, s.sk2)
                    .filter(|p| p.public() == &cand.pk)
                    .ok_or_else(|| ProtocolError::BadCandidateSecret(s.id.clone()))?;
                keys.push(Some(pair));
            }
            None => {
                withheld.push(cand.id.clone());
                keys.push(None);
            }
        }
    }
    let orphan_secrets = view
        .secrets
        .iter()
        .filter(|s| !view.candidates.iter().any(|c| c.id == s.id))
        .map(|s| s.id.clone())
        .collect();

    let mut counts = vec![0u64; view.candidates.len()];
    let mut unopened = Vec::new();
    for (seq, tx) in &view.transactions {
        let expected = ctx.encode(&Scalar::from_u64(tx.stp));
        let mut owner = None;
        for (i, key) in keys.iter().enumerate() {
            let Some(key) = key else { continue };
            if dec1(key, &tx.delta) == expected {
                if owner.is_some() {
                    return Err(ProtocolError::AmbiguousTransaction(*seq));
                }
                owner = Some(i);
            }
        }
        match owner {
            Some(i) => counts[i] += 1,
            None => unopened.push(*seq),
        }
    }
    Ok(Recount {
        total_valid: counts.iter().sum(),
        counts: view
            .candidates
            .iter()
            .map(|c| c.id.clone())
            .zip(counts)
            .collect(),
        unopened,
        withheld,
        orphan_secrets,
    })
}
