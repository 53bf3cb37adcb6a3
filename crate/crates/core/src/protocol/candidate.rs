//! Candidates: key publication (S2) and private ballot opening.

use rand::{CryptoRng, RngCore};

use crate::bulletin::{Board, Kind};
use crate::groups::{GroupContext, Scalar};
use crate::pre::{dec1, keygen, PreKeyPair, PrePublicKey};

use super::messages::{CandidateKeyEntry, CandidateSecret, VotingTransaction};
use super::ProtocolError;

pub struct Candidate {
    id: String,
    pre: PreKeyPair,
    count: u64,
    /// Board sequence numbers of the transactions this candidate recognized.
    opened: Vec<u64>,
    /// Number of transaction entries already scanned.
    cursor: usize,
}

impl Candidate {
    pub fn new<R: RngCore + CryptoRng>(ctx: &GroupContext, id: &str, rng: &mut R) -> Self {
        Candidate {
            id: id.to_string(),
            pre: keygen(ctx, rng),
            count: 0,
            opened: Vec::new(),
            cursor: 0,
        }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn pre_public(&self) -> &PrePublicKey {
        self.pre.public()
    }

    pub fn key_entry(&self) -> CandidateKeyEntry {
        CandidateKeyEntry {
            id: self.id.clone(),
            pk: *self.pre.public(),
        }
    }

    /// The secret key with the encoded identity, for publication at tally time.
    pub fn secret_entry(&self) -> CandidateSecret {
        CandidateSecret {
            id: self.id.clone(),
            sk1: *self.pre.sk1(),
            sk2: *self.pre.sk2(),
        }
    }

    /// Decrypts every transaction posted since the last call and counts those
    /// whose plaintext is `Z^stp`. Outputs that do not match are dropped on
    /// the spot; nothing about other candidates' ballots is retained.
    pub fn open(&mut self, ctx: &GroupContext, board: &Board) -> Result<u64, ProtocolError> {
        let fresh: Vec<_> = board.of_kind(Kind::Transaction).skip(self.cursor).collect();
        for entry in fresh {
            let tx = VotingTransaction::from_bytes(&entry.payload)
                .map_err(|e| ProtocolError::Malformed("open", entry.seq, e))?;
            if dec1(&self.pre, &tx.delta) == ctx.encode(&Scalar::from_u64(tx.stp)) {
                self.count += 1;
                self.opened.push(entry.seq);
            }
            self.cursor += 1;
        }
        Ok(self.count)
    }

    /// The candidate's private running count.
    pub fn running_count(&self) -> u64 {
        self.count
    }

    pub fn opened(&self) -> &[u64] {
        &self.opened
    }
}
