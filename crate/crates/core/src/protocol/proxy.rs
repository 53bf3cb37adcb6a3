//! The proxy: credential forwarding (C5-C7), the credential table, and ballot
//! processing (B6-B9).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::{CryptoRng, Rng, RngCore};

use crate::envelope::{commit, hybrid_dec, hybrid_reenc, Commitment, HybridCiphertext};
use crate::groups::{GroupContext, Scalar};
use crate::pre::{enc2, keygen, reenc, PreKeyPair, PrePublicKey, ReKey};

use super::messages::{decode_credential_list, BallotMessage, Credential, RejectionCounts, VotingTransaction};
use super::ProtocolError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RejectReason {
    UnknownCredential,
    UsedCredential,
    InvalidBallot,
}

impl RejectReason {
    pub fn as_str(self) -> &'static str {
        match self {
            RejectReason::UnknownCredential => "reject-unknown-credential",
            RejectReason::UsedCredential => "reject-used-credential",
            RejectReason::InvalidBallot => "reject-invalid-ballot",
        }
    }
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B6: {}", self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rejection {
    pub reason: RejectReason,
    pub cred_hash: [u8; 32],
}

#[derive(Debug, Clone)]
struct Row {
    credential: Credential,
    used: bool,
}

/// Hash-keyed credential list. A row's `used` flag goes from false to true
/// at most once.
#[derive(Debug, Clone, Default)]
pub struct CredentialTable {
    rows: BTreeMap<[u8; 32], Row>,
}

impl CredentialTable {
    pub fn insert(&mut self, credential: Credential) {
        self.rows.insert(
            credential.hash(),
            Row {
                credential,
                used: false,
            },
        );
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn contains(&self, h: &[u8; 32]) -> bool {
        self.rows.contains_key(h)
    }

    pub fn is_used(&self, h: &[u8; 32]) -> Option<bool> {
        self.rows.get(h).map(|r| r.used)
    }

    fn mark_used(&mut self, h: &[u8; 32]) {
        if let Some(row) = self.rows.get_mut(h) {
            row.used = true;
        }
    }
}

/// Monotone logical clock for timestamps.
#[derive(Debug, Clone)]
pub struct LogicalClock {
    next: u64,
}

impl LogicalClock {
    pub fn starting_at(start: u64) -> Self {
        LogicalClock { next: start }
    }

    pub fn tick(&mut self) -> u64 {
        let t = self.next;
        self.next += 1;
        t
    }
}

/// Misbehaviour switches used by audit scenarios.
#[derive(Debug, Clone, Default)]
pub struct ProxyFaults {
    /// Ballots with these credential hashes are accepted and then silently
    /// not published.
    pub suppress: BTreeSet<[u8; 32]>,
    /// Publish a different commitment key than the one used for committing.
    pub wrong_commit_key: bool,
}

/// What happened to one ballot.
#[allow(clippy::large_enum_variant)] // almost every outcome is Published; boxing saves nothing
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BallotOutcome {
    Published(VotingTransaction),
    Suppressed,
    Rejected(Rejection),
}

pub struct Proxy {
    pre: PreKeyPair,
    rekeys: Vec<ReKey>,
    unused_slots: Vec<usize>,
    table: CredentialTable,
    commit_key: [u8; 32],
    clock: LogicalClock,
    rejections: Vec<Rejection>,
    pub faults: ProxyFaults,
}

impl Proxy {
    pub fn new<R: RngCore + CryptoRng>(ctx: &GroupContext, clock_start: u64, rng: &mut R) -> Self {
        let mut commit_key = [0u8; 32];
        rng.fill_bytes(&mut commit_key);
        Proxy {
            pre: keygen(ctx, rng),
            rekeys: Vec::new(),
            unused_slots: Vec::new(),
            table: CredentialTable::default(),
            commit_key,
            clock: LogicalClock::starting_at(clock_start),
            rejections: Vec::new(),
            faults: ProxyFaults::default(),
        }
    }

    pub fn pre_public(&self) -> &PrePublicKey {
        self.pre.public()
    }

    /// Loads `L_k` and marks every voter index available `per_voter` times.
    pub fn load_rekeys(&mut self, rekeys: Vec<ReKey>, per_voter: usize) {
        self.unused_slots = (0..rekeys.len())
            .flat_map(|j| std::iter::repeat_n(j, per_voter))
            .collect();
        self.rekeys = rekeys;
    }

    /// Step C5: a uniformly random unused voter index.
    fn draw_slot<R: RngCore>(&mut self, rng: &mut R) -> Option<usize> {
        if self.unused_slots.is_empty() {
            return None;
        }
        let pick = rng.gen_range(0..self.unused_slots.len());
        Some(self.unused_slots.swap_remove(pick))
    }

    /// Steps C5-C7 for credential number `issued`. Returns the chosen voter
    /// index and the re-encrypted ciphertext to deliver to that voter.
    pub fn forward_credential<R: RngCore + CryptoRng>(
        &mut self,
        ctx: &GroupContext,
        issued: usize,
        c: &HybridCiphertext,
        rng: &mut R,
    ) -> Result<(usize, HybridCiphertext), ProtocolError> {
        let j = self
            .draw_slot(rng)
            .ok_or(ProtocolError::ExhaustedIndex(issued))?;
        match hybrid_reenc(ctx, &self.rekeys[j], c, rng) {
            Ok(c1) => Ok((j, c1)),
            Err(source) => {
                // The index was not consumed.
                self.unused_slots.push(j);
                Err(ProtocolError::Envelope { step: "C6", source })
            }
        }
    }

    /// Decrypts `Enc_{y_P}(L_sigma)` and fills the credential table.
    pub fn receive_credential_list(&mut self, ctx: &GroupContext, c: &HybridCiphertext) -> Result<(), ProtocolError> {
        let bytes = hybrid_dec(ctx, &self.pre, c)
            .map_err(|source| ProtocolError::Envelope { step: "C7", source })?;
        let list = decode_credential_list(&bytes).map_err(|e| ProtocolError::Malformed("C7", 0, e))?;
        for credential in list {
            self.table.insert(credential);
        }
        Ok(())
    }

    pub fn table(&self) -> &CredentialTable {
        &self.table
    }

    /// Steps B6-B8. `Published` carries the transaction to post (B9).
    pub fn process_ballot<R: RngCore + CryptoRng>(
        &mut self,
        ctx: &GroupContext,
        bm: &BallotMessage,
        audit: bool,
        rng: &mut R,
    ) -> BallotOutcome {
        let reject = |this: &mut Self, reason| {
            let r = Rejection {
                reason,
                cred_hash: bm.cred_hash,
            };
            this.rejections.push(r.clone());
            BallotOutcome::Rejected(r)
        };
        let pk = match self.table.rows.get(&bm.cred_hash) {
            None => return reject(self, RejectReason::UnknownCredential),
            Some(row) if row.used => return reject(self, RejectReason::UsedCredential),
            Some(row) => row.credential.pk,
        };
        let stp = self.clock.tick();
        let delta = enc2(ctx, &pk, &ctx.encode(&Scalar::from_u64(stp)), rng);
        let Ok(delta_prime) = reenc(ctx, &bm.ballot, &delta, rng) else {
            return reject(self, RejectReason::InvalidBallot);
        };
        self.table.mark_used(&bm.cred_hash);
        if self.faults.suppress.contains(&bm.cred_hash) {
            return BallotOutcome::Suppressed;
        }
        let commitment = audit.then(|| {
            let row = &self.table.rows[&bm.cred_hash];
            commit(&self.commit_key, &row.credential.to_bytes())
        });
        BallotOutcome::Published(VotingTransaction {
            delta: delta_prime,
            stp,
            commitment,
        })
    }

    pub fn rejections(&self) -> &[Rejection] {
        &self.rejections
    }

    pub fn rejection_counts(&self) -> RejectionCounts {
        let mut counts = RejectionCounts::default();
        for r in &self.rejections {
            match r.reason {
                RejectReason::UnknownCredential => counts.unknown_credential += 1,
                RejectReason::UsedCredential => counts.used_credential += 1,
                RejectReason::InvalidBallot => counts.invalid_ballot += 1,
            }
        }
        counts
    }

    /// The key revealed in the audit phase.
    pub fn published_commit_key(&self) -> [u8; 32] {
        if self.faults.wrong_commit_key {
            let mut k = self.commit_key;
            k[0] ^= 0xff;
            k
        } else {
            self.commit_key
        }
    }

    pub fn commitment_for(&self, credential: &Credential) -> Commitment {
        commit(&self.commit_key, &credential.to_bytes())
    }
}
