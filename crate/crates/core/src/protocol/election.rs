//! A complete election held in one process, driven step by step.
//!
//! [`Election`] owns every entity and routes messages between them: board
//! entries go through the single [`Board`] writer, direct messages (credential
//! ciphertexts, the credential list) are passed by value, and ballots go
//! through the [`MixChannel`]. All randomness comes from one seeded ChaCha20
//! stream, so `(config, actions, seed)` determines the board byte for byte.

use std::collections::BTreeSet;
use std::time::Instant;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::bulletin::{Board, Kind, Phase};
use crate::envelope::{commit, Kem};
use crate::groups::{setup_group, GroupContext, OpCounter, G1};

use super::admin::{Administrator, VoterRecord};
use super::candidate::Candidate;
use super::config::ElectionConfig;
use super::messages::{phase_marker, BallotMessage, Credential, TallyReport};
use super::metrics::{Activity, Metrics};
use super::mix::MixChannel;
use super::proxy::{BallotOutcome, Proxy};
use super::tally::{recount, BoardView, TALLY_TRIGGER};
use super::voter::{make_ballot, verify_credential, HeldCredential, Voter, VoterRegistry};
use super::ProtocolError;

/// A voter's audit result for one credential it voted with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub voter: usize,
    pub cred_hash: [u8; 32],
    pub verified: bool,
}

pub struct Election {
    cfg: ElectionConfig,
    ctx: GroupContext,
    rng: ChaCha20Rng,
    board: Board,
    admin: Administrator,
    proxy: Proxy,
    voters: Vec<Voter>,
    candidates: Vec<Candidate>,
    registry: VoterRegistry,
    mix: MixChannel,
    metrics: Metrics,
    /// Credential number -> voter index it was delivered to.
    assignment: Vec<usize>,
    /// C4 ciphertexts still to be corrupted in transit.
    dispatch_faults: usize,
    dispatch_rejects: usize,
    outcomes: Vec<BallotOutcome>,
    /// Genuine credentials each voter has cast with, for the audit.
    cast_log: Vec<(usize, Credential)>,
}

impl Election {
    /// Creates every entity with fresh keys. Nothing is posted yet.
    pub fn new(cfg: ElectionConfig, seed: u64) -> Result<Self, ProtocolError> {
        cfg.validate_structure()?;
        let ctx = setup_group(cfg.security_tag.as_bytes())?;
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let admin = Administrator::new(&ctx, &mut rng);
        let proxy = Proxy::new(&ctx, cfg.clock_start, &mut rng);
        let voters: Vec<Voter> = (0..cfg.num_voters).map(|i| Voter::new(&ctx, i, &mut rng)).collect();
        let candidates = cfg.candidates.iter().map(|id| Candidate::new(&ctx, id, &mut rng)).collect();
        let registry = VoterRegistry::new(voters.iter().map(|v| *v.dv_public()).collect());
        Ok(Election {
            mix: MixChannel::new(cfg.mix_window),
            cfg,
            ctx,
            rng,
            board: Board::new(),
            admin,
            proxy,
            voters,
            candidates,
            registry,
            metrics: Metrics::default(),
            assignment: Vec::new(),
            dispatch_faults: 0,
            dispatch_rejects: 0,
            outcomes: Vec::new(),
            cast_log: Vec::new(),
        })
    }

    pub fn config(&self) -> &ElectionConfig {
        &self.cfg
    }

    pub fn ctx(&self) -> &GroupContext {
        &self.ctx
    }

    pub fn board(&self) -> &Board {
        &self.board
    }

    /// Mutable access for tamper scenarios. Anything done here bypasses the
    /// append-only API and shows up in [`Board::verify_chain`].
    pub fn board_mut(&mut self) -> &mut Board {
        &mut self.board
    }

    pub fn metrics(&self) -> &Metrics {
        &self.metrics
    }

    pub fn admin(&self) -> &Administrator {
        &self.admin
    }

    pub fn proxy(&self) -> &Proxy {
        &self.proxy
    }

    pub fn proxy_mut(&mut self) -> &mut Proxy {
        &mut self.proxy
    }

    pub fn voters(&self) -> &[Voter] {
        &self.voters
    }

    pub fn candidates(&self) -> &[Candidate] {
        &self.candidates
    }

    pub fn registry(&self) -> &VoterRegistry {
        &self.registry
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn outcomes(&self) -> &[BallotOutcome] {
        &self.outcomes
    }

    pub fn dispatch_rejects(&self) -> usize {
        self.dispatch_rejects
    }

    /// Corrupts the next `n` credential ciphertexts on their way to the proxy.
    pub fn inject_dispatch_faults(&mut self, n: usize) {
        self.dispatch_faults = n;
    }

    fn post(&mut self, step: &'static str, phase: Phase, kind: Kind, payload: Vec<u8>) -> Result<u64, ProtocolError> {
        self.board
            .append(phase, kind, payload)
            .map_err(|source| ProtocolError::Board { step, source })
    }

    fn candidate_pk(&self, id: &str) -> Result<crate::pre::PrePublicKey, ProtocolError> {
        self.candidates
            .iter()
            .find(|c| c.id() == id)
            .map(|c| *c.pre_public())
            .ok_or_else(|| ProtocolError::UnknownCandidate(id.to_string()))
    }

    /// Steps S1-S2.
    pub fn setup(&mut self) -> Result<(), ProtocolError> {
        let records: Vec<VoterRecord> = self
            .voters
            .iter()
            .map(|v| VoterRecord {
                pre: *v.pre_public(),
                dv: *v.dv_public(),
            })
            .collect();
        let (admin, ctx, board, rng) = (&self.admin, &self.ctx, &mut self.board, &mut self.rng);
        self.metrics
            .record(Activity::AdminSetup, || admin.publish_setup(ctx, board, &records, rng))?;
        let entries: Vec<_> = self.candidates.iter().map(|c| c.key_entry().to_bytes()).collect();
        let start = Instant::now();
        for e in entries {
            self.post("S2", Phase::Setup, Kind::CandidateKey, e)?;
        }
        self.metrics.add(Activity::CandidateSetup, OpCounter::ZERO, start.elapsed());
        Ok(())
    }

    fn designated_ring(&mut self) -> Vec<G1> {
        let keys = self.registry.keys();
        match self.cfg.ring_cap {
            Some(cap) if cap < keys.len() => sample(&mut self.rng, keys.len(), cap)
                .into_iter()
                .map(|i| keys[i])
                .collect(),
            _ => keys.to_vec(),
        }
    }

    /// Steps C1-C7 for every credential, then B1-B2 at each recipient. A
    /// credential the proxy cannot re-encrypt is revoked and issued afresh.
    pub fn dispatch(&mut self) -> Result<(), ProtocolError> {
        self.post("C0", Phase::Dispatch, Kind::PhaseMarker, phase_marker("dispatch"))?;
        let rekeys = self
            .board
            .of_kind(Kind::RekeyList)
            .map(|e| {
                super::messages::RekeyListEntry::from_bytes(&e.payload)
                    .map(|r| r.rekey)
                    .map_err(|err| ProtocolError::Malformed("C5", e.seq, err))
            })
            .collect::<Result<Vec<_>, _>>()?;
        self.proxy.load_rekeys(rekeys, self.cfg.credentials_per_voter);

        let total = self.cfg.num_voters * self.cfg.credentials_per_voter;
        let admin_dv = *self.admin.dv_public();
        let mut i = 0;
        while i < total {
            let ring = self.designated_ring();
            let (admin, ctx, rng) = (&mut self.admin, &self.ctx, &mut self.rng);
            let mut c = self
                .metrics
                .record(Activity::AdminDispatch, || admin.issue_credential(ctx, &ring, rng))?;
            self.metrics.add_message(Activity::AdminDispatch, c.to_bytes().len());
            if self.dispatch_faults > 0 {
                self.dispatch_faults -= 1;
                if let Kem::Level2(inner) = &mut c.kem {
                    inner.beta = inner.beta.mul(self.ctx.h());
                }
            }
            let (proxy, ctx, rng) = (&mut self.proxy, &self.ctx, &mut self.rng);
            let forwarded = self
                .metrics
                .record(Activity::ProxyDispatch, || proxy.forward_credential(ctx, i, &c, rng));
            let (j, c1) = match forwarded {
                Ok(v) => v,
                Err(ProtocolError::Envelope { step: "C6", .. }) => {
                    self.dispatch_rejects += 1;
                    self.admin.revoke_last();
                    continue;
                }
                Err(e) => return Err(e),
            };
            self.metrics.add_message(Activity::ProxyDispatch, c1.to_bytes().len());
            let (voter, ctx, registry) = (&mut self.voters[j], &self.ctx, &self.registry);
            self.metrics
                .record(Activity::VoterReceive, || voter.receive(ctx, &admin_dv, registry, &c1).map(|_| ()))?;
            self.assignment.push(j);
            i += 1;
        }

        if total > 0 {
            let (admin, proxy, ctx, rng) = (&self.admin, &mut self.proxy, &self.ctx, &mut self.rng);
            self.metrics.record(Activity::CredentialList, || {
                for chunk in admin.credential_list_for(ctx, proxy.pre_public(), rng)? {
                    proxy.receive_credential_list(ctx, &chunk)?;
                }
                Ok::<_, ProtocolError>(())
            })?;
        }
        Ok(())
    }

    fn release(&mut self, batch: Vec<BallotMessage>) -> Result<(), ProtocolError> {
        let audit = self.cfg.audit_enabled;
        for bm in batch {
            self.post("B5", Phase::Cast, Kind::Ballot, bm.to_bytes())?;
            let (proxy, ctx, rng) = (&mut self.proxy, &self.ctx, &mut self.rng);
            let outcome = self
                .metrics
                .record(Activity::ProxyCast, || proxy.process_ballot(ctx, &bm, audit, rng));
            if let BallotOutcome::Published(tx) = &outcome {
                let bytes = tx.to_bytes();
                self.metrics.add_message(Activity::ProxyCast, bytes.len());
                self.post("B9", Phase::Cast, Kind::Transaction, bytes)?;
            }
            self.outcomes.push(outcome);
        }
        Ok(())
    }

    fn ensure_cast_phase(&mut self) -> Result<(), ProtocolError> {
        if self.board.current_phase() < Some(Phase::Cast) {
            self.post("B0", Phase::Cast, Kind::PhaseMarker, phase_marker("cast"))?;
        }
        Ok(())
    }

    /// Hands `bm` to the anonymous channel; a full window is released to the
    /// board and processed by the proxy.
    pub fn submit(&mut self, bm: BallotMessage) -> Result<(), ProtocolError> {
        self.ensure_cast_phase()?;
        if let Some(batch) = self.mix.submit(bm, &mut self.rng) {
            self.release(batch)?;
        }
        Ok(())
    }

    /// Releases a partially filled mix window.
    pub fn flush(&mut self) -> Result<(), ProtocolError> {
        let batch = self.mix.flush(&mut self.rng);
        self.release(batch)
    }

    /// Voter `v` votes for `candidate` with its credential number `slot`.
    pub fn cast_slot(&mut self, v: usize, slot: usize, candidate: &str) -> Result<(), ProtocolError> {
        let choice = self.candidate_pk(candidate)?;
        let voter = self.voters.get(v).ok_or(ProtocolError::UnknownVoter(v))?;
        let (ctx, rng) = (&self.ctx, &mut self.rng);
        let bm = self
            .metrics
            .record(Activity::VoterCast, || voter.cast(ctx, slot, &choice, rng))?;
        let credential = voter.wallet()[slot].credential.clone();
        self.cast_log.push((v, credential));
        self.metrics.add_message(Activity::VoterCast, bm.to_bytes().len());
        self.submit(bm)
    }

    pub fn cast(&mut self, v: usize, candidate: &str) -> Result<(), ProtocolError> {
        self.cast_slot(v, 0, candidate)
    }

    /// Casts with an arbitrary held credential, e.g. a forged one given to a
    /// coercer.
    pub fn cast_with(&mut self, held: &HeldCredential, candidate: &str) -> Result<(), ProtocolError> {
        let choice = self.candidate_pk(candidate)?;
        let bm = make_ballot(&self.ctx, held, &choice, &mut self.rng);
        self.submit(bm)
    }

    /// Voter `v` fabricates a credential for a coercer.
    pub fn forge_credential(&mut self, v: usize, slot: usize) -> Result<HeldCredential, ProtocolError> {
        let voter = self.voters.get(v).ok_or(ProtocolError::UnknownVoter(v))?;
        voter.forge_credential(&self.ctx, slot, &mut self.rng)
    }

    /// The check a coercer can run with public information only.
    pub fn coercer_accepts(&self, credential: &Credential) -> bool {
        verify_credential(&self.ctx, credential, self.admin.dv_public(), &self.registry)
    }

    /// Every candidate scans the transactions posted since its last scan.
    /// Returns the private running counts in slate order.
    pub fn candidates_open(&mut self) -> Result<Vec<u64>, ProtocolError> {
        let mut counts = Vec::with_capacity(self.candidates.len());
        for cand in &mut self.candidates {
            let (ctx, board) = (&self.ctx, &self.board);
            counts.push(self.metrics.record(Activity::CandidateOpen, || cand.open(ctx, board))?);
        }
        Ok(counts)
    }

    /// As [`Election::candidates_open`], one thread per candidate. Each
    /// candidate's state stays on its own thread; the board is shared
    /// read-only.
    pub fn candidates_open_concurrent(&mut self) -> Result<Vec<u64>, ProtocolError> {
        let (ctx, board) = (&self.ctx, &self.board);
        let results: Vec<_> = std::thread::scope(|s| {
            let handles: Vec<_> = self
                .candidates
                .iter_mut()
                .map(|cand| {
                    s.spawn(move || {
                        let start = Instant::now();
                        let (count, ops) = OpCounter::measure(|| cand.open(ctx, board));
                        (count, ops, start.elapsed())
                    })
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("candidate thread panicked"))
                .collect()
        });
        let mut counts = Vec::with_capacity(results.len());
        for (count, ops, wall) in results {
            self.metrics.add(Activity::CandidateOpen, ops, wall);
            counts.push(count?);
        }
        Ok(counts)
    }

    /// Closes casting: flushes the mix and posts the tally trigger.
    pub fn trigger_tally(&mut self) -> Result<(), ProtocolError> {
        self.flush()?;
        let marker = format!("{TALLY_TRIGGER}{}", self.cfg.tally_date);
        self.post("T0", Phase::Open, Kind::PhaseMarker, phase_marker(&marker))?;
        Ok(())
    }

    /// Candidates publish their secret keys, except those listed. Only after
    /// the tally trigger.
    pub fn publish_secrets(&mut self, withhold: &[&str]) -> Result<(), ProtocolError> {
        let triggered = self
            .board
            .of_kind(Kind::PhaseMarker)
            .any(|m| m.payload.starts_with(TALLY_TRIGGER.as_bytes()));
        if !triggered {
            return Err(ProtocolError::TallyNotTriggered);
        }
        let entries: Vec<_> = self
            .candidates
            .iter()
            .filter(|c| !withhold.contains(&c.id()))
            .map(|c| c.secret_entry().to_bytes())
            .collect();
        for e in entries {
            self.metrics.add_message(Activity::CandidateOpen, e.len());
            self.post("T1", Phase::Open, Kind::CandidateSecret, e)?;
        }
        Ok(())
    }

    /// Runs the tallying script over the board and posts its report.
    pub fn tally(&mut self) -> Result<TallyReport, ProtocolError> {
        let rejected = self.proxy.rejection_counts();
        let board = &self.board;
        let report = self.metrics.record(Activity::Tally, || {
            let view = BoardView::read(board)?;
            recount(&view).map(|r| r.into_report(rejected))
        })?;
        self.post("T2", Phase::Tally, Kind::TallyResult, report.to_bytes())?;
        Ok(report)
    }

    /// The audit extension: the proxy reveals its commitment key and every
    /// voter looks for the commitment to each credential it voted with. A
    /// missing one becomes a claim on the board.
    pub fn audit(&mut self) -> Result<Vec<Verdict>, ProtocolError> {
        if !self.cfg.audit_enabled {
            return Err(ProtocolError::AuditDisabled);
        }
        if self.board.of_kind(Kind::TallyResult).next().is_none() {
            return Err(ProtocolError::TallyMissing);
        }
        let k = self.proxy.published_commit_key();
        self.post("A1", Phase::Audit, Kind::CommitKey, k.to_vec())?;
        let start = Instant::now();
        let view = BoardView::read(&self.board)?;
        let mut seen = BTreeSet::new();
        let mut verdicts = Vec::new();
        for (voter, credential) in &self.cast_log {
            let cred_hash = credential.hash();
            if !seen.insert(cred_hash) {
                continue;
            }
            let expected = commit(&k, &credential.to_bytes());
            verdicts.push((
                Verdict {
                    voter: *voter,
                    cred_hash,
                    verified: view.has_commitment(&expected),
                },
                expected,
            ));
        }
        for (v, expected) in &verdicts {
            if !v.verified {
                self.post("A2", Phase::Audit, Kind::Claim, expected.digest.to_vec())?;
            }
        }
        self.metrics.add(Activity::Audit, OpCounter::ZERO, start.elapsed());
        Ok(verdicts.into_iter().map(|(v, _)| v).collect())
    }

    /// Setup, dispatch, one cast per entry of `votes` (`None` abstains),
    /// opening, and tally with every key published.
    pub fn run(&mut self, votes: &[Option<&str>]) -> Result<TallyReport, ProtocolError> {
        self.setup()?;
        self.dispatch()?;
        for (v, choice) in votes.iter().enumerate() {
            if let Some(c) = choice {
                self.cast(v, c)?;
            }
        }
        self.trigger_tally()?;
        self.candidates_open()?;
        self.publish_secrets(&[])?;
        self.tally()
    }
}
