//! Declarative attack scenarios.
//!
//! ```text
//! laocoon-scenario v1
//! name double-cast
//! seed 7
//! voters 3
//! candidates C1 C2
//!
//! cast 0 C1
//! double-cast 1 C2
//! abstain 2
//!
//! expect count C1 1
//! expect count C2 1
//! expect rejected used-credential 1
//! ```
//!
//! Any configuration key is accepted before or between actions. Actions run
//! in file order during the cast phase; faults (`withhold-key`,
//! `suppress-ballot`, `wrong-commit-key`, `corrupt-dispatch`) are armed
//! before it, and `tamper-board` is applied to the finished board.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use laocoon_core::bulletin::{Board, Kind};
use laocoon_core::groups::GT_BYTES;
use laocoon_core::protocol::{
    make_ballot, BallotOutcome, Election, ElectionConfig, ProtocolError, RejectReason, TallyReport, Verdict,
};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::config::{apply_key, expect_header, line_err, lines, parse_num, ParseError};
use crate::verify::{verify_board, Verification};

pub const SCENARIO_HEADER: &str = "laocoon-scenario v1";

/// Separate stream for the scenario's own choices (random coercer ballots,
/// made-up credential hashes).
const SCRIPT_STREAM: u64 = 0x7363_7269_7074;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coercion {
    /// The coercer demands a ballot for a random candidate.
    Randomization,
    /// The coercer demands the voter not vote.
    ForcedAbstention,
    /// The coercer takes the credential and votes with it.
    Simulation,
}

impl Coercion {
    fn parse(s: &str) -> Option<Self> {
        match s {
            "randomization" => Some(Coercion::Randomization),
            "forced-abstention" => Some(Coercion::ForcedAbstention),
            "simulation" => Some(Coercion::Simulation),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Action {
    Cast { voter: usize, slot: usize, candidate: String },
    /// Casts twice with the same credential.
    DoubleCast { voter: usize, candidate: String },
    /// Casts with a credential the voter forged itself.
    ForgeCast { voter: usize, candidate: String },
    /// A ballot under a credential hash nobody was issued.
    OutsiderCast { candidate: String },
    Abstain { voter: usize },
    /// The voter hands a forged credential to a coercer, who checks it and
    /// acts according to `kind`; the voter then casts `real` (if any) with
    /// the genuine credential.
    Coerce {
        voter: usize,
        kind: Coercion,
        real: Option<String>,
        coercer_choice: Option<String>,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Faults {
    pub withhold: Vec<String>,
    /// Voters whose first-slot ballot the proxy swallows.
    pub suppress: Vec<usize>,
    pub wrong_commit_key: bool,
    pub corrupt_dispatch: usize,
    /// Board entries whose payload gets one byte flipped after the run.
    pub tamper: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expectation {
    Count(String, u64),
    Valid(u64),
    Unopened(u64),
    Rejected(RejectReason, u64),
    Claims(u64),
    VerdictsVerified(usize),
    VerdictsFailed(usize),
    ChainReject(u64),
    Verify(bool),
    CoercerAccepts(bool),
    /// The run stops with an error whose text starts with this.
    Error(String),
    /// No pseudonym public key appears anywhere on the board.
    PseudonymsHidden,
    /// All published transaction ciphertexts are pairwise distinct.
    TransactionsDistinct,
    DispatchRejects(usize),
}

fn reason_str(r: RejectReason) -> &'static str {
    r.as_str().trim_start_matches("reject-")
}

impl fmt::Display for Expectation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expectation::Count(c, n) => write!(f, "expect count {c} {n}"),
            Expectation::Valid(n) => write!(f, "expect valid {n}"),
            Expectation::Unopened(n) => write!(f, "expect unopened {n}"),
            Expectation::Rejected(r, n) => write!(f, "expect rejected {} {n}", reason_str(*r)),
            Expectation::Claims(n) => write!(f, "expect claims {n}"),
            Expectation::VerdictsVerified(n) => write!(f, "expect verdicts-verified {n}"),
            Expectation::VerdictsFailed(n) => write!(f, "expect verdicts-failed {n}"),
            Expectation::ChainReject(s) => write!(f, "expect chain-reject {s}"),
            Expectation::Verify(ok) => write!(f, "expect verify {}", if *ok { "accept" } else { "reject" }),
            Expectation::CoercerAccepts(ok) => write!(f, "expect coercer-accepts {}", if *ok { "yes" } else { "no" }),
            Expectation::Error(p) => write!(f, "expect error {p}"),
            Expectation::PseudonymsHidden => write!(f, "expect pseudonyms-hidden"),
            Expectation::TransactionsDistinct => write!(f, "expect transactions-distinct"),
            Expectation::DispatchRejects(n) => write!(f, "expect dispatch-rejects {n}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scenario {
    pub name: String,
    /// Used when the caller does not supply one.
    pub seed: Option<u64>,
    pub cfg: ElectionConfig,
    pub actions: Vec<Action>,
    pub faults: Faults,
    pub expected: Vec<Expectation>,
}

fn arity(line: usize, words: &[&str], min: usize, max: usize) -> Result<(), ParseError> {
    let n = words.len() - 1;
    if n < min || n > max {
        let want = if min == max {
            format!("{min}")
        } else {
            format!("{min} to {max}")
        };
        return Err(line_err(line, format!("{} takes {want} arguments, got {n}", words[0])));
    }
    Ok(())
}

fn parse_expectation(line: usize, w: &[&str]) -> Result<Expectation, ParseError> {
    let Some(&what) = w.first() else {
        return Err(line_err(line, "expect needs a subject"));
    };
    let one = |n: usize| -> Result<(), ParseError> {
        if w.len() != n + 1 {
            return Err(line_err(line, format!("expect {what} takes {n} arguments")));
        }
        Ok(())
    };
    Ok(match what {
        "count" => {
            one(2)?;
            Expectation::Count(w[1].to_string(), parse_num(line, what, w[2])?)
        }
        "valid" => {
            one(1)?;
            Expectation::Valid(parse_num(line, what, w[1])?)
        }
        "unopened" => {
            one(1)?;
            Expectation::Unopened(parse_num(line, what, w[1])?)
        }
        "rejected" => {
            one(2)?;
            let reason = match w[1].trim_start_matches("reject-") {
                "unknown-credential" => RejectReason::UnknownCredential,
                "used-credential" => RejectReason::UsedCredential,
                "invalid-ballot" => RejectReason::InvalidBallot,
                other => return Err(line_err(line, format!("unknown rejection reason {other:?}"))),
            };
            Expectation::Rejected(reason, parse_num(line, what, w[2])?)
        }
        "claims" => {
            one(1)?;
            Expectation::Claims(parse_num(line, what, w[1])?)
        }
        "verdicts-verified" => {
            one(1)?;
            Expectation::VerdictsVerified(parse_num(line, what, w[1])?)
        }
        "verdicts-failed" => {
            one(1)?;
            Expectation::VerdictsFailed(parse_num(line, what, w[1])?)
        }
        "chain-reject" => {
            one(1)?;
            Expectation::ChainReject(parse_num(line, what, w[1])?)
        }
        "dispatch-rejects" => {
            one(1)?;
            Expectation::DispatchRejects(parse_num(line, what, w[1])?)
        }
        "verify" => {
            one(1)?;
            Expectation::Verify(match w[1] {
                "accept" => true,
                "reject" => false,
                other => return Err(line_err(line, format!("expect verify accept|reject, got {other:?}"))),
            })
        }
        "coercer-accepts" => {
            one(1)?;
            Expectation::CoercerAccepts(match w[1] {
                "yes" => true,
                "no" => false,
                other => return Err(line_err(line, format!("expect coercer-accepts yes|no, got {other:?}"))),
            })
        }
        "error" => {
            if w.len() < 2 {
                return Err(line_err(line, "expect error needs a message prefix"));
            }
            Expectation::Error(w[1..].join(" "))
        }
        "pseudonyms-hidden" => {
            one(0)?;
            Expectation::PseudonymsHidden
        }
        "transactions-distinct" => {
            one(0)?;
            Expectation::TransactionsDistinct
        }
        other => return Err(line_err(line, format!("unknown expectation {other:?}"))),
    })
}

fn opt_choice(s: &str) -> Option<String> {
    (s != "-").then(|| s.to_string())
}

pub fn parse_scenario(text: &str) -> Result<Scenario, ParseError> {
    expect_header(text, SCENARIO_HEADER)?;
    let mut s = Scenario {
        name: String::new(),
        seed: None,
        cfg: ElectionConfig::default(),
        actions: Vec::new(),
        faults: Faults::default(),
        expected: Vec::new(),
    };
    // (line, voter) and (line, candidate) references checked once the
    // config is complete.
    let mut voter_refs = Vec::new();
    let mut cand_refs = Vec::new();
    for (line, w) in lines(text).skip(1) {
        let key = w[0];
        if apply_key(&mut s.cfg, line, key, &w[1..])? {
            continue;
        }
        let voter = |i: usize, refs: &mut Vec<(usize, usize)>| -> Result<usize, ParseError> {
            let v = parse_num(line, "voter", w[i])?;
            refs.push((line, v));
            Ok(v)
        };
        let mut cand = |c: &str| -> String {
            cand_refs.push((line, c.to_string()));
            c.to_string()
        };
        match key {
            "name" => {
                arity(line, &w, 1, 1)?;
                s.name = w[1].to_string();
            }
            "seed" => {
                arity(line, &w, 1, 1)?;
                s.seed = Some(parse_num(line, key, w[1])?);
            }
            "cast" => {
                arity(line, &w, 2, 3)?;
                let slot = if w.len() == 4 { parse_num(line, "slot", w[3])? } else { 0 };
                s.actions.push(Action::Cast {
                    voter: voter(1, &mut voter_refs)?,
                    slot,
                    candidate: cand(w[2]),
                });
            }
            "double-cast" => {
                arity(line, &w, 2, 2)?;
                s.actions.push(Action::DoubleCast {
                    voter: voter(1, &mut voter_refs)?,
                    candidate: cand(w[2]),
                });
            }
            "forge-credential-cast" => {
                arity(line, &w, 2, 2)?;
                s.actions.push(Action::ForgeCast {
                    voter: voter(1, &mut voter_refs)?,
                    candidate: cand(w[2]),
                });
            }
            "outsider-cast" => {
                arity(line, &w, 1, 1)?;
                s.actions.push(Action::OutsiderCast { candidate: cand(w[1]) });
            }
            "abstain" => {
                arity(line, &w, 1, 1)?;
                s.actions.push(Action::Abstain {
                    voter: voter(1, &mut voter_refs)?,
                });
            }
            "coerce-and-forge" => {
                arity(line, &w, 3, 4)?;
                let kind = Coercion::parse(w[2]).ok_or_else(|| {
                    line_err(line, format!("coercion must be randomization, forced-abstention or simulation, got {:?}", w[2]))
                })?;
                let real = opt_choice(w[3]).map(|c| cand(&c));
                let coercer_choice = w.get(4).and_then(|c| opt_choice(c)).map(|c| cand(&c));
                if kind == Coercion::Simulation && coercer_choice.is_none() {
                    return Err(line_err(line, "a simulation attack needs the coercer's choice"));
                }
                s.actions.push(Action::Coerce {
                    voter: voter(1, &mut voter_refs)?,
                    kind,
                    real,
                    coercer_choice,
                });
            }
            "withhold-key" => {
                arity(line, &w, 1, 1)?;
                let c = cand(w[1]);
                s.faults.withhold.push(c);
            }
            "suppress-ballot" => {
                arity(line, &w, 1, 1)?;
                let v = voter(1, &mut voter_refs)?;
                s.faults.suppress.push(v);
            }
            "wrong-commit-key" => {
                arity(line, &w, 0, 0)?;
                s.faults.wrong_commit_key = true;
            }
            "corrupt-dispatch" => {
                arity(line, &w, 1, 1)?;
                s.faults.corrupt_dispatch = parse_num(line, key, w[1])?;
            }
            "tamper-board" => {
                arity(line, &w, 1, 1)?;
                s.faults.tamper.push(parse_num(line, key, w[1])?);
            }
            "expect" => {
                let e = parse_expectation(line, &w[1..])?;
                if let Expectation::Count(c, _) = &e {
                    cand(c);
                }
                s.expected.push(e);
            }
            other => return Err(line_err(line, format!("unknown directive {other:?}"))),
        }
    }
    s.cfg.validate_structure()?;
    if let Some((line, v)) = voter_refs.iter().find(|(_, v)| *v >= s.cfg.num_voters) {
        return Err(line_err(*line, format!("voter {v} out of range: {} voters", s.cfg.num_voters)));
    }
    if let Some((line, c)) = cand_refs.iter().find(|(_, c)| !s.cfg.candidates.contains(c)) {
        // A deliberate reference to an unknown candidate is only allowed in
        // scenarios that expect the resulting error.
        if !s.expected.iter().any(|e| matches!(e, Expectation::Error(_))) {
            return Err(line_err(*line, format!("candidate {c:?} is not on the slate")));
        }
    }
    if s.name.is_empty() {
        s.name = "unnamed".into();
    }
    Ok(s)
}

pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario, ParseError> {
    parse_scenario(&std::fs::read_to_string(path)?)
}

/// Everything a scenario can be checked against.
pub struct Outcome {
    pub report: Option<TallyReport>,
    pub error: Option<String>,
    pub rejections: Vec<RejectReason>,
    pub verdicts: Vec<Verdict>,
    pub claims: u64,
    pub dispatch_rejects: usize,
    pub coercer_accepts: Vec<bool>,
    pub verification: Verification,
    pub board: Board,
    pub pseudonyms_hidden: bool,
    pub transactions_distinct: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScenarioResult {
    Pass,
    /// The first expectation that did not hold.
    Fail { expectation: String, actual: String },
}

impl ScenarioResult {
    pub fn passed(&self) -> bool {
        *self == ScenarioResult::Pass
    }
}

impl fmt::Display for ScenarioResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScenarioResult::Pass => f.write_str("pass"),
            ScenarioResult::Fail { expectation, actual } => write!(f, "fail: {expectation}: got {actual}"),
        }
    }
}

pub struct ScenarioRun {
    pub result: ScenarioResult,
    pub outcome: Outcome,
}

struct Driver {
    e: Election,
    rng: ChaCha20Rng,
    coercer_accepts: Vec<bool>,
}

impl Driver {
    fn outsider(&mut self, candidate: &str) -> Result<(), ProtocolError> {
        // Any well-formed ballot will do; only the hash matters.
        let held = self.e.forge_credential(0, 0)?;
        let choice = *self
            .e
            .candidates()
            .iter()
            .find(|c| c.id() == candidate)
            .ok_or_else(|| ProtocolError::UnknownCandidate(candidate.to_string()))?
            .pre_public();
        let mut bm = make_ballot(self.e.ctx(), &held, &choice, &mut self.rng);
        self.rng.fill_bytes(&mut bm.cred_hash);
        self.e.submit(bm)
    }

    fn act(&mut self, a: &Action) -> Result<(), ProtocolError> {
        match a {
            Action::Cast { voter, slot, candidate } => self.e.cast_slot(*voter, *slot, candidate),
            Action::DoubleCast { voter, candidate } => {
                self.e.cast(*voter, candidate)?;
                self.e.cast(*voter, candidate)
            }
            Action::ForgeCast { voter, candidate } => {
                let fake = self.e.forge_credential(*voter, 0)?;
                self.e.cast_with(&fake, candidate)
            }
            Action::OutsiderCast { candidate } => self.outsider(candidate),
            Action::Abstain { .. } => Ok(()),
            Action::Coerce {
                voter,
                kind,
                real,
                coercer_choice,
            } => {
                let fake = self.e.forge_credential(*voter, 0)?;
                self.coercer_accepts.push(self.e.coercer_accepts(&fake.credential));
                match kind {
                    Coercion::ForcedAbstention => {}
                    Coercion::Randomization => {
                        let ids = &self.e.config().candidates;
                        let pick = match coercer_choice {
                            Some(c) => c.clone(),
                            None => ids[self.rng.gen_range(0..ids.len())].clone(),
                        };
                        self.e.cast_with(&fake, &pick)?;
                    }
                    Coercion::Simulation => {
                        let pick = coercer_choice.as_deref().expect("checked at parse time");
                        self.e.cast_with(&fake, pick)?;
                    }
                }
                match real {
                    Some(c) => self.e.cast(*voter, c),
                    None => Ok(()),
                }
            }
        }
    }

    fn run(&mut self, s: &Scenario) -> Result<(TallyReport, Vec<Verdict>), ProtocolError> {
        let e = &mut self.e;
        e.inject_dispatch_faults(s.faults.corrupt_dispatch);
        e.setup()?;
        e.dispatch()?;
        let mut suppress = BTreeSet::new();
        for v in &s.faults.suppress {
            let held = e
                .voters()
                .get(*v)
                .and_then(|voter| voter.wallet().first())
                .ok_or(ProtocolError::NoCredential { voter: *v, slot: 0 })?;
            suppress.insert(held.hash());
        }
        e.proxy_mut().faults.suppress = suppress;
        e.proxy_mut().faults.wrong_commit_key = s.faults.wrong_commit_key;

        for a in &s.actions {
            self.act(a)?;
        }
        let e = &mut self.e;
        e.trigger_tally()?;
        e.candidates_open()?;
        let withhold: Vec<&str> = s.faults.withhold.iter().map(String::as_str).collect();
        e.publish_secrets(&withhold)?;
        let report = e.tally()?;
        let verdicts = if s.cfg.audit_enabled { e.audit()? } else { Vec::new() };
        Ok((report, verdicts))
    }
}

fn tamper(board: &Board, seqs: &[u64]) -> Board {
    let mut entries = board.entries().to_vec();
    for e in entries.iter_mut().filter(|e| seqs.contains(&e.seq)) {
        match e.payload.first_mut() {
            Some(b) => *b ^= 0x01,
            None => e.entry_hash[0] ^= 0x01,
        }
    }
    Board::from_entries_unchecked(entries)
}

fn pseudonyms_hidden(e: &Election) -> bool {
    let board = e.board();
    e.voters().iter().flat_map(|v| v.wallet()).all(|held| {
        let pk = held.credential.pk.to_bytes();
        // Check each component without the type tag, so no re-framing hides it.
        let parts = [&pk[1..1 + GT_BYTES], &pk[1 + GT_BYTES..]];
        !board
            .entries()
            .iter()
            .any(|entry| parts.iter().any(|p| entry.payload.windows(p.len()).any(|w| w == *p)))
    })
}

fn transactions_distinct(board: &Board) -> bool {
    let mut seen = BTreeSet::new();
    board.of_kind(Kind::Transaction).all(|e| {
        // The ciphertext part, without the timestamp and commitment.
        let len = laocoon_core::pre::CiphertextL1::ENCODED_LEN.min(e.payload.len());
        seen.insert(e.payload[..len].to_vec())
    })
}

/// Runs `s` with `seed` and checks its expectations in order.
pub fn run_scenario(s: &Scenario, seed: u64) -> ScenarioRun {
    let mut driver = match Election::new(s.cfg.clone(), seed) {
        Ok(e) => Driver {
            e,
            rng: ChaCha20Rng::seed_from_u64(seed ^ SCRIPT_STREAM),
            coercer_accepts: Vec::new(),
        },
        Err(err) => {
            let outcome = Outcome {
                report: None,
                error: Some(err.to_string()),
                rejections: Vec::new(),
                verdicts: Vec::new(),
                claims: 0,
                dispatch_rejects: 0,
                coercer_accepts: Vec::new(),
                verification: verify_board(&Board::new()),
                board: Board::new(),
                pseudonyms_hidden: true,
                transactions_distinct: true,
            };
            return ScenarioRun {
                result: check(s, &outcome),
                outcome,
            };
        }
    };
    let (report, verdicts, error) = match driver.run(s) {
        Ok((r, v)) => (Some(r), v, None),
        Err(err) => (None, Vec::new(), Some(err.to_string())),
    };
    let e = &driver.e;
    let board = if s.faults.tamper.is_empty() {
        e.board().clone()
    } else {
        tamper(e.board(), &s.faults.tamper)
    };
    let outcome = Outcome {
        report,
        error,
        rejections: e
            .outcomes()
            .iter()
            .filter_map(|o| match o {
                BallotOutcome::Rejected(r) => Some(r.reason),
                _ => None,
            })
            .collect(),
        verdicts,
        claims: board.of_kind(Kind::Claim).count() as u64,
        dispatch_rejects: e.dispatch_rejects(),
        coercer_accepts: driver.coercer_accepts.clone(),
        verification: verify_board(&board),
        pseudonyms_hidden: pseudonyms_hidden(e),
        transactions_distinct: transactions_distinct(&board),
        board,
    };
    ScenarioRun {
        result: check(s, &outcome),
        outcome,
    }
}

fn check(s: &Scenario, o: &Outcome) -> ScenarioResult {
    let expects_error = s.expected.iter().any(|x| matches!(x, Expectation::Error(_)));
    if let (Some(err), false) = (&o.error, expects_error) {
        return ScenarioResult::Fail {
            expectation: "run completes".into(),
            actual: format!("error {err}"),
        };
    }
    for x in &s.expected {
        if let Some(actual) = mismatch(x, o) {
            return ScenarioResult::Fail {
                expectation: x.to_string(),
                actual,
            };
        }
    }
    ScenarioResult::Pass
}

/// `None` if `x` holds, otherwise what was observed instead.
fn mismatch(x: &Expectation, o: &Outcome) -> Option<String> {
    let eq = |want: u64, got: u64| (want != got).then(|| got.to_string());
    let report = || o.report.as_ref();
    match x {
        Expectation::Count(c, n) => match report() {
            None => Some("no tally".into()),
            Some(r) => match r.count_for(c) {
                None => Some(format!("no count for {c}")),
                Some(got) => eq(*n, got),
            },
        },
        Expectation::Valid(n) => report().map_or(Some("no tally".into()), |r| eq(*n, r.total_valid)),
        Expectation::Unopened(n) => report().map_or(Some("no tally".into()), |r| eq(*n, r.unopened)),
        Expectation::Rejected(reason, n) => {
            eq(*n, o.rejections.iter().filter(|r| *r == reason).count() as u64)
        }
        Expectation::Claims(n) => eq(*n, o.claims),
        Expectation::VerdictsVerified(n) => {
            eq(*n as u64, o.verdicts.iter().filter(|v| v.verified).count() as u64)
        }
        Expectation::VerdictsFailed(n) => {
            eq(*n as u64, o.verdicts.iter().filter(|v| !v.verified).count() as u64)
        }
        Expectation::ChainReject(seq) => match o.verification.chain_reject {
            Some(got) if got == *seq => None,
            Some(got) => Some(format!("chain rejected at {got}")),
            None => Some("chain verifies".into()),
        },
        Expectation::Verify(want) => (o.verification.accepted != *want).then(|| o.verification.summary()),
        Expectation::CoercerAccepts(want) => {
            if o.coercer_accepts.is_empty() {
                Some("no coercion happened".into())
            } else if o.coercer_accepts.iter().all(|a| a == want) {
                None
            } else {
                Some(format!("{:?}", o.coercer_accepts))
            }
        }
        Expectation::Error(prefix) => match &o.error {
            Some(err) if err.starts_with(prefix.as_str()) => None,
            Some(err) => Some(format!("error {err}")),
            None => Some("no error".into()),
        },
        Expectation::PseudonymsHidden => (!o.pseudonyms_hidden).then(|| "a pseudonym key is on the board".into()),
        Expectation::TransactionsDistinct => {
            (!o.transactions_distinct).then(|| "two identical transactions".into())
        }
        Expectation::DispatchRejects(n) => eq(*n as u64, o.dispatch_rejects as u64),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_directive() {
        let s = parse_scenario(
            "laocoon-scenario v1\nname all\nseed 3\nvoters 4\ncandidates A B\naudit on\n\
             cast 0 A\ndouble-cast 1 B\nforge-credential-cast 2 A\noutsider-cast B\nabstain 3\n\
             coerce-and-forge 3 simulation A B\nwithhold-key B\nsuppress-ballot 0\nwrong-commit-key\n\
             corrupt-dispatch 1\ntamper-board 5\n\
             expect count A 1\nexpect valid 1\nexpect unopened 0\nexpect rejected used-credential 1\n\
             expect claims 0\nexpect verdicts-verified 2\nexpect verdicts-failed 0\nexpect chain-reject 5\n\
             expect verify reject\nexpect coercer-accepts yes\nexpect pseudonyms-hidden\n\
             expect transactions-distinct\nexpect dispatch-rejects 1\n",
        )
        .unwrap();
        assert_eq!(s.name, "all");
        assert_eq!(s.seed, Some(3));
        assert!(s.cfg.audit_enabled);
        assert_eq!(s.actions.len(), 6);
        assert_eq!(s.expected.len(), 13);
        assert_eq!(s.faults.tamper, vec![5]);
        // Display round-trips through the parser.
        for x in &s.expected {
            let text = x.to_string();
            let words: Vec<&str> = text.split_whitespace().collect();
            assert_eq!(&parse_expectation(1, &words[1..]).unwrap(), x);
        }
    }

    #[test]
    fn rejects_bad_references() {
        let bad_voter = "laocoon-scenario v1\nvoters 2\ncast 2 C1\n";
        assert!(matches!(parse_scenario(bad_voter), Err(ParseError::Line { line: 3, .. })));
        let bad_cand = "laocoon-scenario v1\ncast 0 C9\n";
        assert!(matches!(parse_scenario(bad_cand), Err(ParseError::Line { line: 2, .. })));
        let sim = "laocoon-scenario v1\ncoerce-and-forge 0 simulation C1\n";
        assert!(matches!(parse_scenario(sim), Err(ParseError::Line { line: 2, .. })));
        assert!(parse_scenario("laocoon-scenario v1\nfly 1\n").is_err());
    }
}
