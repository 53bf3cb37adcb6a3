//! Brute-force recount from the vote script alone.
//!
//! This knows nothing about keys, ciphertexts or the board. It replays what
//! each participant did and applies the counting rules directly: a genuine
//! credential counts the first time it is used, anything else never counts.
//! It assumes ballots are processed in submission order, which holds for a
//! mix window of 1 or when repeat casts carry the same choice.

use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Submission {
    /// Voter `voter` used its credential number `slot`.
    Genuine { voter: usize, slot: usize, choice: String },
    /// A credential the proxy never issued: forged or made up.
    Foreign { choice: String },
}

#[derive(Debug, Clone, Default)]
pub struct Replay {
    pub candidates: Vec<String>,
    pub submissions: Vec<Submission>,
    /// `(voter, slot)` pairs whose ballot the proxy drops after accepting it.
    pub suppressed: BTreeSet<(usize, usize)>,
    /// Candidates that never reveal their key.
    pub withheld: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OracleTally {
    pub counts: Vec<(String, u64)>,
    pub unopened: u64,
    pub used_credential: u64,
    pub unknown_credential: u64,
}

impl Replay {
    pub fn new(candidates: &[String]) -> Self {
        Replay {
            candidates: candidates.to_vec(),
            ..Default::default()
        }
    }

    /// One genuine first-slot vote per entry; `None` abstains.
    pub fn from_votes(candidates: &[String], votes: &[Option<String>]) -> Self {
        let mut r = Replay::new(candidates);
        for (voter, v) in votes.iter().enumerate() {
            if let Some(choice) = v {
                r.submissions.push(Submission::Genuine {
                    voter,
                    slot: 0,
                    choice: choice.clone(),
                });
            }
        }
        r
    }

    pub fn tally(&self) -> OracleTally {
        let mut counts: BTreeMap<&str, u64> = self.candidates.iter().map(|c| (c.as_str(), 0)).collect();
        let mut used = BTreeSet::new();
        let mut out = OracleTally::default();
        for s in &self.submissions {
            match s {
                Submission::Foreign { .. } => out.unknown_credential += 1,
                Submission::Genuine { voter, slot, choice } => {
                    if !used.insert((*voter, *slot)) {
                        out.used_credential += 1;
                    } else if self.suppressed.contains(&(*voter, *slot)) {
                        // accepted, then silently dropped
                    } else if self.withheld.contains(choice) {
                        out.unopened += 1;
                    } else if let Some(n) = counts.get_mut(choice.as_str()) {
                        *n += 1;
                    }
                }
            }
        }
        out.counts = self
            .candidates
            .iter()
            .map(|c| (c.clone(), counts[c.as_str()]))
            .collect();
        out
    }
}
