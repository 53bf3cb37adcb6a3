//! Open audit of a board file: chain, certificate, and a fresh run of the
//! tallying script compared with the published result.

use std::path::Path;

use laocoon_core::bulletin::{Board, LoadError};
use laocoon_core::protocol::{recount, BoardView};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verification {
    pub accepted: bool,
    pub entries: usize,
    /// First entry whose hash link is broken.
    pub chain_reject: Option<u64>,
    /// Reasons for rejection; empty iff accepted.
    pub problems: Vec<String>,
    /// Things worth knowing that do not make the board wrong.
    pub notes: Vec<String>,
}

impl Verification {
    pub fn summary(&self) -> String {
        let mut out = format!(
            "{} ({} entries)\n",
            if self.accepted { "accept" } else { "reject" },
            self.entries
        );
        for p in &self.problems {
            out += &format!("  problem: {p}\n");
        }
        for n in &self.notes {
            out += &format!("  note: {n}\n");
        }
        out
    }
}

fn seqs(v: &[u64]) -> String {
    v.iter().map(u64::to_string).collect::<Vec<_>>().join(", ")
}

pub fn verify_board(board: &Board) -> Verification {
    let mut v = Verification {
        accepted: false,
        entries: board.len(),
        chain_reject: None,
        problems: Vec::new(),
        notes: Vec::new(),
    };
    if let Err(e) = board.verify_chain() {
        v.chain_reject = Some(e.seq);
        v.problems.push(format!("chain broken at entry {}: {}", e.seq, e.reason));
        return v;
    }
    let view = match BoardView::read(board) {
        Ok(view) => view,
        Err(e) => {
            v.problems.push(format!("unreadable board: {e}"));
            return v;
        }
    };
    if !view.admin.verify(&view.ctx) {
        v.problems.push("administrator certificate does not verify".into());
    }
    let Some((tally_seq, published)) = &view.tally else {
        v.problems.push("no tally result on the board".into());
        return v;
    };
    let rc = match recount(&view) {
        Ok(rc) => rc,
        Err(e) => {
            v.problems.push(format!("tallying script failed: {e}"));
            return v;
        }
    };

    for id in &rc.orphan_secrets {
        v.problems.push(format!(
            "candidate {id:?} published a secret key but no public key entry exists; \
             its transactions cannot be attributed"
        ));
    }
    if !rc.unopened.is_empty() {
        let why = if !rc.orphan_secrets.is_empty() {
            format!("missing candidate-key entry for {}", rc.orphan_secrets.join(", "))
        } else if !rc.withheld.is_empty() {
            format!("withheld secret keys: {}", rc.withheld.join(", "))
        } else {
            "no published key opens them".to_string()
        };
        let msg = format!("{} unopened transactions (entries {}): {why}", rc.unopened.len(), seqs(&rc.unopened));
        if rc.orphan_secrets.is_empty() && !rc.withheld.is_empty() {
            v.notes.push(msg);
        } else {
            v.problems.push(msg);
        }
    }

    for (id, n) in &rc.counts {
        match published.count_for(id) {
            Some(p) if p == *n => {}
            Some(p) => v.problems.push(format!(
                "candidate {id:?}: tally entry {tally_seq} says {p}, board recount gives {n}"
            )),
            None => v
                .problems
                .push(format!("candidate {id:?}: missing from tally entry {tally_seq} (recount {n})")),
        }
    }
    for (id, p) in &published.counts {
        if !rc.counts.iter().any(|(c, _)| c == id) {
            v.problems
                .push(format!("candidate {id:?}: tally entry claims {p} votes for an unregistered candidate"));
        }
    }
    if published.total_valid != rc.total_valid {
        v.problems.push(format!(
            "total valid: tally entry says {}, recount gives {}",
            published.total_valid, rc.total_valid
        ));
    }
    if published.unopened != rc.unopened.len() as u64 {
        v.problems.push(format!(
            "unopened: tally entry says {}, recount gives {}",
            published.unopened,
            rc.unopened.len()
        ));
    }

    // Every ballot on the board ends as a transaction or a counted rejection.
    let processed = view.transactions.len() as u64 + published.rejected.total();
    if view.ballots as u64 != processed {
        v.problems.push(format!(
            "{} ballots posted but {} transactions plus {} rejections: {} ballots vanished",
            view.ballots,
            view.transactions.len(),
            published.rejected.total(),
            view.ballots as i64 - processed as i64
        ));
    }
    if !view.claims.is_empty() {
        let at: Vec<u64> = view.claims.iter().map(|(s, _)| *s).collect();
        v.problems
            .push(format!("{} audit claims filed (entries {})", at.len(), seqs(&at)));
    }
    if view.commit_key.is_some() {
        v.notes.push("audit commitment key published".into());
    }
    v.accepted = v.problems.is_empty();
    v
}

/// Loads without trusting the chain, so a broken link is reported with its
/// position rather than as a parse error.
pub fn verify_board_file(path: impl AsRef<Path>) -> Result<Verification, LoadError> {
    let text = std::fs::read_to_string(path)?;
    Ok(verify_board(&Board::parse_unverified(&text)?))
}
