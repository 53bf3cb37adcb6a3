//! Whole elections from a config, a vote list and a seed.

use std::path::Path;

use laocoon_core::protocol::{Election, ElectionConfig, ProtocolError, TallyReport, Verdict};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

pub const REPORT_HEADER: &str = "laocoon-report v1";

/// Keeps vote generation off the election's own random stream.
const VOTE_STREAM: u64 = 0x766f_7465_7321;

#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    /// Candidates scan the board on one thread each.
    pub concurrent: bool,
}

pub struct RunOutput {
    pub election: Election,
    pub report: TallyReport,
    /// Empty unless the config enables the audit.
    pub verdicts: Vec<Verdict>,
}

/// Every voter picks a candidate uniformly at random.
pub fn random_votes(candidates: &[String], voters: usize, seed: u64) -> Vec<Option<String>> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed ^ VOTE_STREAM);
    (0..voters)
        .map(|_| Some(candidates[rng.gen_range(0..candidates.len())].clone()))
        .collect()
}

/// Parses `C1,C2,-,C1`; `-` abstains.
pub fn parse_votes(s: &str) -> Vec<Option<String>> {
    s.split(',')
        .map(str::trim)
        .map(|v| (v != "-").then(|| v.to_string()))
        .collect()
}

/// All five phases: setup, dispatch, one first-slot cast per entry of
/// `votes`, opening, tally, and the audit if enabled.
pub fn run_election(
    cfg: &ElectionConfig,
    votes: &[Option<String>],
    seed: u64,
    opts: RunOptions,
) -> Result<RunOutput, ProtocolError> {
    let mut e = Election::new(cfg.clone(), seed)?;
    e.setup()?;
    e.dispatch()?;
    for (v, choice) in votes.iter().enumerate() {
        if let Some(c) = choice {
            e.cast(v, c)?;
        }
    }
    e.trigger_tally()?;
    if opts.concurrent {
        e.candidates_open_concurrent()?;
    } else {
        e.candidates_open()?;
    }
    e.publish_secrets(&[])?;
    let report = e.tally()?;
    let verdicts = if cfg.audit_enabled { e.audit()? } else { Vec::new() };
    Ok(RunOutput {
        election: e,
        report,
        verdicts,
    })
}

pub fn report_text(report: &TallyReport) -> String {
    let mut out = format!("{REPORT_HEADER}\n");
    for (id, n) in &report.counts {
        out += &format!("count {id} {n}\n");
    }
    out += &format!("valid {}\n", report.total_valid);
    out += &format!("unopened {}\n", report.unopened);
    let r = &report.rejected;
    out += &format!("rejected unknown-credential {}\n", r.unknown_credential);
    out += &format!("rejected used-credential {}\n", r.used_credential);
    out += &format!("rejected invalid-ballot {}\n", r.invalid_ballot);
    out
}

#[derive(Serialize)]
struct ReportJson<'a> {
    counts: Vec<(&'a str, u64)>,
    total_valid: u64,
    unopened: u64,
    rejected_unknown_credential: u64,
    rejected_used_credential: u64,
    rejected_invalid_ballot: u64,
}

pub fn report_json(report: &TallyReport) -> String {
    let r = &report.rejected;
    let j = ReportJson {
        counts: report.counts.iter().map(|(id, n)| (id.as_str(), *n)).collect(),
        total_valid: report.total_valid,
        unopened: report.unopened,
        rejected_unknown_credential: r.unknown_credential,
        rejected_used_credential: r.used_credential,
        rejected_invalid_ballot: r.invalid_ballot,
    };
    serde_json::to_string_pretty(&j).expect("plain data serializes")
}

/// Writes the board, `<report>` (text) and `<report>.json`.
pub fn write_outputs(out: &RunOutput, board: &Path, report: &Path) -> std::io::Result<()> {
    out.election.board().persist(board)?;
    std::fs::write(report, report_text(&out.report))?;
    let mut json = report.as_os_str().to_owned();
    json.push(".json");
    std::fs::write(json, report_json(&out.report))
}
