//! Per-activity operation counts and wall time.

use std::collections::BTreeMap;
use std::fmt;
use std::time::{Duration, Instant};

use crate::groups::OpCounter;

/// Who did what. Each variant is one entity in one phase of the election.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Activity {
    AdminSetup,
    CandidateSetup,
    AdminDispatch,
    ProxyDispatch,
    /// Transfer of the full credential list to the proxy, once per election.
    CredentialList,
    VoterReceive,
    VoterCast,
    ProxyCast,
    CandidateOpen,
    Tally,
    Audit,
}

impl Activity {
    pub const ALL: [Activity; 11] = [
        Activity::AdminSetup,
        Activity::CandidateSetup,
        Activity::AdminDispatch,
        Activity::ProxyDispatch,
        Activity::CredentialList,
        Activity::VoterReceive,
        Activity::VoterCast,
        Activity::ProxyCast,
        Activity::CandidateOpen,
        Activity::Tally,
        Activity::Audit,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Activity::AdminSetup => "admin/setup",
            Activity::CandidateSetup => "candidate/setup",
            Activity::AdminDispatch => "admin/dispatch",
            Activity::ProxyDispatch => "proxy/dispatch",
            Activity::CredentialList => "admin+proxy/credential-list",
            Activity::VoterReceive => "voter/receive",
            Activity::VoterCast => "voter/cast",
            Activity::ProxyCast => "proxy/cast",
            Activity::CandidateOpen => "candidate/open",
            Activity::Tally => "tally/script",
            Activity::Audit => "audit",
        }
    }
}

impl fmt::Display for Activity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ActivityStats {
    pub ops: OpCounter,
    /// Number of recorded invocations.
    pub events: u64,
    pub wall: Duration,
    /// Slowest single invocation.
    pub max_wall: Duration,
    /// Serialized size of the messages this activity sent.
    pub bytes: u64,
    pub messages: u64,
}

#[derive(Debug, Clone, Default)]
pub struct Metrics {
    cells: BTreeMap<Activity, ActivityStats>,
}

impl Metrics {
    /// Runs `f`, charging its operations and time to `activity`.
    pub fn record<T>(&mut self, activity: Activity, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let (out, ops) = OpCounter::measure(f);
        self.add(activity, ops, start.elapsed());
        out
    }

    pub fn add(&mut self, activity: Activity, ops: OpCounter, wall: Duration) {
        let cell = self.cells.entry(activity).or_default();
        cell.ops += ops;
        cell.events += 1;
        cell.wall += wall;
        cell.max_wall = cell.max_wall.max(wall);
    }

    /// Charges one outgoing message of `len` bytes to `activity`.
    pub fn add_message(&mut self, activity: Activity, len: usize) {
        let cell = self.cells.entry(activity).or_default();
        cell.bytes += len as u64;
        cell.messages += 1;
    }

    pub fn get(&self, activity: Activity) -> ActivityStats {
        self.cells.get(&activity).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Activity, ActivityStats)> + '_ {
        self.cells.iter().map(|(a, s)| (*a, *s))
    }

    pub fn total(&self) -> OpCounter {
        self.cells.values().fold(OpCounter::ZERO, |acc, c| acc + c.ops)
    }
}
