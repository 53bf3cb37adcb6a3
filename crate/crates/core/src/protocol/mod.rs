//! The election: administrator, proxy, voters and candidates exchanging
//! messages through the bulletin board and direct channels.
//!
//! Every error carries the protocol step it arose in (`S1`, `C5`, `B6`, ...)
//! so harness output can be matched against the step list.

pub mod admin;
pub mod candidate;
pub mod config;
pub mod election;
pub mod messages;
pub mod metrics;
pub mod mix;
pub mod proxy;
pub mod tally;
pub mod voter;

use thiserror::Error;

use crate::bulletin::{AppendError, Kind};
use crate::envelope::EnvelopeError;
use crate::groups::GroupError;
use crate::mdvs::MdvsError;
use crate::wire::DecodeError;

pub use admin::{Administrator, VoterRecord};
pub use candidate::Candidate;
pub use config::{ConfigError, ElectionConfig};
pub use election::{Election, Verdict};
pub use messages::{
    AdminCertificate, BallotMessage, CandidateKeyEntry, CandidateSecret, Credential, RejectionCounts,
    TallyReport, VotingTransaction,
};
pub use metrics::{Activity, ActivityStats, Metrics};
pub use mix::MixChannel;
pub use proxy::{BallotOutcome, CredentialTable, Proxy, ProxyFaults, RejectReason, Rejection};
pub use tally::{recount, BoardView, Recount};
pub use voter::{make_ballot, verify_credential, HeldCredential, Voter, VoterRegistry};

#[derive(Debug, Error)]
pub enum ProtocolError {
    #[error("S1: duplicate-setup: board already holds {0} entries")]
    DuplicateSetup(usize),
    #[error("{step}: {source}")]
    Board {
        step: &'static str,
        #[source]
        source: AppendError,
    },
    #[error("C2: signing failed: {0}")]
    Signing(#[source] MdvsError),
    #[error("{step}: {} ({source})", source.code())]
    Envelope {
        step: &'static str,
        #[source]
        source: EnvelopeError,
    },
    #[error("C5: exhausted-index: no unused voter index left for credential {0}")]
    ExhaustedIndex(usize),
    #[error("{0}: malformed payload in entry {1}: {2}")]
    Malformed(&'static str, u64, #[source] DecodeError),
    #[error("B1: {} ({source})", source.code())]
    Receive {
        #[source]
        source: EnvelopeError,
    },
    #[error("B2: invalid-credential")]
    InvalidCredential,
    #[error("voter {voter} holds no credential in slot {slot}")]
    NoCredential { voter: usize, slot: usize },
    #[error("voter {0} is not designated in the credential's signature ring")]
    NotDesignated(usize),
    #[error("no voter with index {0}")]
    UnknownVoter(usize),
    #[error("B3: unknown-candidate {0:?}")]
    UnknownCandidate(String),
    #[error("board has no {0} entry")]
    MissingEntry(Kind),
    #[error("board holds more than one {0} entry")]
    DuplicateEntry(Kind),
    #[error("published secret for candidate {0:?} does not match its public key")]
    BadCandidateSecret(String),
    #[error("tally: ambiguous-transaction: entry {0} opens under more than one key")]
    AmbiguousTransaction(u64),
    #[error("tally: the tally trigger has not been posted")]
    TallyNotTriggered,
    #[error("audit: auditing is disabled for this election")]
    AuditDisabled,
    #[error("audit: no tally result on the board")]
    TallyMissing,
    #[error("invalid configuration: {0}")]
    Config(#[from] ConfigError),
    #[error("group setup: {0}")]
    Group(#[from] GroupError),
}
