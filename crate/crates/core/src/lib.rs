//! Receipt-free remote voting built on key-private proxy re-encryption.
//!
//! Voters cast re-encryption keys as ballots; a proxy turns an encrypted
//! timestamp into a voting transaction only the chosen candidate can open.

pub mod bulletin;
pub mod envelope;
pub mod groups;
pub mod mdvs;
pub mod pre;
pub mod protocol;
pub mod wire;
