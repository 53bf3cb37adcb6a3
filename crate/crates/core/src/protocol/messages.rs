//! Payloads carried on the board and over direct channels.

use crate::envelope::Commitment;
use crate::groups::{sha256, GroupContext, Scalar, G1};
use crate::mdvs::{MdvsSignature, SchnorrSignature};
use crate::pre::{CiphertextL1, PreKeyPair, PrePublicKey, ReKey};
use crate::wire::{self, DecodeError, Reader};

fn put_str(out: &mut Vec<u8>, s: &str) {
    wire::put_bytes(out, s.as_bytes());
}

fn read_str(r: &mut Reader<'_>) -> Result<String, DecodeError> {
    String::from_utf8(r.bytes()?.to_vec()).map_err(|_| DecodeError::Invalid("utf-8 string"))
}

fn decode_all<T>(bytes: &[u8], f: impl FnOnce(&mut Reader<'_>) -> Result<T, DecodeError>) -> Result<T, DecodeError> {
    let mut r = Reader::new(bytes);
    let v = f(&mut r)?;
    r.finish()?;
    Ok(v)
}

/// Administrator's long-term keys, self-signed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdminCertificate {
    pub pre_pk: PrePublicKey,
    pub dv_pk: G1,
    pub sig: SchnorrSignature,
}

impl AdminCertificate {
    pub fn signed_message(pre_pk: &PrePublicKey, dv_pk: &G1) -> Vec<u8> {
        let mut m = b"laocoon/admin-cert/v1".to_vec();
        m.extend_from_slice(&pre_pk.to_bytes());
        m.extend_from_slice(&dv_pk.to_bytes());
        m
    }

    pub fn verify(&self, ctx: &GroupContext) -> bool {
        self.sig
            .verify(ctx, &self.dv_pk, &Self::signed_message(&self.pre_pk, &self.dv_pk))
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = self.pre_pk.to_bytes();
        out.extend_from_slice(&self.dv_pk.to_bytes());
        out.extend_from_slice(&self.sig.to_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, DecodeError> {
        decode_all(bytes, |r| {
            Ok(AdminCertificate {
                pre_pk: PrePublicKey::read(r)?,
                dv_pk: G1::read(r)?,
                sig: SchnorrSignature::read(r)?,
            })
        })
    }
}

/// One element of the re-key vector: the registered voter's public keys and
/// `rk_{A -> V_j}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RekeyListEntry {
    pub voter: u32,
    pub voter_pre: PrePublicKey,
    pub voter_dv: G1,
    pub rekey: ReKey,
}

impl RekeyListEntry {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = self.voter.to_be_bytes().to_vec();
        out.extend_from_slice(&self.voter_pre.to_bytes());
        out.extend_from_slice(&self.voter_dv.to_bytes());
        out.extend_from_slice(&self.rekey.to_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, DecodeError> {
        decode_all(bytes, |r| {
            Ok(RekeyListEntry {
                voter: r.u32()?,
                voter_pre: PrePublicKey::read(r)?,
                voter_dv: G1::read(r)?,
                rekey: ReKey::read(r)?,
            })
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateKeyEntry {
    pub id: String,
    pub pk: PrePublicKey,
}

impl CandidateKeyEntry {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        put_str(&mut out, &self.id);
        out.extend_from_slice(&self.pk.to_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, DecodeError> {
        decode_all(bytes, |r| {
            Ok(CandidateKeyEntry {
                id: read_str(r)?,
                pk: PrePublicKey::read(r)?,
            })
        })
    }
}

/// A candidate's secret key, published at tally time together with its id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateSecret {
    pub id: String,
    pub sk1: Scalar,
    pub sk2: Scalar,
}

impl CandidateSecret {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        put_str(&mut out, &self.id);
        out.extend_from_slice(&self.sk1.to_bytes());
        out.extend_from_slice(&self.sk2.to_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, DecodeError> {
        decode_all(bytes, |r| {
            let id = read_str(r)?;
            let (sk1, sk2) = PreKeyPair::read_secret(r)?;
            Ok(CandidateSecret { id, sk1, sk2 })
        })
    }
}

/// `sigma_i = (PK_i, s_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Credential {
    pub pk: PrePublicKey,
    pub sig: MdvsSignature,
}

impl Credential {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = self.pk.to_bytes();
        out.extend_from_slice(&self.sig.to_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, DecodeError> {
        decode_all(bytes, Self::read)
    }

    pub fn encoded_len(&self) -> usize {
        PrePublicKey::ENCODED_LEN + MdvsSignature::encoded_len(self.sig.ring.len())
    }

    fn read(r: &mut Reader<'_>) -> Result<Self, DecodeError> {
        Ok(Credential {
            pk: PrePublicKey::read(r)?,
            sig: MdvsSignature::read(r)?,
        })
    }

    /// `h_i = SHA-256(serialize(sigma_i))`.
    pub fn hash(&self) -> [u8; 32] {
        sha256(&self.to_bytes())
    }
}

/// Plaintext of a dispatched credential ciphertext: `(SK_i, sigma_i)`.
#[derive(Clone, Debug)]
pub struct CredentialBundle {
    pub secret: PreKeyPair,
    pub credential: Credential,
}

impl CredentialBundle {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = self.secret.secret_bytes().to_vec();
        out.extend_from_slice(&self.credential.to_bytes());
        out
    }

    /// The secret halves are paired with the credential's public key as
    /// carried; no consistency check is made here.
    pub fn from_bytes(bytes: &[u8]) -> Result<Self, DecodeError> {
        decode_all(bytes, |r| {
            let (sk1, sk2) = PreKeyPair::read_secret(r)?;
            let credential = Credential::read(r)?;
            Ok(CredentialBundle {
                secret: PreKeyPair::from_parts(credential.pk, sk1, sk2),
                credential,
            })
        })
    }
}

/// The full credential list `L_sigma` handed to the proxy.
pub fn encode_credential_list(list: &[Credential]) -> Vec<u8> {
    let mut out = (list.len() as u32).to_be_bytes().to_vec();
    for c in list {
        wire::put_bytes(&mut out, &c.to_bytes());
    }
    out
}

pub fn decode_credential_list(bytes: &[u8]) -> Result<Vec<Credential>, DecodeError> {
    decode_all(bytes, |r| {
        let n = r.u32()? as usize;
        (0..n).map(|_| Credential::from_bytes(r.bytes()?)).collect()
    })
}

/// `m_l = (Ballot, h_i)`, submitted anonymously.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BallotMessage {
    pub ballot: ReKey,
    pub cred_hash: [u8; 32],
}

impl BallotMessage {
    pub const ENCODED_LEN: usize = ReKey::ENCODED_LEN + 32;

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = self.ballot.to_bytes();
        out.extend_from_slice(&self.cred_hash);
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, DecodeError> {
        decode_all(bytes, |r| {
            Ok(BallotMessage {
                ballot: ReKey::read(r)?,
                cred_hash: r.array()?,
            })
        })
    }
}

/// `(delta', Stp, [beta])` as published by the proxy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VotingTransaction {
    pub delta: CiphertextL1,
    pub stp: u64,
    pub commitment: Option<Commitment>,
}

impl VotingTransaction {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = self.delta.to_bytes();
        out.extend_from_slice(&self.stp.to_be_bytes());
        match &self.commitment {
            Some(c) => {
                out.push(1);
                out.extend_from_slice(&c.digest);
            }
            None => out.push(0),
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, DecodeError> {
        decode_all(bytes, |r| {
            let delta = CiphertextL1::read(r)?;
            let stp = r.u64()?;
            let commitment = match r.u8()? {
                0 => None,
                1 => Some(Commitment { digest: r.array()? }),
                _ => return Err(DecodeError::Invalid("commitment flag")),
            };
            Ok(VotingTransaction { delta, stp, commitment })
        })
    }
}

/// Aggregate rejection counts. Individual rejections stay with the proxy.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RejectionCounts {
    pub unknown_credential: u64,
    pub used_credential: u64,
    pub invalid_ballot: u64,
}

impl RejectionCounts {
    pub fn total(&self) -> u64 {
        self.unknown_credential + self.used_credential + self.invalid_ballot
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TallyReport {
    /// In candidate-slate order.
    pub counts: Vec<(String, u64)>,
    pub total_valid: u64,
    pub rejected: RejectionCounts,
    pub unopened: u64,
}

impl TallyReport {
    pub fn count_for(&self, id: &str) -> Option<u64> {
        self.counts.iter().find(|(c, _)| c == id).map(|(_, n)| *n)
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = (self.counts.len() as u32).to_be_bytes().to_vec();
        for (id, n) in &self.counts {
            put_str(&mut out, id);
            out.extend_from_slice(&n.to_be_bytes());
        }
        for v in [
            self.total_valid,
            self.unopened,
            self.rejected.unknown_credential,
            self.rejected.used_credential,
            self.rejected.invalid_ballot,
        ] {
            out.extend_from_slice(&v.to_be_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, DecodeError> {
        decode_all(bytes, |r| {
            let n = r.u32()? as usize;
            let counts = (0..n)
                .map(|_| Ok((read_str(r)?, r.u64()?)))
                .collect::<Result<Vec<_>, DecodeError>>()?;
            Ok(TallyReport {
                counts,
                total_valid: r.u64()?,
                unopened: r.u64()?,
                rejected: RejectionCounts {
                    unknown_credential: r.u64()?,
                    used_credential: r.u64()?,
                    invalid_ballot: r.u64()?,
                },
            })
        })
    }
}

impl std::fmt::Display for TallyReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (id, n) in &self.counts {
            writeln!(f, "{id}: {n}")?;
        }
        writeln!(f, "total valid: {}", self.total_valid)?;
        writeln!(f, "unopened: {}", self.unopened)?;
        write!(
            f,
            "rejected: {} (unknown credential {}, used credential {}, invalid ballot {})",
            self.rejected.total(),
            self.rejected.unknown_credential,
            self.rejected.used_credential,
            self.rejected.invalid_ballot
        )
    }
}

/// Phase-separation notice posted by the administrator.
pub fn phase_marker(label: &str) -> Vec<u8> {
    label.as_bytes().to_vec()
}
