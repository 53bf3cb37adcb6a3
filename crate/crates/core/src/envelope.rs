//! Hybrid encryption over the PRE scheme and the hash commitment used by the
//! audit extension.
//!
//! The PRE plaintext space is G_T, so arbitrary payloads are wrapped: a random
//! `m = Z^s` is PRE-encrypted (KEM) and the payload is sealed with
//! ChaCha20-Poly1305 under `SHA-256(m)` (DEM). Re-encryption touches only the
//! KEM; the DEM bytes travel unchanged.

use chacha20poly1305::aead::{Aead, KeyInit};
use chacha20poly1305::{ChaCha20Poly1305, Key, Nonce};
use rand::{CryptoRng, RngCore};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::groups::{GroupContext, Gt, Scalar};
use crate::pre::{self, CiphertextL1, CiphertextL2, PreKeyPair, PrePublicKey, ReKey};
use crate::wire::{self, DecodeError, Reader};

pub const MAX_PAYLOAD: usize = 1 << 20;
const KEY_DOMAIN: &[u8] = b"laocoon/dem-key/v1";
const NONCE_DOMAIN: &[u8] = b"laocoon/dem-nonce/v1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnvelopeError {
    #[error("KEM ciphertext failed its validity check")]
    KemInvalid,
    #[error("DEM authentication failed")]
    DemAuthFailed,
    #[error("expected a level-{expected} ciphertext, got level {found}")]
    WrongLevel { expected: u8, found: u8 },
    #[error("payload must be non-empty")]
    EmptyPayload,
    #[error("payload of {0} bytes exceeds the 1 MiB limit")]
    PayloadTooLarge(usize),
}

impl EnvelopeError {
    /// Short stable identifier, used in protocol error messages.
    pub fn code(&self) -> &'static str {
        match self {
            EnvelopeError::KemInvalid => "kem-invalid",
            EnvelopeError::DemAuthFailed => "dem-auth-failed",
            EnvelopeError::WrongLevel { .. } => "wrong-level",
            EnvelopeError::EmptyPayload => "empty-payload",
            EnvelopeError::PayloadTooLarge(_) => "payload-too-large",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Kem {
    Level2(CiphertextL2),
    Level1(CiphertextL1),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HybridCiphertext {
    pub kem: Kem,
    pub dem: Vec<u8>,
}

impl HybridCiphertext {
    pub fn level(&self) -> u8 {
        match self.kem {
            Kem::Level2(_) => 2,
            Kem::Level1(_) => 1,
        }
    }

    /// `[HYBRID tag][level][kem bytes][u32 dem len][dem]`.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = vec![wire::tag::HYBRID, self.level()];
        match &self.kem {
            Kem::Level2(c) => out.extend_from_slice(&c.to_bytes()),
            Kem::Level1(c) => out.extend_from_slice(&c.to_bytes()),
        }
        wire::put_bytes(&mut out, &self.dem);
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, DecodeError> {
        let mut r = Reader::new(bytes);
        r.expect_tag(wire::tag::HYBRID)?;
        let kem = match r.u8()? {
            2 => Kem::Level2(CiphertextL2::read(&mut r)?),
            1 => Kem::Level1(CiphertextL1::read(&mut r)?),
            _ => return Err(DecodeError::Invalid("hybrid level")),
        };
        let dem = r.bytes()?;
        if dem.len() > MAX_PAYLOAD + 16 {
            return Err(DecodeError::Length(dem.len()));
        }
        let dem = dem.to_vec();
        r.finish()?;
        Ok(HybridCiphertext { kem, dem })
    }
}

fn dem_cipher(m: &Gt) -> (ChaCha20Poly1305, Nonce) {
    let m_bytes = m.to_bytes();
    let key: [u8; 32] = Sha256::new()
        .chain_update(KEY_DOMAIN)
        .chain_update(m_bytes)
        .finalize()
        .into();
    let nonce_full = Sha256::new()
        .chain_update(NONCE_DOMAIN)
        .chain_update(m_bytes)
        .finalize();
    (
        ChaCha20Poly1305::new(Key::from_slice(&key)),
        *Nonce::from_slice(&nonce_full[..12]),
    )
}

pub fn hybrid_enc<R: RngCore + CryptoRng>(
    ctx: &GroupContext,
    pk: &PrePublicKey,
    payload: &[u8],
    rng: &mut R,
) -> Result<HybridCiphertext, EnvelopeError> {
    if payload.is_empty() {
        return Err(EnvelopeError::EmptyPayload);
    }
    if payload.len() > MAX_PAYLOAD {
        return Err(EnvelopeError::PayloadTooLarge(payload.len()));
    }
    let m = ctx.encode(&Scalar::random(rng));
    let kem = pre::enc2(ctx, pk, &m, rng);
    let (cipher, nonce) = dem_cipher(&m);
    let dem = cipher
        .encrypt(&nonce, payload)
        .expect("payload within AEAD limits");
    Ok(HybridCiphertext {
        kem: Kem::Level2(kem),
        dem,
    })
}

pub fn hybrid_reenc<R: RngCore + CryptoRng>(
    ctx: &GroupContext,
    rk: &ReKey,
    c: &HybridCiphertext,
    rng: &mut R,
) -> Result<HybridCiphertext, EnvelopeError> {
    let Kem::Level2(kem) = &c.kem else {
        return Err(EnvelopeError::WrongLevel {
            expected: 2,
            found: c.level(),
        });
    };
    let kem = pre::reenc(ctx, rk, kem, rng).map_err(|_| EnvelopeError::KemInvalid)?;
    Ok(HybridCiphertext {
        kem: Kem::Level1(kem),
        dem: c.dem.clone(),
    })
}

pub fn hybrid_dec(
    ctx: &GroupContext,
    sk: &PreKeyPair,
    c: &HybridCiphertext,
) -> Result<Vec<u8>, EnvelopeError> {
    let m = match &c.kem {
        Kem::Level2(kem) => pre::dec2(ctx, sk, kem).map_err(|_| EnvelopeError::KemInvalid)?,
        Kem::Level1(kem) => pre::dec1(sk, kem),
    };
    let (cipher, nonce) = dem_cipher(&m);
    cipher
        .decrypt(&nonce, c.dem.as_slice())
        .map_err(|_| EnvelopeError::DemAuthFailed)
}

/// `SHA-256(k || payload)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Commitment {
    pub digest: [u8; 32],
}

pub fn commit(k: &[u8; 32], payload: &[u8]) -> Commitment {
    Commitment {
        digest: Sha256::new()
            .chain_update(k)
            .chain_update(payload)
            .finalize()
            .into(),
    }
}

pub fn verify_commit(c: &Commitment, k: &[u8; 32], payload: &[u8]) -> bool {
    commit(k, payload) == *c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{setup_group, OpCounter};
    use crate::pre::{keygen, rekeygen};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    fn fixture() -> (GroupContext, ChaCha20Rng) {
        (setup_group(b"laocoon-v1").unwrap(), ChaCha20Rng::seed_from_u64(99))
    }

    #[test]
    fn round_trip_second_level() {
        let (ctx, mut rng) = fixture();
        let kp = keygen(&ctx, &mut rng);
        let c = hybrid_enc(&ctx, kp.public(), b"secret credential", &mut rng).unwrap();
        assert_eq!(c.level(), 2);
        assert_eq!(hybrid_dec(&ctx, &kp, &c).unwrap(), b"secret credential");
    }

    #[test]
    fn round_trip_through_reencryption() {
        let (ctx, mut rng) = fixture();
        let admin = keygen(&ctx, &mut rng);
        let voter = keygen(&ctx, &mut rng);
        let rk = rekeygen(&ctx, &admin, voter.public(), &mut rng);
        for len in [1usize, 31, 1000, 4096] {
            let payload: Vec<u8> = (0..len).map(|_| rng.gen()).collect();
            let c = hybrid_enc(&ctx, admin.public(), &payload, &mut rng).unwrap();
            let c1 = hybrid_reenc(&ctx, &rk, &c, &mut rng).unwrap();
            assert_eq!(c1.level(), 1);
            assert_eq!(c1.dem, c.dem);
            assert_eq!(hybrid_dec(&ctx, &voter, &c1).unwrap(), payload);
        }
    }

    #[test]
    fn flipped_dem_byte_fails_authentication() {
        let (ctx, mut rng) = fixture();
        let kp = keygen(&ctx, &mut rng);
        let mut c = hybrid_enc(&ctx, kp.public(), b"payload", &mut rng).unwrap();
        c.dem[3] ^= 0x01;
        assert_eq!(hybrid_dec(&ctx, &kp, &c), Err(EnvelopeError::DemAuthFailed));
    }

    #[test]
    fn encryptions_are_randomized() {
        let (ctx, mut rng) = fixture();
        let kp = keygen(&ctx, &mut rng);
        let a = hybrid_enc(&ctx, kp.public(), b"same", &mut rng).unwrap();
        let b = hybrid_enc(&ctx, kp.public(), b"same", &mut rng).unwrap();
        assert_ne!(a, b);
        assert_ne!(a.dem, b.dem);
    }

    #[test]
    fn level_one_input_cannot_be_reencrypted() {
        let (ctx, mut rng) = fixture();
        let a = keygen(&ctx, &mut rng);
        let b = keygen(&ctx, &mut rng);
        let rk = rekeygen(&ctx, &a, b.public(), &mut rng);
        let c = hybrid_enc(&ctx, a.public(), b"x", &mut rng).unwrap();
        let c1 = hybrid_reenc(&ctx, &rk, &c, &mut rng).unwrap();
        assert_eq!(
            hybrid_reenc(&ctx, &rk, &c1, &mut rng),
            Err(EnvelopeError::WrongLevel { expected: 2, found: 1 })
        );
    }

    #[test]
    fn tampered_kem_is_rejected() {
        let (ctx, mut rng) = fixture();
        let a = keygen(&ctx, &mut rng);
        let b = keygen(&ctx, &mut rng);
        let rk = rekeygen(&ctx, &a, b.public(), &mut rng);
        let mut c = hybrid_enc(&ctx, a.public(), b"x", &mut rng).unwrap();
        if let Kem::Level2(kem) = &mut c.kem {
            kem.beta = kem.beta.mul(ctx.h());
        }
        assert_eq!(hybrid_reenc(&ctx, &rk, &c, &mut rng), Err(EnvelopeError::KemInvalid));
        assert_eq!(hybrid_dec(&ctx, &a, &c), Err(EnvelopeError::KemInvalid));
    }

    #[test]
    fn wrong_recipient_fails_authentication() {
        let (ctx, mut rng) = fixture();
        let admin = keygen(&ctx, &mut rng);
        let voter = keygen(&ctx, &mut rng);
        let other = keygen(&ctx, &mut rng);
        let rk = rekeygen(&ctx, &admin, voter.public(), &mut rng);
        for _ in 0..100 {
            let c = hybrid_enc(&ctx, admin.public(), b"credential", &mut rng).unwrap();
            let c1 = hybrid_reenc(&ctx, &rk, &c, &mut rng).unwrap();
            assert_eq!(hybrid_dec(&ctx, &other, &c1), Err(EnvelopeError::DemAuthFailed));
        }
    }

    #[test]
    fn empty_inputs() {
        let (ctx, mut rng) = fixture();
        let kp = keygen(&ctx, &mut rng);
        assert_eq!(
            hybrid_enc(&ctx, kp.public(), b"", &mut rng),
            Err(EnvelopeError::EmptyPayload)
        );
        let mut c = hybrid_enc(&ctx, kp.public(), b"x", &mut rng).unwrap();
        c.dem.clear();
        assert_eq!(hybrid_dec(&ctx, &kp, &c), Err(EnvelopeError::DemAuthFailed));
        let big = vec![0u8; MAX_PAYLOAD + 1];
        assert_eq!(
            hybrid_enc(&ctx, kp.public(), &big, &mut rng),
            Err(EnvelopeError::PayloadTooLarge(MAX_PAYLOAD + 1))
        );
    }

    #[test]
    fn wire_format_round_trips() {
        let (ctx, mut rng) = fixture();
        let a = keygen(&ctx, &mut rng);
        let b = keygen(&ctx, &mut rng);
        let rk = rekeygen(&ctx, &a, b.public(), &mut rng);
        let c = hybrid_enc(&ctx, a.public(), b"payload", &mut rng).unwrap();
        let c1 = hybrid_reenc(&ctx, &rk, &c, &mut rng).unwrap();
        for ct in [c, c1] {
            assert_eq!(HybridCiphertext::from_bytes(&ct.to_bytes()).unwrap(), ct);
        }
    }

    #[test]
    fn encryption_cost() {
        let (ctx, mut rng) = fixture();
        let kp = keygen(&ctx, &mut rng);
        let (_, c) = OpCounter::measure(|| hybrid_enc(&ctx, kp.public(), b"x", &mut rng).unwrap());
        assert_eq!(c, OpCounter { exp_g: 2, exp_gt: 1, encodings: 1, ..OpCounter::ZERO });
    }

    #[test]
    fn commitments() {
        let k = [7u8; 32];
        let c = commit(&k, b"sigma");
        assert_eq!(c, commit(&k, b"sigma"));
        assert!(verify_commit(&c, &k, b"sigma"));
        assert!(!verify_commit(&c, &[8u8; 32], b"sigma"));
        assert!(!verify_commit(&c, &k, b"sigma'"));
        // Same payload under different keys gives unrelated digests.
        assert_ne!(commit(&[1u8; 32], b"sigma"), commit(&[2u8; 32], b"sigma"));
    }
}
