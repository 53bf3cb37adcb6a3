//! Single-use unidirectional key-private proxy re-encryption.
//!
//! Second-level ciphertexts `(g^k, h^k, m * Z^{a1 k})` can be transformed once,
//! with a re-encryption key, into first-level ciphertexts `(Z^{a2' y}, m * Z^y)`
//! under the delegatee's key. The re-encryption key is randomized in both the
//! G1/G2 and G_T parts so it names neither party.

use rand::{CryptoRng, RngCore};
use thiserror::Error;

use crate::groups::{GroupContext, Gt, Scalar, G1, G2};
use crate::wire::{self, DecodeError, Reader};

/// Validity-check failure: the `(alpha, beta)` pair is not `(g^k, h^k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("ciphertext failed the pairing validity check")]
pub struct Rejected;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct PrePublicKey {
    /// `Z^{a1}`
    pub pk1: Gt,
    /// `g^{a2}`
    pub pk2: G1,
}

#[derive(Clone, PartialEq, Eq)]
pub struct PreKeyPair {
    public: PrePublicKey,
    sk1: Scalar,
    sk2: Scalar,
}

impl std::fmt::Debug for PreKeyPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PreKeyPair")
            .field("public", &self.public)
            .finish_non_exhaustive()
    }
}

/// `rk_{i->j} = (pk_j2^{a_i1 + r}, h^r, e(pk_j2, h)^w, Z^w)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct ReKey {
    pub r1: G1,
    pub r2: G2,
    pub r3: Gt,
    pub r4: Gt,
}

/// `(g^k, h^k, m * pk1^k)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct CiphertextL2 {
    pub alpha: G1,
    pub beta: G2,
    pub gamma: Gt,
}

/// `(Z^{a2 y}, m * Z^y)`. Cannot be re-encrypted again.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct CiphertextL1 {
    pub t1: Gt,
    pub t2: Gt,
}

impl PreKeyPair {
    pub fn public(&self) -> &PrePublicKey {
        &self.public
    }

    pub fn sk1(&self) -> &Scalar {
        &self.sk1
    }

    pub fn sk2(&self) -> &Scalar {
        &self.sk2
    }

    /// Rebuilds a key pair from its secret halves, recomputing the public key.
    /// Returns `None` if either half is zero.
    pub fn from_secret(ctx: &GroupContext, sk1: Scalar, sk2: Scalar) -> Option<Self> {
        if sk1.is_zero() || sk2.is_zero() {
            return None;
        }
        let public = PrePublicKey {
            pk1: ctx.z().exp(&sk1),
            pk2: ctx.g().exp(&sk2),
        };
        Some(PreKeyPair { public, sk1, sk2 })
    }

    /// Pairs already-known public values with their secrets without
    /// recomputation. The caller vouches for consistency.
    pub fn from_parts(public: PrePublicKey, sk1: Scalar, sk2: Scalar) -> Self {
        PreKeyPair { public, sk1, sk2 }
    }

    /// `[sk1][sk2]`, 64 bytes.
    pub fn secret_bytes(&self) -> [u8; 64] {
        let mut out = [0u8; 64];
        out[..32].copy_from_slice(&self.sk1.to_bytes());
        out[32..].copy_from_slice(&self.sk2.to_bytes());
        out
    }

    pub(crate) fn read_secret(r: &mut Reader<'_>) -> Result<(Scalar, Scalar), DecodeError> {
        let sk1 = Scalar::read(r)?;
        let sk2 = Scalar::read(r)?;
        if sk1.is_zero() || sk2.is_zero() {
            return Err(DecodeError::Invalid("zero secret key"));
        }
        Ok((sk1, sk2))
    }
}

pub fn keygen<R: RngCore + CryptoRng>(ctx: &GroupContext, rng: &mut R) -> PreKeyPair {
    let sk1 = Scalar::random_nonzero(rng);
    let sk2 = Scalar::random_nonzero(rng);
    PreKeyPair::from_secret(ctx, sk1, sk2).expect("nonzero secrets")
}

pub fn rekeygen<R: RngCore + CryptoRng>(
    ctx: &GroupContext,
    delegator: &PreKeyPair,
    delegatee: &PrePublicKey,
    rng: &mut R,
) -> ReKey {
    let r = Scalar::random_nonzero(rng);
    let w = Scalar::random_nonzero(rng);
    rekeygen_with(ctx, delegator, delegatee, &r, &w)
}

pub(crate) fn rekeygen_with(
    ctx: &GroupContext,
    delegator: &PreKeyPair,
    delegatee: &PrePublicKey,
    r: &Scalar,
    w: &Scalar,
) -> ReKey {
    let r1 = delegatee.pk2.exp(&(delegator.sk1 + *r));
    let r2 = ctx.h().exp(r);
    let r3 = ctx.pairing(&delegatee.pk2, ctx.h()).exp(w);
    let r4 = ctx.z().exp(w);
    ReKey { r1, r2, r3, r4 }
}

pub fn enc2<R: RngCore + CryptoRng>(
    ctx: &GroupContext,
    pk: &PrePublicKey,
    m: &Gt,
    rng: &mut R,
) -> CiphertextL2 {
    let k = Scalar::random(rng);
    enc2_with(ctx, pk, m, &k)
}

pub(crate) fn enc2_with(ctx: &GroupContext, pk: &PrePublicKey, m: &Gt, k: &Scalar) -> CiphertextL2 {
    CiphertextL2 {
        alpha: ctx.g().exp(k),
        beta: ctx.h().exp(k),
        gamma: m.mul(&pk.pk1.exp(k)),
    }
}

/// `e(alpha, h) == e(g, beta)`.
pub fn is_well_formed(ctx: &GroupContext, c: &CiphertextL2) -> bool {
    ctx.pairings_equal(&c.alpha, ctx.h(), ctx.g(), &c.beta)
}

pub fn reenc<R: RngCore + CryptoRng>(
    ctx: &GroupContext,
    rk: &ReKey,
    c: &CiphertextL2,
    rng: &mut R,
) -> Result<CiphertextL1, Rejected> {
    let w_prime = Scalar::random_nonzero(rng);
    reenc_with(ctx, rk, c, &w_prime)
}

pub(crate) fn reenc_with(
    ctx: &GroupContext,
    rk: &ReKey,
    c: &CiphertextL2,
    w_prime: &Scalar,
) -> Result<CiphertextL1, Rejected> {
    if !is_well_formed(ctx, c) {
        return Err(Rejected);
    }
    let t1 = ctx.pairing(&rk.r1, &c.beta);
    let t2 = c.gamma.mul(&ctx.pairing(&c.alpha, &rk.r2));
    Ok(CiphertextL1 {
        t1: t1.mul(&rk.r3.exp(w_prime)),
        t2: t2.mul(&rk.r4.exp(w_prime)),
    })
}

/// `gamma / e(alpha, h)^{a1}` after the validity check.
pub fn dec2(ctx: &GroupContext, sk: &PreKeyPair, c: &CiphertextL2) -> Result<Gt, Rejected> {
    if !is_well_formed(ctx, c) {
        return Err(Rejected);
    }
    let mask = ctx.pairing(&c.alpha, ctx.h()).exp(&sk.sk1);
    Ok(c.gamma.div(&mask))
}

/// `t2 / t1^{1/a2}`. There is no validity predicate at this level, so a
/// ciphertext for another key silently yields an unrelated element.
pub fn dec1(sk: &PreKeyPair, c: &CiphertextL1) -> Gt {
    let inv = sk.sk2.inverse().expect("key pairs never hold a zero sk2");
    c.t2.div(&c.t1.exp(&inv))
}

// ---------------------------------------------------------------------------
// Wire formats: one type tag byte, then canonical element encodings.

impl PrePublicKey {
    pub const ENCODED_LEN: usize = 1 + crate::groups::GT_BYTES + crate::groups::G1_BYTES;

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(Self::ENCODED_LEN);
        out.push(wire::tag::PUBLIC_KEY);
        out.extend_from_slice(&self.pk1.to_bytes());
        out.extend_from_slice(&self.pk2.to_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, DecodeError> {
        let mut r = Reader::new(bytes);
        let v = Self::read(&mut r)?;
        r.finish()?;
        Ok(v)
    }

    pub(crate) fn read(r: &mut Reader<'_>) -> Result<Self, DecodeError> {
        r.expect_tag(wire::tag::PUBLIC_KEY)?;
        Ok(PrePublicKey {
            pk1: Gt::read(r)?,
            pk2: G1::read(r)?,
        })
    }
}

impl ReKey {
    pub const ENCODED_LEN: usize = 1
        + crate::groups::G1_BYTES
        + crate::groups::G2_BYTES
        + 2 * crate::groups::GT_BYTES;

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(Self::ENCODED_LEN);
        out.push(wire::tag::REKEY);
        out.extend_from_slice(&self.r1.to_bytes());
        out.extend_from_slice(&self.r2.to_bytes());
        out.extend_from_slice(&self.r3.to_bytes());
        out.extend_from_slice(&self.r4.to_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, DecodeError> {
        let mut r = Reader::new(bytes);
        let v = Self::read(&mut r)?;
        r.finish()?;
        Ok(v)
    }

    pub(crate) fn read(r: &mut Reader<'_>) -> Result<Self, DecodeError> {
        r.expect_tag(wire::tag::REKEY)?;
        Ok(ReKey {
            r1: G1::read(r)?,
            r2: G2::read(r)?,
            r3: Gt::read(r)?,
            r4: Gt::read(r)?,
        })
    }
}

impl CiphertextL2 {
    pub const ENCODED_LEN: usize =
        1 + crate::groups::G1_BYTES + crate::groups::G2_BYTES + crate::groups::GT_BYTES;

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(Self::ENCODED_LEN);
        out.push(wire::tag::CIPHERTEXT_L2);
        out.extend_from_slice(&self.alpha.to_bytes());
        out.extend_from_slice(&self.beta.to_bytes());
        out.extend_from_slice(&self.gamma.to_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, DecodeError> {
        let mut r = Reader::new(bytes);
        let v = Self::read(&mut r)?;
        r.finish()?;
        Ok(v)
    }

    pub(crate) fn read(r: &mut Reader<'_>) -> Result<Self, DecodeError> {
        r.expect_tag(wire::tag::CIPHERTEXT_L2)?;
        Ok(CiphertextL2 {
            alpha: G1::read(r)?,
            beta: G2::read(r)?,
            gamma: Gt::read(r)?,
        })
    }
}

impl CiphertextL1 {
    pub const ENCODED_LEN: usize = 1 + 2 * crate::groups::GT_BYTES;

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(Self::ENCODED_LEN);
        out.push(wire::tag::CIPHERTEXT_L1);
        out.extend_from_slice(&self.t1.to_bytes());
        out.extend_from_slice(&self.t2.to_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, DecodeError> {
        let mut r = Reader::new(bytes);
        let v = Self::read(&mut r)?;
        r.finish()?;
        Ok(v)
    }

    pub(crate) fn read(r: &mut Reader<'_>) -> Result<Self, DecodeError> {
        r.expect_tag(wire::tag::CIPHERTEXT_L1)?;
        Ok(CiphertextL1 {
            t1: Gt::read(r)?,
            t2: Gt::read(r)?,
        })
    }
}
