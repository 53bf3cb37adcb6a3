//! Multi-designated-verifier signatures as 1-out-of-n Schnorr OR-proofs.
//!
//! The ring is the signer's key followed by the designated verifiers' keys. A
//! signature proves knowledge of the discrete log of *some* ring member, so the
//! administrator (position 0) can sign and every designated verifier can
//! produce a signature that verifies identically. That forgeability is what
//! lets a coerced voter hand over a fake credential.
//!
//! Sign, forge and verify each count as one `sigs`/`vfys` unit in
//! [`OpCounter`]; their internal exponentiations are not counted separately.

use rand::{CryptoRng, RngCore};
use thiserror::Error;

use crate::groups::{dual_exp_batch, g1_concat_bytes, hash_to_scalar_parts, GroupContext, OpCounter, Scalar, G1, G1_BYTES, SCALAR_BYTES};
use crate::wire::{self, DecodeError, Reader};

const CHALLENGE_DOMAIN: &[u8] = b"laocoon/mdvs-or-challenge/v1";
const SCHNORR_DOMAIN: &[u8] = b"laocoon/schnorr-challenge/v1";

/// Rings above this size are refused when decoding.
pub const MAX_RING: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MdvsError {
    #[error("ring must contain the signer and at least one designated verifier, got {0} keys")]
    RingTooSmall(usize),
    #[error("secret key does not match ring position {0}")]
    KeyMismatch(usize),
    #[error("ring position {0} is out of range or reserved for the signer")]
    BadPosition(usize),
}

/// Long-term designated-verifier key `(y = g^x, x)`.
#[derive(Clone, PartialEq, Eq)]
pub struct DvKeyPair {
    y: G1,
    x: Scalar,
}

impl std::fmt::Debug for DvKeyPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DvKeyPair").field("y", &self.y).finish_non_exhaustive()
    }
}

impl DvKeyPair {
    pub fn generate<R: RngCore + CryptoRng>(ctx: &GroupContext, rng: &mut R) -> Self {
        let x = Scalar::random_nonzero(rng);
        DvKeyPair {
            y: ctx.g().exp_uncounted(&x),
            x,
        }
    }

    pub fn public(&self) -> &G1 {
        &self.y
    }

    pub fn secret(&self) -> &Scalar {
        &self.x
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MdvsSignature {
    pub ring: Vec<G1>,
    pub challenges: Vec<Scalar>,
    pub responses: Vec<Scalar>,
}

fn challenge(ring: &[G1], m: &[u8], commitments: &[G1]) -> Scalar {
    let ring_bytes = g1_concat_bytes(ring);
    let com_bytes = g1_concat_bytes(commitments);
    hash_to_scalar_parts(
        CHALLENGE_DOMAIN,
        &[&(ring.len() as u32).to_be_bytes(), &ring_bytes, m, &com_bytes],
    )
}

fn or_prove<R: RngCore + CryptoRng>(
    ctx: &GroupContext,
    secret: &Scalar,
    real: usize,
    ring: &[G1],
    m: &[u8],
    rng: &mut R,
) -> MdvsSignature {
    let n = ring.len();
    let mut challenges = vec![Scalar::zero(); n];
    let mut responses = vec![Scalar::zero(); n];
    let nonce = Scalar::random_nonzero(rng);
    for idx in 0..n {
        if idx == real {
            // With a zero challenge the commitment below is just g^nonce.
            responses[idx] = nonce;
        } else {
            challenges[idx] = Scalar::random(rng);
            responses[idx] = Scalar::random(rng);
        }
    }
    let commitments = dual_exp_batch(ctx.g(), ring, &challenges, &responses);
    let total = challenge(ring, m, &commitments);
    let others: Scalar = challenges.iter().copied().sum();
    challenges[real] = total - others;
    responses[real] = nonce - challenges[real] * *secret;
    MdvsSignature {
        ring: ring.to_vec(),
        challenges,
        responses,
    }
}

fn check_position(ctx: &GroupContext, secret: &Scalar, pos: usize, ring: &[G1]) -> Result<(), MdvsError> {
    if ring.len() < 2 {
        return Err(MdvsError::RingTooSmall(ring.len()));
    }
    if ctx.g().exp_uncounted(secret) != ring[pos] {
        return Err(MdvsError::KeyMismatch(pos));
    }
    Ok(())
}

/// Signs `m` as the ring's designated signer. `ring[0]` must be `g^x_signer`.
pub fn mdvs_sign<R: RngCore + CryptoRng>(
    ctx: &GroupContext,
    x_signer: &Scalar,
    ring: &[G1],
    m: &[u8],
    rng: &mut R,
) -> Result<MdvsSignature, MdvsError> {
    check_position(ctx, x_signer, 0, ring)?;
    OpCounter::bump(|c| c.sigs += 1);
    Ok(or_prove(ctx, x_signer, 0, ring, m, rng))
}

/// Produces a signature on `m` with a designated verifier's secret; it is
/// accepted by [`mdvs_verify`] exactly like a genuine one.
pub fn mdvs_forge<R: RngCore + CryptoRng>(
    ctx: &GroupContext,
    x_verifier: &Scalar,
    verifier_index: usize,
    ring: &[G1],
    m: &[u8],
    rng: &mut R,
) -> Result<MdvsSignature, MdvsError> {
    if verifier_index == 0 || verifier_index >= ring.len() {
        return Err(MdvsError::BadPosition(verifier_index));
    }
    check_position(ctx, x_verifier, verifier_index, ring)?;
    OpCounter::bump(|c| c.sigs += 1);
    Ok(or_prove(ctx, x_verifier, verifier_index, ring, m, rng))
}

pub fn mdvs_verify(ctx: &GroupContext, sig: &MdvsSignature, m: &[u8]) -> bool {
    OpCounter::bump(|c| c.vfys += 1);
    let n = sig.ring.len();
    if n < 2 || sig.challenges.len() != n || sig.responses.len() != n {
        return false;
    }
    let commitments = dual_exp_batch(ctx.g(), &sig.ring, &sig.challenges, &sig.responses);
    let total: Scalar = sig.challenges.iter().copied().sum();
    total == challenge(&sig.ring, m, &commitments)
}

impl MdvsSignature {
    pub fn encoded_len(ring_len: usize) -> usize {
        1 + 4 + ring_len * (G1_BYTES + 2 * SCALAR_BYTES)
    }

    /// `[tag][u32 n][n ring keys][n challenges][n responses]`.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(Self::encoded_len(self.ring.len()));
        out.push(wire::tag::MDVS_SIGNATURE);
        out.extend_from_slice(&(self.ring.len() as u32).to_be_bytes());
        out.extend_from_slice(&g1_concat_bytes(&self.ring));
        for c in &self.challenges {
            out.extend_from_slice(&c.to_bytes());
        }
        for s in &self.responses {
            out.extend_from_slice(&s.to_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, DecodeError> {
        let mut r = Reader::new(bytes);
        let v = Self::read(&mut r)?;
        r.finish()?;
        Ok(v)
    }

    pub(crate) fn read(r: &mut Reader<'_>) -> Result<Self, DecodeError> {
        r.expect_tag(wire::tag::MDVS_SIGNATURE)?;
        let n = r.u32()? as usize;
        if !(2..=MAX_RING).contains(&n) {
            return Err(DecodeError::Length(n));
        }
        let ring = (0..n).map(|_| G1::read(r)).collect::<Result<_, _>>()?;
        let challenges = (0..n).map(|_| Scalar::read(r)).collect::<Result<_, _>>()?;
        let responses = (0..n).map(|_| Scalar::read(r)).collect::<Result<_, _>>()?;
        Ok(MdvsSignature {
            ring,
            challenges,
            responses,
        })
    }
}

/// Decodes and verifies in one step; any decoding failure is a reject.
pub fn mdvs_verify_bytes(ctx: &GroupContext, sig: &[u8], m: &[u8]) -> bool {
    match MdvsSignature::from_bytes(sig) {
        Ok(s) => mdvs_verify(ctx, &s, m),
        Err(_) => false,
    }
}

/// Plain Schnorr signature, used for the administrator's self-signed
/// certificate.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SchnorrSignature {
    pub c: Scalar,
    pub s: Scalar,
}

impl SchnorrSignature {
    pub const ENCODED_LEN: usize = 1 + 2 * SCALAR_BYTES;

    pub fn sign<R: RngCore + CryptoRng>(ctx: &GroupContext, key: &DvKeyPair, m: &[u8], rng: &mut R) -> Self {
        OpCounter::bump(|c| c.sigs += 1);
        let k = Scalar::random_nonzero(rng);
        let com = ctx.g().exp_uncounted(&k);
        let c = hash_to_scalar_parts(SCHNORR_DOMAIN, &[&key.y.to_bytes(), m, &com.to_bytes()]);
        SchnorrSignature { c, s: k - c * key.x }
    }

    pub fn verify(&self, ctx: &GroupContext, y: &G1, m: &[u8]) -> bool {
        OpCounter::bump(|c| c.vfys += 1);
        let com = ctx.g().exp_uncounted(&self.s).mul(&y.exp_uncounted(&self.c));
        self.c == hash_to_scalar_parts(SCHNORR_DOMAIN, &[&y.to_bytes(), m, &com.to_bytes()])
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(Self::ENCODED_LEN);
        out.push(wire::tag::SCHNORR_SIGNATURE);
        out.extend_from_slice(&self.c.to_bytes());
        out.extend_from_slice(&self.s.to_bytes());
        out
    }

    pub(crate) fn read(r: &mut Reader<'_>) -> Result<Self, DecodeError> {
        r.expect_tag(wire::tag::SCHNORR_SIGNATURE)?;
        Ok(SchnorrSignature {
            c: Scalar::read(r)?,
            s: Scalar::read(r)?,
        })
    }
}
