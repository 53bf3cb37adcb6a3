//! Bilinear group abstraction over BLS12-381.
//!
//! The PRE scheme is written for a symmetric pairing `G x G -> G_T`. Here the
//! generator `g` and everything derived from it (`g^k`, public keys, first
//! re-key component) live in G1, while `h` and its powers live in G2. Every
//! pairing the scheme evaluates has exactly one argument from each side, so the
//! asymmetric curve carries the construction unchanged.
//!
//! Exponentiations and pairings go through the methods in this module so that
//! [`OpCounter`] sees them. Exponentiations in G1 and G2 are both counted as
//! source-group exponentiations.

use std::cell::Cell;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use ark_bls12_381::{g2, Bls12_381, Fq, Fq12, Fr, G1Projective, G2Projective};
use ark_ec::hashing::curve_maps::wb::WBMap;
use ark_ec::hashing::map_to_curve_hasher::MapToCurveBasedHasher;
use ark_ec::hashing::HashToCurve;
use ark_ec::pairing::{Pairing, PairingOutput};
use ark_ec::scalar_mul::ScalarMul;
use ark_ec::{CurveGroup, PrimeGroup};
use ark_ff::field_hashers::DefaultFieldHasher;
use ark_ff::{BigInteger, Field, One, PrimeField, UniformRand, Zero};
use ark_serialize::{CanonicalDeserialize, CanonicalSerialize};
use rand::{CryptoRng, RngCore};
use sha2::{Digest, Sha256, Sha512};
use thiserror::Error;

use crate::wire::{self, DecodeError, Reader};

/// Encoded sizes in bytes.
pub const SCALAR_BYTES: usize = 32;
pub const G1_BYTES: usize = 48;
pub const G2_BYTES: usize = 96;
pub const GT_BYTES: usize = 576;
const FQ_BYTES: usize = 48;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("security tag must be non-empty")]
    EmptyTag,
    #[error("hash-to-curve failed: {0}")]
    HashToCurve(String),
}

// ---------------------------------------------------------------------------
// Operation counting

/// Tally of the costly group operations performed on the current thread.
///
/// `encodings` counts `Z^x` evaluations used to embed a plaintext (a
/// timestamp or a KEM seed) into G_T. They are exponentiations in G_T but are
/// kept apart from `exp_gt` because the cost model treats the plaintext as
/// given input.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct OpCounter {
    pub exp_g: u64,
    pub exp_gt: u64,
    pub pairings: u64,
    pub sigs: u64,
    pub vfys: u64,
    pub encodings: u64,
}

thread_local! {
    static COUNTER: Cell<OpCounter> = const { Cell::new(OpCounter::ZERO) };
}

impl OpCounter {
    pub const ZERO: OpCounter = OpCounter {
        exp_g: 0,
        exp_gt: 0,
        pairings: 0,
        sigs: 0,
        vfys: 0,
        encodings: 0,
    };

    /// Running totals for this thread.
    pub fn snapshot() -> OpCounter {
        COUNTER.with(Cell::get)
    }

    /// Runs `f` and returns the operations it performed on this thread.
    pub fn measure<R>(f: impl FnOnce() -> R) -> (R, OpCounter) {
        let before = Self::snapshot();
        let out = f();
        (out, Self::snapshot().since(&before))
    }

    pub fn since(&self, earlier: &OpCounter) -> OpCounter {
        OpCounter {
            exp_g: self.exp_g - earlier.exp_g,
            exp_gt: self.exp_gt - earlier.exp_gt,
            pairings: self.pairings - earlier.pairings,
            sigs: self.sigs - earlier.sigs,
            vfys: self.vfys - earlier.vfys,
            encodings: self.encodings - earlier.encodings,
        }
    }

    pub fn is_zero(&self) -> bool {
        *self == Self::ZERO
    }

    pub(crate) fn bump(f: impl FnOnce(&mut OpCounter)) {
        COUNTER.with(|c| {
            let mut v = c.get();
            f(&mut v);
            c.set(v);
        });
    }
}

impl Add for OpCounter {
    type Output = OpCounter;
    fn add(mut self, rhs: OpCounter) -> OpCounter {
        self += rhs;
        self
    }
}

impl AddAssign for OpCounter {
    fn add_assign(&mut self, rhs: OpCounter) {
        self.exp_g += rhs.exp_g;
        self.exp_gt += rhs.exp_gt;
        self.pairings += rhs.pairings;
        self.sigs += rhs.sigs;
        self.vfys += rhs.vfys;
        self.encodings += rhs.encodings;
    }
}

impl fmt::Display for OpCounter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "E1={} E2={} P={} Sig={} Vfy={} enc={}",
            self.exp_g, self.exp_gt, self.pairings, self.sigs, self.vfys, self.encodings
        )
    }
}

// ---------------------------------------------------------------------------
// Scalars

/// Integer modulo the prime group order q.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Scalar(pub(crate) Fr);

impl Scalar {
    pub fn zero() -> Self {
        Scalar(Fr::zero())
    }

    pub fn one() -> Self {
        Scalar(Fr::one())
    }

    pub fn from_u64(v: u64) -> Self {
        Scalar(Fr::from(v))
    }

    /// Uniform in `[0, q)`.
    pub fn random<R: RngCore + CryptoRng>(rng: &mut R) -> Self {
        Scalar(Fr::rand(rng))
    }

    /// Uniform in `[1, q)`.
    pub fn random_nonzero<R: RngCore + CryptoRng>(rng: &mut R) -> Self {
        loop {
            let s = Fr::rand(rng);
            if !s.is_zero() {
                return Scalar(s);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn inverse(&self) -> Option<Scalar> {
        self.0.inverse().map(Scalar)
    }

    /// Big-endian, fixed 32 bytes.
    pub fn to_bytes(&self) -> [u8; SCALAR_BYTES] {
        let mut out = [0u8; SCALAR_BYTES];
        out.copy_from_slice(&self.0.into_bigint().to_bytes_be());
        out
    }

    /// Rejects encodings of values `>= q`.
    pub fn from_bytes(bytes: &[u8; SCALAR_BYTES]) -> Result<Self, DecodeError> {
        let s = Fr::from_be_bytes_mod_order(bytes);
        let out = Scalar(s);
        if &out.to_bytes() != bytes {
            return Err(DecodeError::Invalid("scalar"));
        }
        Ok(out)
    }

    /// q, big-endian.
    pub fn modulus_bytes() -> [u8; SCALAR_BYTES] {
        let mut out = [0u8; SCALAR_BYTES];
        out.copy_from_slice(&Fr::MODULUS.to_bytes_be());
        out
    }

    pub(crate) fn read(r: &mut Reader<'_>) -> Result<Self, DecodeError> {
        Self::from_bytes(&r.array()?)
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({})", hex::encode(self.to_bytes()))
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        Scalar(self.0 + rhs.0)
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        Scalar(self.0 - rhs.0)
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        Scalar(self.0 * rhs.0)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-self.0)
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |a, b| a + b)
    }
}

// ---------------------------------------------------------------------------
// Group elements (multiplicative notation)

macro_rules! source_group {
    ($name:ident, $inner:ty, $bytes:expr, $label:literal) => {
        #[derive(Clone, Copy, PartialEq, Eq, Hash)]
        pub struct $name(pub(crate) $inner);

        impl $name {
            pub fn identity() -> Self {
                $name(<$inner>::zero())
            }

            pub fn is_identity(&self) -> bool {
                self.0.is_zero()
            }

            /// Counted exponentiation.
            pub fn exp(&self, s: &Scalar) -> Self {
                OpCounter::bump(|c| c.exp_g += 1);
                $name(self.0 * s.0)
            }

            #[allow(dead_code)] // only G1 needs it today
            pub(crate) fn exp_uncounted(&self, s: &Scalar) -> Self {
                $name(self.0 * s.0)
            }

            /// Group operation.
            pub fn mul(&self, other: &Self) -> Self {
                $name(self.0 + other.0)
            }

            pub fn inverse(&self) -> Self {
                $name(-self.0)
            }

            /// Compressed, big-endian point encoding.
            pub fn to_bytes(&self) -> [u8; $bytes] {
                let mut out = [0u8; $bytes];
                self.0
                    .into_affine()
                    .serialize_compressed(&mut out[..])
                    .expect("fixed-size buffer");
                out
            }

            /// Checks curve and subgroup membership and canonical form.
            pub fn from_bytes(bytes: &[u8; $bytes]) -> Result<Self, DecodeError> {
                let p = <<$inner as CurveGroup>::Affine>::deserialize_compressed(&bytes[..])
                    .map_err(|_| DecodeError::Invalid($label))?;
                let out = $name(p.into());
                if &out.to_bytes() != bytes {
                    return Err(DecodeError::Invalid($label));
                }
                Ok(out)
            }

            pub(crate) fn read(r: &mut Reader<'_>) -> Result<Self, DecodeError> {
                Self::from_bytes(&r.array()?)
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let b = self.to_bytes();
                write!(f, "{}({}..)", stringify!($name), hex::encode(&b[..8]))
            }
        }
    };
}

source_group!(G1, G1Projective, G1_BYTES, "G1 point");
source_group!(G2, G2Projective, G2_BYTES, "G2 point");

/// `g^{s_i} * y_i^{c_i}` for every `i`, uncounted. The shared base goes
/// through one precomputed window table.
pub(crate) fn dual_exp_batch(g: &G1, ys: &[G1], cs: &[Scalar], ss: &[Scalar]) -> Vec<G1> {
    let s_fr: Vec<Fr> = ss.iter().map(|s| s.0).collect();
    let gs = g.0.batch_mul(&s_fr);
    gs.iter()
        .zip(ys.iter().zip(cs))
        .map(|(gs, (y, c))| G1(y.0 * c.0 + gs))
        .collect()
}

/// Concatenated compressed encodings; same bytes as calling
/// [`G1::to_bytes`] on each point, with one shared field inversion.
pub(crate) fn g1_concat_bytes(points: &[G1]) -> Vec<u8> {
    let proj: Vec<G1Projective> = points.iter().map(|p| p.0).collect();
    let affine = G1Projective::normalize_batch(&proj);
    let mut out = vec![0u8; points.len() * G1_BYTES];
    for (a, chunk) in affine.iter().zip(out.chunks_exact_mut(G1_BYTES)) {
        a.serialize_compressed(chunk).expect("fixed-size buffer");
    }
    out
}

/// Element of the target group G_T.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Gt(pub(crate) PairingOutput<Bls12_381>);

impl Gt {
    pub fn identity() -> Self {
        Gt(PairingOutput::zero())
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_zero()
    }

    /// Counted exponentiation.
    pub fn exp(&self, s: &Scalar) -> Self {
        OpCounter::bump(|c| c.exp_gt += 1);
        Gt(self.0 * s.0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        Gt(self.0 + other.0)
    }

    pub fn div(&self, other: &Self) -> Self {
        Gt(self.0 - other.0)
    }

    pub fn inverse(&self) -> Self {
        Gt(-self.0)
    }

    /// Twelve base-field coefficients, each 48 bytes big-endian, in the
    /// tower order `c0.c0.c0, c0.c0.c1, c0.c1.c0, ..., c1.c2.c1`.
    pub fn to_bytes(&self) -> [u8; GT_BYTES] {
        let mut out = [0u8; GT_BYTES];
        for (chunk, coeff) in out
            .chunks_exact_mut(FQ_BYTES)
            .zip(self.0 .0.to_base_prime_field_elements())
        {
            chunk.copy_from_slice(&coeff.into_bigint().to_bytes_be());
        }
        out
    }

    /// Rejects non-canonical coefficients and anything outside the order-q
    /// subgroup.
    pub fn from_bytes(bytes: &[u8; GT_BYTES]) -> Result<Self, DecodeError> {
        let mut coeffs = Vec::with_capacity(12);
        for chunk in bytes.chunks_exact(FQ_BYTES) {
            let c = Fq::from_be_bytes_mod_order(chunk);
            if c.into_bigint().to_bytes_be() != chunk {
                return Err(DecodeError::Invalid("G_T coefficient"));
            }
            coeffs.push(c);
        }
        let f = Fq12::from_base_prime_field_elems(coeffs)
            .ok_or(DecodeError::Invalid("G_T element"))?;
        if f.is_zero() || !f.pow(Fr::MODULUS).is_one() {
            return Err(DecodeError::Invalid("G_T element"));
        }
        Ok(Gt(PairingOutput(f)))
    }

    pub(crate) fn read(r: &mut Reader<'_>) -> Result<Self, DecodeError> {
        Self::from_bytes(&r.array()?)
    }
}

impl fmt::Debug for Gt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = self.to_bytes();
        write!(f, "Gt({}..)", hex::encode(&b[..8]))
    }
}

// ---------------------------------------------------------------------------
// Context

/// System parameters `(g, h, q, G, G_T, e, Z)`.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupContext {
    tag: Vec<u8>,
    g: G1,
    h: G2,
    z: Gt,
}

impl fmt::Debug for GroupContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GroupContext")
            .field("tag", &String::from_utf8_lossy(&self.tag))
            .finish_non_exhaustive()
    }
}

/// Builds the context for `security_tag`. `h` is hashed onto G2 with the tag as
/// domain separator, so nobody knows its discrete log relative to `g`.
pub fn setup_group(security_tag: &[u8]) -> Result<GroupContext, GroupError> {
    if security_tag.is_empty() {
        return Err(GroupError::EmptyTag);
    }
    let mut dst = b"LAOCOON-H-GEN-V1:".to_vec();
    dst.extend_from_slice(security_tag);
    let hasher = MapToCurveBasedHasher::<
        G2Projective,
        DefaultFieldHasher<Sha256, 128>,
        WBMap<g2::Config>,
    >::new(&dst)
    .map_err(|e| GroupError::HashToCurve(e.to_string()))?;
    let h = hasher
        .hash(b"generator h")
        .map_err(|e| GroupError::HashToCurve(e.to_string()))?;
    let g = G1(G1Projective::generator());
    let h = G2(h.into());
    let z = Gt(Bls12_381::pairing(g.0, h.0));
    Ok(GroupContext {
        tag: security_tag.to_vec(),
        g,
        h,
        z,
    })
}

impl GroupContext {
    pub fn tag(&self) -> &[u8] {
        &self.tag
    }

    pub fn g(&self) -> &G1 {
        &self.g
    }

    pub fn h(&self) -> &G2 {
        &self.h
    }

    pub fn z(&self) -> &Gt {
        &self.z
    }

    /// Counted pairing evaluation.
    pub fn pairing(&self, a: &G1, b: &G2) -> Gt {
        OpCounter::bump(|c| c.pairings += 1);
        Gt(Bls12_381::pairing(a.0, b.0))
    }

    /// Tests `e(a1, b1) == e(a2, b2)`. Counted as two pairings; evaluated as
    /// one product of Miller loops with a single final exponentiation.
    pub fn pairings_equal(&self, a1: &G1, b1: &G2, a2: &G1, b2: &G2) -> bool {
        OpCounter::bump(|c| c.pairings += 2);
        let lhs = [a1.0, -a2.0];
        let rhs = [b1.0, b2.0];
        Bls12_381::multi_pairing(lhs, rhs).is_zero()
    }

    /// `Z^s` used to embed a plaintext into G_T. Counted under `encodings`.
    pub fn encode(&self, s: &Scalar) -> Gt {
        OpCounter::bump(|c| c.encodings += 1);
        Gt(self.z.0 * s.0)
    }

    /// `[CONTEXT tag][u32 len][security tag][g][h][Z]`.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = vec![wire::tag::CONTEXT];
        wire::put_bytes(&mut out, &self.tag);
        out.extend_from_slice(&self.g.to_bytes());
        out.extend_from_slice(&self.h.to_bytes());
        out.extend_from_slice(&self.z.to_bytes());
        out
    }

    /// Decodes and re-derives the context from the embedded tag; any mismatch
    /// with the carried elements is rejected.
    pub fn from_bytes(bytes: &[u8]) -> Result<Self, DecodeError> {
        let mut r = Reader::new(bytes);
        r.expect_tag(wire::tag::CONTEXT)?;
        let tag = r.bytes()?.to_vec();
        let g = G1::read(&mut r)?;
        let h = G2::read(&mut r)?;
        let z = Gt::read(&mut r)?;
        r.finish()?;
        let derived = setup_group(&tag).map_err(|_| DecodeError::Invalid("context tag"))?;
        if derived.g != g || derived.h != h || derived.z != z {
            return Err(DecodeError::Invalid("context parameters"));
        }
        Ok(derived)
    }
}

/// Deterministic hash onto `[0, q)`.
pub fn hash_to_scalar(data: &[u8]) -> Scalar {
    hash_to_scalar_parts(b"laocoon/hash-to-scalar", &[data])
}

/// SHA-512 over a domain label and length-prefixed parts, reduced mod q.
pub(crate) fn hash_to_scalar_parts(domain: &[u8], parts: &[&[u8]]) -> Scalar {
    let mut hasher = Sha512::new();
    hasher.update((domain.len() as u32).to_be_bytes());
    hasher.update(domain);
    for p in parts {
        hasher.update((p.len() as u64).to_be_bytes());
        hasher.update(p);
    }
    Scalar(Fr::from_be_bytes_mod_order(&hasher.finalize()))
}

/// SHA-256.
pub fn sha256(data: &[u8]) -> [u8; 32] {
    Sha256::digest(data).into()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn ctx() -> GroupContext {
        setup_group(b"laocoon-v1").unwrap()
    }

    #[test]
    fn z_is_pairing_of_generators() {
        let ctx = ctx();
        assert_eq!(ctx.pairing(ctx.g(), ctx.h()), *ctx.z());
        assert!(!ctx.z().is_identity());
    }

    #[test]
    fn setup_is_deterministic_per_tag() {
        assert_eq!(ctx().to_bytes(), ctx().to_bytes());
        let other = setup_group(b"another-tag").unwrap();
        assert_ne!(other.h(), ctx().h());
        assert_eq!(setup_group(b""), Err(GroupError::EmptyTag));
    }

    #[test]
    fn h_is_not_the_g2_generator() {
        let ctx = ctx();
        assert!(!ctx.h().is_identity());
        assert_ne!(ctx.h().0, G2Projective::generator());
    }

    #[test]
    fn bilinearity_on_random_exponents() {
        let ctx = ctx();
        let mut rng = ChaCha20Rng::seed_from_u64(7);
        for _ in 0..100 {
            let a = Scalar::random(&mut rng);
            let b = Scalar::random(&mut rng);
            let lhs = ctx.pairing(&ctx.g().exp(&a), &ctx.h().exp(&b));
            assert_eq!(lhs, ctx.z().exp(&(a * b)));
        }
    }

    #[test]
    fn pairings_equal_matches_direct_comparison() {
        let ctx = ctx();
        let mut rng = ChaCha20Rng::seed_from_u64(8);
        let k = Scalar::random(&mut rng);
        let (g, h) = (ctx.g(), ctx.h());
        assert!(ctx.pairings_equal(&g.exp(&k), h, g, &h.exp(&k)));
        assert!(!ctx.pairings_equal(&g.exp(&k), h, g, &h.exp(&(k + Scalar::one()))));
    }

    #[test]
    fn counter_increments_once_per_primitive() {
        let ctx = ctx();
        let s = Scalar::from_u64(5);
        let (_, c) = OpCounter::measure(|| ctx.g().exp(&s));
        assert_eq!(c, OpCounter { exp_g: 1, ..OpCounter::ZERO });
        let (_, c) = OpCounter::measure(|| ctx.h().exp(&s));
        assert_eq!(c, OpCounter { exp_g: 1, ..OpCounter::ZERO });
        let (_, c) = OpCounter::measure(|| ctx.z().exp(&s));
        assert_eq!(c, OpCounter { exp_gt: 1, ..OpCounter::ZERO });
        let (_, c) = OpCounter::measure(|| ctx.pairing(ctx.g(), ctx.h()));
        assert_eq!(c, OpCounter { pairings: 1, ..OpCounter::ZERO });
        let (_, c) = OpCounter::measure(|| ctx.encode(&s));
        assert_eq!(c, OpCounter { encodings: 1, ..OpCounter::ZERO });
        let (_, c) = OpCounter::measure(|| ctx.g().mul(ctx.g()));
        assert!(c.is_zero());
    }

    #[test]
    fn element_encodings_round_trip_with_fixed_length() {
        let ctx = ctx();
        let mut rng = ChaCha20Rng::seed_from_u64(9);
        for _ in 0..20 {
            let s = Scalar::random(&mut rng);
            let p = ctx.g().exp(&s);
            assert_eq!(G1::from_bytes(&p.to_bytes()).unwrap(), p);
            let q = ctx.h().exp(&s);
            assert_eq!(G2::from_bytes(&q.to_bytes()).unwrap(), q);
            let t = ctx.z().exp(&s);
            assert_eq!(Gt::from_bytes(&t.to_bytes()).unwrap(), t);
            assert_eq!(Scalar::from_bytes(&s.to_bytes()).unwrap(), s);
        }
        assert_eq!(G1::from_bytes(&G1::identity().to_bytes()).unwrap(), G1::identity());
        assert_eq!(Gt::from_bytes(&Gt::identity().to_bytes()).unwrap(), Gt::identity());
    }

    #[test]
    fn g1_generator_uses_standard_compressed_encoding() {
        assert_eq!(
            hex::encode(ctx().g().to_bytes()),
            "97f1d3a73197d7942695638c4fa9ac0fc3688c4f9774b905a14e3a3f171bac586c55e83ff97a1aeffb3af00adb22c6bb"
        );
    }

    #[test]
    fn non_canonical_encodings_are_rejected() {
        assert!(Scalar::from_bytes(&Scalar::modulus_bytes()).is_err());
        assert!(Scalar::from_bytes(&[0xff; 32]).is_err());
        assert!(Gt::from_bytes(&[0u8; GT_BYTES]).is_err());
        // A valid coefficient vector that lies outside the order-q subgroup.
        let mut one_plus = Gt::identity().to_bytes();
        one_plus[FQ_BYTES - 1] = 2;
        assert!(Gt::from_bytes(&one_plus).is_err());
        assert!(G1::from_bytes(&[0xff; G1_BYTES]).is_err());
    }

    #[test]
    fn context_round_trips_and_detects_substitution() {
        let ctx = ctx();
        let bytes = ctx.to_bytes();
        assert_eq!(GroupContext::from_bytes(&bytes).unwrap(), ctx);
        let mut bad = bytes.clone();
        let g_offset = 1 + 4 + ctx.tag().len();
        bad[g_offset..g_offset + G1_BYTES].copy_from_slice(&ctx.g().exp(&Scalar::from_u64(2)).to_bytes());
        assert!(GroupContext::from_bytes(&bad).is_err());
    }

    #[test]
    fn hash_to_scalar_is_deterministic_and_spreads() {
        assert_eq!(hash_to_scalar(b"abc"), hash_to_scalar(b"abc"));
        let mut rng = ChaCha20Rng::seed_from_u64(10);
        let mut seen = std::collections::HashSet::new();
        for _ in 0..1000 {
            let mut buf = [0u8; 32];
            rng.fill_bytes(&mut buf);
            assert!(seen.insert(hash_to_scalar(&buf)));
        }
    }

    #[test]
    fn hash_to_scalar_output_is_reduced() {
        let q = Scalar::modulus_bytes();
        let mut rng = ChaCha20Rng::seed_from_u64(11);
        for _ in 0..10_000 {
            let mut buf = [0u8; 16];
            rng.fill_bytes(&mut buf);
            // Big-endian byte comparison equals numeric comparison.
            assert!(hash_to_scalar(&buf).to_bytes() < q);
        }
    }
}
