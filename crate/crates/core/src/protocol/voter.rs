//! Voter side: receiving a credential (B1-B2), casting (B3-B4), and forging
//! a fake credential for a coercer.

use std::collections::HashSet;

use rand::{CryptoRng, RngCore};

use crate::envelope::{hybrid_dec, HybridCiphertext};
use crate::groups::{GroupContext, G1, G1_BYTES};
use crate::mdvs::{mdvs_forge, mdvs_verify, DvKeyPair};
use crate::pre::{keygen, rekeygen, PreKeyPair, PrePublicKey};

use super::messages::{BallotMessage, Credential, CredentialBundle};
use super::ProtocolError;

/// Step B2 check: the signature verifies over the pseudonym key, the ring
/// starts with the administrator, and every other ring member is a registered
/// voter. Anyone holding the public registry can run it, a coercer included.
pub fn verify_credential(ctx: &GroupContext, credential: &Credential, admin_dv: &G1, registry: &VoterRegistry) -> bool {
    let ring = &credential.sig.ring;
    ring.first() == Some(admin_dv)
        && ring[1..].iter().all(|y| registry.contains(y))
        && mdvs_verify(ctx, &credential.sig, &credential.pk.to_bytes())
}

/// Designated-verifier keys of all registered voters, as published in the
/// re-key list.
#[derive(Clone, Debug, Default)]
pub struct VoterRegistry {
    keys: Vec<G1>,
    encoded: HashSet<[u8; G1_BYTES]>,
}

impl VoterRegistry {
    pub fn new(keys: Vec<G1>) -> Self {
        let encoded = keys.iter().map(G1::to_bytes).collect();
        VoterRegistry { keys, encoded }
    }

    pub fn keys(&self) -> &[G1] {
        &self.keys
    }

    pub fn contains(&self, y: &G1) -> bool {
        self.encoded.contains(&y.to_bytes())
    }
}

/// Steps B3-B4: the ballot is `rk_{i -> C}` under the pseudonym key, sent
/// with `h_i`. Works for any held credential, forged ones included.
pub fn make_ballot<R: RngCore + CryptoRng>(
    ctx: &GroupContext,
    held: &HeldCredential,
    choice: &PrePublicKey,
    rng: &mut R,
) -> BallotMessage {
    BallotMessage {
        ballot: rekeygen(ctx, &held.secret, choice, rng),
        cred_hash: held.hash(),
    }
}

#[derive(Clone, Debug)]
pub struct HeldCredential {
    pub secret: PreKeyPair,
    pub credential: Credential,
}

impl HeldCredential {
    pub fn hash(&self) -> [u8; 32] {
        self.credential.hash()
    }
}

pub struct Voter {
    index: usize,
    pre: PreKeyPair,
    dv: DvKeyPair,
    wallet: Vec<HeldCredential>,
    denunciations: Vec<String>,
}

impl Voter {
    pub fn new<R: RngCore + CryptoRng>(ctx: &GroupContext, index: usize, rng: &mut R) -> Self {
        Voter {
            index,
            pre: keygen(ctx, rng),
            dv: DvKeyPair::generate(ctx, rng),
            wallet: Vec::new(),
            denunciations: Vec::new(),
        }
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn pre_public(&self) -> &PrePublicKey {
        self.pre.public()
    }

    pub fn dv_public(&self) -> &G1 {
        self.dv.public()
    }

    pub fn wallet(&self) -> &[HeldCredential] {
        &self.wallet
    }

    pub fn denunciations(&self) -> &[String] {
        &self.denunciations
    }

    /// Steps B1-B2. A credential that fails verification is recorded as a
    /// denunciation and not kept.
    pub fn receive(
        &mut self,
        ctx: &GroupContext,
        admin_dv: &G1,
        registry: &VoterRegistry,
        c: &HybridCiphertext,
    ) -> Result<&HeldCredential, ProtocolError> {
        let bytes = hybrid_dec(ctx, &self.pre, c).map_err(|source| ProtocolError::Receive { source })?;
        let bundle = CredentialBundle::from_bytes(&bytes).map_err(|e| ProtocolError::Malformed("B1", 0, e))?;
        if !verify_credential(ctx, &bundle.credential, admin_dv, registry) {
            self.denunciations
                .push(format!("credential {} failed verification", hex::encode(bundle.credential.hash())));
            return Err(ProtocolError::InvalidCredential);
        }
        self.wallet.push(HeldCredential {
            secret: bundle.secret,
            credential: bundle.credential,
        });
        Ok(self.wallet.last().expect("just pushed"))
    }

    /// Steps B3-B4 with credential `slot` for the candidate key `choice`.
    pub fn cast<R: RngCore + CryptoRng>(
        &self,
        ctx: &GroupContext,
        slot: usize,
        choice: &PrePublicKey,
        rng: &mut R,
    ) -> Result<BallotMessage, ProtocolError> {
        let held = self.wallet.get(slot).ok_or(ProtocolError::NoCredential {
            voter: self.index,
            slot,
        })?;
        Ok(make_ballot(ctx, held, choice, rng))
    }

    /// A fake `(SK, sigma)` for a fresh pseudonym, signed over the same ring as
    /// the real credential in `slot` using this voter's designated-verifier
    /// key. It passes [`verify_credential`] but is not in the proxy's table.
    pub fn forge_credential<R: RngCore + CryptoRng>(
        &self,
        ctx: &GroupContext,
        slot: usize,
        rng: &mut R,
    ) -> Result<HeldCredential, ProtocolError> {
        let real = self.wallet.get(slot).ok_or(ProtocolError::NoCredential {
            voter: self.index,
            slot,
        })?;
        let ring = &real.credential.sig.ring;
        let position = ring
            .iter()
            .skip(1)
            .position(|y| y == self.dv.public())
            .map(|p| p + 1)
            .ok_or(ProtocolError::NotDesignated(self.index))?;
        let fake = keygen(ctx, rng);
        let sig = mdvs_forge(ctx, self.dv.secret(), position, ring, &fake.public().to_bytes(), rng)
            .map_err(ProtocolError::Signing)?;
        Ok(HeldCredential {
            credential: Credential { pk: *fake.public(), sig },
            secret: fake,
        })
    }
}
