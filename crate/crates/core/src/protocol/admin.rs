//! Voting administrator: system setup (S1) and credential issuing (C1-C4).

use rand::{CryptoRng, RngCore};

use crate::bulletin::{Board, Kind, Phase};
use crate::envelope::{hybrid_enc, HybridCiphertext, MAX_PAYLOAD};
use crate::groups::{GroupContext, G1};
use crate::mdvs::{mdvs_sign, DvKeyPair, SchnorrSignature};
use crate::pre::{keygen, rekeygen, PreKeyPair, PrePublicKey};

use super::messages::{
    encode_credential_list, AdminCertificate, Credential, CredentialBundle, RekeyListEntry,
};
use super::ProtocolError;

pub const HASH_SPEC: &[u8] = b"sha-256";

/// A registered voter's long-term public keys.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VoterRecord {
    pub pre: PrePublicKey,
    pub dv: G1,
}

pub struct Administrator {
    pre: PreKeyPair,
    dv: DvKeyPair,
    issued: Vec<Credential>,
}

impl Administrator {
    pub fn new<R: RngCore + CryptoRng>(ctx: &GroupContext, rng: &mut R) -> Self {
        Administrator {
            pre: keygen(ctx, rng),
            dv: DvKeyPair::generate(ctx, rng),
            issued: Vec::new(),
        }
    }

    pub fn pre_public(&self) -> &PrePublicKey {
        self.pre.public()
    }

    pub fn dv_public(&self) -> &G1 {
        self.dv.public()
    }

    pub fn pre_keys(&self) -> &PreKeyPair {
        &self.pre
    }

    pub fn issued(&self) -> &[Credential] {
        &self.issued
    }

    /// Step S1: parameters, self-signed certificate, hash identifier and the
    /// re-key vector `L_k` (one entry per registered voter).
    pub fn publish_setup<R: RngCore + CryptoRng>(
        &self,
        ctx: &GroupContext,
        board: &mut Board,
        voters: &[VoterRecord],
        rng: &mut R,
    ) -> Result<(), ProtocolError> {
        if !board.is_empty() {
            return Err(ProtocolError::DuplicateSetup(board.len()));
        }
        let post = |board: &mut Board, kind, payload| {
            board
                .append(Phase::Setup, kind, payload)
                .map_err(|source| ProtocolError::Board { step: "S1", source })
        };
        post(board, Kind::Params, ctx.to_bytes())?;
        let msg = AdminCertificate::signed_message(self.pre.public(), self.dv.public());
        let cert = AdminCertificate {
            pre_pk: *self.pre.public(),
            dv_pk: *self.dv.public(),
            sig: SchnorrSignature::sign(ctx, &self.dv, &msg, rng),
        };
        post(board, Kind::AdminCert, cert.to_bytes())?;
        post(board, Kind::HashSpec, HASH_SPEC.to_vec())?;
        for (j, v) in voters.iter().enumerate() {
            let entry = RekeyListEntry {
                voter: j as u32,
                voter_pre: v.pre,
                voter_dv: v.dv,
                rekey: rekeygen(ctx, &self.pre, &v.pre, rng),
            };
            post(board, Kind::RekeyList, entry.to_bytes())?;
        }
        Ok(())
    }

    /// Steps C1-C3: fresh pseudonym key pair, MDVS signature over it, and the
    /// pair `(SK_i, sigma_i)` encrypted to the administrator's own key. The
    /// result is what C4 sends to the proxy.
    pub fn issue_credential<R: RngCore + CryptoRng>(
        &mut self,
        ctx: &GroupContext,
        designated: &[G1],
        rng: &mut R,
    ) -> Result<HybridCiphertext, ProtocolError> {
        let pseudonym = keygen(ctx, rng);
        let mut ring = Vec::with_capacity(designated.len() + 1);
        ring.push(*self.dv.public());
        ring.extend_from_slice(designated);
        let sig = mdvs_sign(ctx, self.dv.secret(), &ring, &pseudonym.public().to_bytes(), rng)
            .map_err(ProtocolError::Signing)?;
        let credential = Credential {
            pk: *pseudonym.public(),
            sig,
        };
        let bundle = CredentialBundle {
            secret: pseudonym,
            credential: credential.clone(),
        };
        let c = hybrid_enc(ctx, self.pre.public(), &bundle.to_bytes(), rng)
            .map_err(|e| ProtocolError::Envelope { step: "C3", source: e })?;
        self.issued.push(credential);
        Ok(c)
    }

    /// Forgets the most recently issued credential, e.g. after the proxy
    /// reported its ciphertext as undeliverable.
    pub fn revoke_last(&mut self) -> Option<Credential> {
        self.issued.pop()
    }

    /// `Enc_{y_P}(L_sigma)`, sent once dispatching is complete. Ring
    /// signatures grow with the electorate, so the list is split into as many
    /// ciphertexts as the envelope's payload limit requires.
    pub fn credential_list_for<R: RngCore + CryptoRng>(
        &self,
        ctx: &GroupContext,
        proxy: &PrePublicKey,
        rng: &mut R,
    ) -> Result<Vec<HybridCiphertext>, ProtocolError> {
        let mut chunks: Vec<&[Credential]> = Vec::new();
        let (mut start, mut size) = (0, 4);
        for (i, c) in self.issued.iter().enumerate() {
            let len = 4 + c.encoded_len();
            if i > start && size + len > MAX_PAYLOAD {
                chunks.push(&self.issued[start..i]);
                (start, size) = (i, 4);
            }
            size += len;
        }
        chunks.push(&self.issued[start..]);
        chunks
            .into_iter()
            .map(|chunk| {
                hybrid_enc(ctx, proxy, &encode_credential_list(chunk), rng)
                    .map_err(|e| ProtocolError::Envelope { step: "C7", source: e })
            })
            .collect()
    }
}
