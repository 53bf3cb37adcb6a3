use std::collections::BTreeSet;

use laocoon_core::bulletin::{Kind, Phase};
use laocoon_core::envelope::{hybrid_enc, EnvelopeError};
use laocoon_core::groups::{setup_group, Scalar};
use laocoon_core::mdvs::mdvs_verify;
use laocoon_core::pre::{dec1, enc2, reenc};
use laocoon_core::protocol::messages::{CredentialBundle, RekeyListEntry};
use laocoon_core::protocol::*;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

fn election(voters: usize, candidates: &[&str], seed: u64) -> Election {
    Election::new(ElectionConfig::new(voters, candidates), seed).unwrap()
}

fn ready(voters: usize, candidates: &[&str], seed: u64) -> Election {
    let mut e = election(voters, candidates, seed);
    e.setup().unwrap();
    e.dispatch().unwrap();
    e
}

fn finish(e: &mut Election) -> TallyReport {
    e.trigger_tally().unwrap();
    e.publish_secrets(&[]).unwrap();
    e.tally().unwrap()
}

fn rejection_reasons(e: &Election) -> Vec<RejectReason> {
    e.proxy().rejections().iter().map(|r| r.reason).collect()
}

#[test]
fn setup_posts_parameters_rekeys_and_candidate_keys() {
    let mut e = election(3, &["C1", "C2"], 1);
    e.setup().unwrap();
    let board = e.board();
    assert_eq!(board.of_kind(Kind::Params).count(), 1);
    assert_eq!(board.of_kind(Kind::HashSpec).count(), 1);
    assert_eq!(board.of_kind(Kind::RekeyList).count(), 3);
    assert_eq!(board.of_kind(Kind::CandidateKey).count(), 2);
    assert!(board.entries().iter().all(|x| x.phase == Phase::Setup));

    let view = BoardView::read(board).unwrap();
    assert!(view.admin.verify(e.ctx()));
    assert_eq!(&view.admin.dv_pk, e.admin().dv_public());

    // Each rekey links the administrator's key to the listed voter.
    let ctx = e.ctx();
    let a1 = e.admin().pre_keys().sk1();
    for entry in board.of_kind(Kind::RekeyList) {
        let r = RekeyListEntry::from_bytes(&entry.payload).unwrap();
        let pk2 = r.voter_pre.pk2;
        let lhs = ctx.pairing(&r.rekey.r1, ctx.h());
        let rhs = ctx
            .pairing(&pk2, &r.rekey.r2)
            .mul(&ctx.pairing(&pk2, ctx.h()).exp(a1));
        assert_eq!(lhs, rhs);
        assert_eq!(&r.voter_pre, e.voters()[r.voter as usize].pre_public());
    }
}

#[test]
fn setup_refuses_a_used_board() {
    let mut e = election(2, &["C1", "C2"], 1);
    e.setup().unwrap();
    let err = e.setup().unwrap_err();
    assert!(matches!(err, ProtocolError::DuplicateSetup(n) if n > 0));
    assert!(err.to_string().starts_with("S1: duplicate-setup"));
}

#[test]
fn dispatch_gives_every_voter_one_verified_credential() {
    let e = ready(6, &["C1", "C2"], 2);
    let mut hashes = BTreeSet::new();
    for v in e.voters() {
        assert_eq!(v.wallet().len(), 1, "voter {}", v.index());
        let cred = &v.wallet()[0].credential;
        assert!(e.coercer_accepts(cred));
        assert_eq!(cred.sig.ring.len(), 7);
        assert!(hashes.insert(cred.hash()));
    }
    let mut seen = e.assignment().to_vec();
    seen.sort();
    assert_eq!(seen, (0..6).collect::<Vec<_>>());
    assert_eq!(e.proxy().table().len(), 6);
}

#[test]
fn dispatch_permutation_depends_on_seed() {
    let perms: BTreeSet<Vec<usize>> = (0..8).map(|s| ready(5, &["C1", "C2"], s).assignment().to_vec()).collect();
    assert!(perms.len() > 1);
}

#[test]
fn dispatch_reissues_after_a_corrupted_ciphertext() {
    let mut e = election(3, &["C1", "C2"], 3);
    e.setup().unwrap();
    e.inject_dispatch_faults(2);
    e.dispatch().unwrap();
    assert_eq!(e.dispatch_rejects(), 2);
    assert_eq!(e.admin().issued().len(), 3);
    assert!(e.voters().iter().all(|v| v.wallet().len() == 1));
    assert_eq!(e.proxy().table().len(), 3);
}

#[test]
fn k_out_of_l_issues_several_credentials() {
    let cfg = ElectionConfig {
        credentials_per_voter: 2,
        ..ElectionConfig::new(3, &["C1", "C2", "C3"])
    };
    let mut e = Election::new(cfg, 4).unwrap();
    e.setup().unwrap();
    e.dispatch().unwrap();
    assert!(e.voters().iter().all(|v| v.wallet().len() == 2));
    e.cast_slot(0, 0, "C1").unwrap();
    e.cast_slot(0, 1, "C2").unwrap();
    e.cast_slot(1, 1, "C2").unwrap();
    let r = finish(&mut e);
    assert_eq!(r.counts, vec![("C1".into(), 1), ("C2".into(), 2), ("C3".into(), 0)]);
}

#[test]
fn capped_rings_still_verify() {
    let cfg = ElectionConfig {
        ring_cap: Some(2),
        ..ElectionConfig::new(5, &["C1", "C2"])
    };
    let mut e = Election::new(cfg, 5).unwrap();
    e.setup().unwrap();
    e.dispatch().unwrap();
    for v in e.voters() {
        let cred = &v.wallet()[0].credential;
        assert_eq!(cred.sig.ring.len(), 3);
        assert!(e.coercer_accepts(cred));
    }
}

#[test]
fn receiving_checks_recipient_and_signature() {
    let ctx = setup_group(b"receive-test").unwrap();
    let mut rng = ChaCha20Rng::seed_from_u64(6);
    let mut admin = Administrator::new(&ctx, &mut rng);
    let mut alice = Voter::new(&ctx, 0, &mut rng);
    let mut bob = Voter::new(&ctx, 1, &mut rng);
    let registry = VoterRegistry::new(vec![*alice.dv_public(), *bob.dv_public()]);
    let admin_dv = *admin.dv_public();
    let c = admin.issue_credential(&ctx, registry.keys(), &mut rng).unwrap();
    let plain = laocoon_core::envelope::hybrid_dec(&ctx, admin.pre_keys(), &c).unwrap();
    let mut bundle = CredentialBundle::from_bytes(&plain).unwrap();

    // Wrong recipient: the derived symmetric key differs.
    let to_alice = hybrid_enc(&ctx, alice.pre_public(), &bundle.to_bytes(), &mut rng).unwrap();
    for _ in 0..100 {
        let err = bob.receive(&ctx, &admin_dv, &registry, &to_alice).unwrap_err();
        assert!(matches!(err, ProtocolError::Receive { source: EnvelopeError::DemAuthFailed }));
        assert!(err.to_string().starts_with("B1: dem-auth-failed"));
    }
    assert!(alice.receive(&ctx, &admin_dv, &registry, &to_alice).is_ok());

    // A perturbed signature aborts with a denunciation.
    bundle.credential.sig.responses[1] = bundle.credential.sig.responses[1] + Scalar::one();
    let bad = hybrid_enc(&ctx, bob.pre_public(), &bundle.to_bytes(), &mut rng).unwrap();
    let err = bob.receive(&ctx, &admin_dv, &registry, &bad).unwrap_err();
    assert!(matches!(err, ProtocolError::InvalidCredential));
    assert_eq!(err.to_string(), "B2: invalid-credential");
    assert_eq!(bob.denunciations().len(), 1);
    assert!(bob.wallet().is_empty());
}

#[test]
fn ring_outside_the_registry_is_refused() {
    let ctx = setup_group(b"registry-test").unwrap();
    let mut rng = ChaCha20Rng::seed_from_u64(7);
    let mut admin = Administrator::new(&ctx, &mut rng);
    let v = Voter::new(&ctx, 0, &mut rng);
    let outsider = laocoon_core::mdvs::DvKeyPair::generate(&ctx, &mut rng);
    let registry = VoterRegistry::new(vec![*v.dv_public()]);
    admin
        .issue_credential(&ctx, &[*v.dv_public(), *outsider.public()], &mut rng)
        .unwrap();
    let cred = &admin.issued()[0];
    assert!(mdvs_verify(&ctx, &cred.sig, &cred.pk.to_bytes()));
    assert!(!verify_credential(&ctx, cred, admin.dv_public(), &registry));
}

#[test]
fn scripted_election_counts_exactly() {
    let mut e = ready(3, &["C1", "C2"], 8);
    e.cast(0, "C1").unwrap();
    e.cast(1, "C1").unwrap();
    e.cast(2, "C2").unwrap();
    assert_eq!(e.board().of_kind(Kind::Transaction).count(), 3);
    assert_eq!(e.candidates_open().unwrap(), vec![2, 1]);
    let r = finish(&mut e);
    assert_eq!(r.counts, vec![("C1".into(), 2), ("C2".into(), 1)]);
    assert_eq!((r.total_valid, r.unopened, r.rejected.total()), (3, 0, 0));
    e.board().verify_chain().unwrap();
    assert_eq!(e.board().of_kind(Kind::TallyResult).count(), 1);
}

#[test]
fn abstention_and_withheld_keys() {
    let mut e = ready(3, &["C1", "C2"], 9);
    e.cast(0, "C1").unwrap();
    e.cast(2, "C2").unwrap();
    e.trigger_tally().unwrap();
    e.publish_secrets(&["C2"]).unwrap();
    let view = BoardView::read(e.board()).unwrap();
    let rc = recount(&view).unwrap();
    assert_eq!(rc.withheld, vec!["C2".to_string()]);
    assert_eq!(rc.unopened.len(), 1);
    let r = e.tally().unwrap();
    assert_eq!(r.counts, vec![("C1".into(), 1), ("C2".into(), 0)]);
    assert_eq!((r.total_valid, r.unopened), (1, 1));
    assert_eq!(r.total_valid + r.unopened, e.board().of_kind(Kind::Transaction).count() as u64);
}

#[test]
fn no_count_before_the_tally_trigger() {
    let mut e = ready(2, &["C1", "C2"], 10);
    e.cast(0, "C1").unwrap();
    let view = BoardView::read(e.board()).unwrap();
    assert!(matches!(recount(&view), Err(ProtocolError::TallyNotTriggered)));
    assert!(matches!(e.tally(), Err(ProtocolError::TallyNotTriggered)));
    // Candidates keep their keys until the trigger.
    assert!(matches!(e.publish_secrets(&[]), Err(ProtocolError::TallyNotTriggered)));
    assert_eq!(e.board().of_kind(Kind::CandidateSecret).count(), 0);
}

#[test]
fn double_casts_count_once() {
    let mut e = ready(3, &["C1", "C2"], 11);
    e.cast(0, "C1").unwrap();
    e.cast(0, "C2").unwrap();
    e.cast(0, "C2").unwrap();
    e.cast(1, "C2").unwrap();
    let hashes: BTreeSet<_> = e
        .board()
        .of_kind(Kind::Ballot)
        .map(|b| BallotMessage::from_bytes(&b.payload).unwrap().cred_hash)
        .collect();
    assert_eq!(hashes.len(), 2, "repeat casts carry the same credential hash");
    let r = finish(&mut e);
    assert_eq!(r.counts, vec![("C1".into(), 1), ("C2".into(), 1)]);
    assert_eq!(r.rejected.used_credential, 2);
    assert_eq!(rejection_reasons(&e), vec![RejectReason::UsedCredential; 2]);
    assert_eq!(e.proxy().table().is_used(&e.voters()[0].wallet()[0].hash()), Some(true));
    assert_eq!(e.proxy().table().is_used(&e.voters()[2].wallet()[0].hash()), Some(false));
}

#[test]
fn unknown_credential_hashes_never_count() {
    let mut e = ready(2, &["C1", "C2"], 12);
    let mut rng = ChaCha20Rng::seed_from_u64(99);
    let template = {
        let v = &e.voters()[0];
        let held = v.wallet()[0].clone();
        make_ballot(e.ctx(), &held, e.candidates()[0].pre_public(), &mut rng)
    };
    for _ in 0..5 {
        let mut bm = template;
        rng.fill_bytes(&mut bm.cred_hash);
        e.submit(bm).unwrap();
    }
    let r = finish(&mut e);
    assert_eq!(r.total_valid, 0);
    assert_eq!(r.rejected.unknown_credential, 5);
    let err = e.proxy().rejections()[0].reason;
    assert_eq!(err.to_string(), "B6: reject-unknown-credential");
}

#[test]
fn unknown_candidate_is_refused() {
    let mut e = ready(1, &["C1", "C2"], 13);
    let err = e.cast(0, "C9").unwrap_err();
    assert_eq!(err.to_string(), "B3: unknown-candidate \"C9\"");
}

#[test]
fn forged_credentials_fool_the_coercer_but_not_the_proxy() {
    let mut e = ready(4, &["C1", "C2"], 14);
    let genuine_len = e.voters()[2].wallet()[0].credential.to_bytes().len();
    for v in 0..4 {
        let fake = e.forge_credential(v, 0).unwrap();
        assert!(e.coercer_accepts(&fake.credential));
        assert_eq!(fake.credential.to_bytes().len(), genuine_len);
        assert!(!e.proxy().table().contains(&fake.hash()));
        e.cast_with(&fake, "C2").unwrap();
    }
    e.cast(0, "C1").unwrap();
    let r = finish(&mut e);
    assert_eq!(r.counts, vec![("C1".into(), 1), ("C2".into(), 0)]);
    assert_eq!(rejection_reasons(&e), vec![RejectReason::UnknownCredential; 4]);
}

#[test]
fn pseudonym_keys_never_appear_on_the_board() {
    let mut e = ready(3, &["C1", "C2"], 15);
    for v in 0..3 {
        e.cast(v, "C1").unwrap();
    }
    finish(&mut e);
    let payloads: Vec<&[u8]> = e.board().entries().iter().map(|x| x.payload.as_slice()).collect();
    for v in e.voters() {
        let pk = v.wallet()[0].credential.pk;
        for needle in [pk.pk1.to_bytes().to_vec(), pk.pk2.to_bytes().to_vec()] {
            assert!(payloads.iter().all(|p| !p.windows(needle.len()).any(|w| w == needle.as_slice())));
        }
    }
}

#[test]
fn transactions_from_one_ballot_are_unlinkable_but_open_alike() {
    let e = ready(1, &["C1", "C2"], 16);
    let ctx = e.ctx();
    let mut rng = ChaCha20Rng::seed_from_u64(17);
    let held = &e.voters()[0].wallet()[0];
    let bm = make_ballot(ctx, held, e.candidates()[0].pre_public(), &mut rng);
    let m = ctx.encode(&Scalar::from_u64(1_700_000_000));
    let delta = enc2(ctx, &held.credential.pk, &m, &mut rng);
    let key = laocoon_core::pre::PreKeyPair::from_secret(
        ctx,
        e.candidates()[0].secret_entry().sk1,
        e.candidates()[0].secret_entry().sk2,
    )
    .unwrap();
    let mut seen = BTreeSet::new();
    for _ in 0..50 {
        let tx = reenc(ctx, &bm.ballot, &delta, &mut rng).unwrap();
        assert!(seen.insert(tx.to_bytes()));
        assert_eq!(dec1(&key, &tx), m);
    }
}

#[test]
fn candidates_see_only_their_own_running_count() {
    let mut e = ready(6, &["C1", "C2", "C3"], 18);
    let script = ["C2", "C1", "C2", "C3", "C2", "C1"];
    let mut truth = [0u64; 3];
    for (v, c) in script.iter().enumerate() {
        e.cast(v, c).unwrap();
        truth[e.config().candidate_index(c).unwrap()] += 1;
        assert_eq!(e.candidates_open().unwrap(), truth.to_vec());
    }
    let txs: Vec<u64> = e.board().of_kind(Kind::Transaction).map(|t| t.seq).collect();
    let mut all: Vec<u64> = e.candidates().iter().flat_map(|c| c.opened().to_vec()).collect();
    all.sort();
    assert_eq!(all, txs, "every transaction is recognised by exactly one candidate");
}

#[test]
fn concurrent_opening_agrees_with_sequential() {
    let mut a = ready(4, &["C1", "C2", "C3"], 19);
    let mut b = ready(4, &["C1", "C2", "C3"], 19);
    for (v, c) in ["C3", "C1", "C3", "C2"].iter().enumerate() {
        a.cast(v, c).unwrap();
        b.cast(v, c).unwrap();
    }
    assert_eq!(a.board(), b.board());
    assert_eq!(a.candidates_open().unwrap(), b.candidates_open_concurrent().unwrap());
    assert_eq!(
        a.metrics().get(Activity::CandidateOpen).ops,
        b.metrics().get(Activity::CandidateOpen).ops
    );
}

#[test]
fn wrong_candidate_never_recognises_a_transaction() {
    let e = ready(1, &["C1", "C2"], 20);
    let ctx = e.ctx();
    let mut rng = ChaCha20Rng::seed_from_u64(21);
    let held = &e.voters()[0].wallet()[0];
    let bm = make_ballot(ctx, held, e.candidates()[0].pre_public(), &mut rng);
    let other = e.candidates()[1].secret_entry();
    let other = laocoon_core::pre::PreKeyPair::from_secret(ctx, other.sk1, other.sk2).unwrap();
    for stp in 0..1000u64 {
        let m = ctx.encode(&Scalar::from_u64(stp));
        let delta = enc2(ctx, &held.credential.pk, &m, &mut rng);
        let tx = reenc(ctx, &bm.ballot, &delta, &mut rng).unwrap();
        assert_ne!(dec1(&other, &tx), m);
    }
}

#[test]
fn mix_window_batches_ballots() {
    let cfg = ElectionConfig {
        mix_window: 3,
        ..ElectionConfig::new(4, &["C1", "C2"])
    };
    let mut e = Election::new(cfg, 22).unwrap();
    e.setup().unwrap();
    e.dispatch().unwrap();
    e.cast(0, "C1").unwrap();
    e.cast(1, "C1").unwrap();
    assert_eq!(e.board().of_kind(Kind::Ballot).count(), 0);
    e.cast(2, "C2").unwrap();
    assert_eq!(e.board().of_kind(Kind::Ballot).count(), 3);
    e.cast(3, "C2").unwrap();
    let r = finish(&mut e);
    assert_eq!(r.counts, vec![("C1".into(), 2), ("C2".into(), 2)]);
}

#[test]
fn honest_audit_verifies_everyone() {
    let cfg = ElectionConfig {
        audit_enabled: true,
        ..ElectionConfig::new(4, &["C1", "C2"])
    };
    let mut e = Election::new(cfg, 23).unwrap();
    assert!(matches!(e.audit(), Err(ProtocolError::TallyMissing)));
    e.run(&[Some("C1"), None, Some("C2"), Some("C2")]).unwrap();
    let verdicts = e.audit().unwrap();
    assert_eq!(verdicts.len(), 3);
    assert!(verdicts.iter().all(|v| v.verified));
    assert_eq!(e.board().of_kind(Kind::Claim).count(), 0);
    assert_eq!(e.board().of_kind(Kind::CommitKey).count(), 1);
}

#[test]
fn suppressed_ballot_yields_one_claim() {
    let cfg = ElectionConfig {
        audit_enabled: true,
        ..ElectionConfig::new(4, &["C1", "C2"])
    };
    let mut e = Election::new(cfg, 24).unwrap();
    e.setup().unwrap();
    e.dispatch().unwrap();
    let victim = e.voters()[1].wallet()[0].hash();
    e.proxy_mut().faults.suppress.insert(victim);
    for v in 0..4 {
        e.cast(v, "C1").unwrap();
    }
    let r = finish(&mut e);
    assert_eq!(r.total_valid, 3);
    let verdicts = e.audit().unwrap();
    let failed: Vec<_> = verdicts.iter().filter(|v| !v.verified).collect();
    assert_eq!(failed.len(), 1);
    assert_eq!(failed[0].voter, 1);
    assert_eq!(e.board().of_kind(Kind::Claim).count(), 1);
}

#[test]
fn wrong_commit_key_fails_every_verdict() {
    let cfg = ElectionConfig {
        audit_enabled: true,
        ..ElectionConfig::new(3, &["C1", "C2"])
    };
    let mut e = Election::new(cfg, 25).unwrap();
    e.proxy_mut().faults.wrong_commit_key = true;
    e.run(&[Some("C1"), Some("C2"), Some("C1")]).unwrap();
    let verdicts = e.audit().unwrap();
    assert!(verdicts.iter().all(|v| !v.verified));
    assert_eq!(e.board().of_kind(Kind::Claim).count(), 3);
}

#[test]
fn audit_requires_the_extension() {
    let mut e = election(2, &["C1", "C2"], 26);
    e.run(&[Some("C1"), Some("C2")]).unwrap();
    assert!(matches!(e.audit(), Err(ProtocolError::AuditDisabled)));
    assert!(e
        .board()
        .of_kind(Kind::Transaction)
        .all(|t| VotingTransaction::from_bytes(&t.payload).unwrap().commitment.is_none()));
}

#[test]
fn same_seed_same_board() {
    let run = |seed| {
        let mut e = election(4, &["C1", "C2", "C3"], seed);
        e.run(&[Some("C1"), Some("C3"), None, Some("C3")]).unwrap();
        e.board().to_text()
    };
    assert_eq!(run(27), run(27));
    assert_ne!(run(27), run(28));
}

#[test]
fn per_vote_operation_counts() {
    let n = 4u64;
    let mut e = election(n as usize, &["C1", "C2"], 29);
    e.run(&[Some("C1"), Some("C2"), Some("C1"), Some("C1")]).unwrap();
    let m = e.metrics();
    let per = |a: Activity| {
        let s = m.get(a);
        assert_eq!(s.events, n, "{a}");
        let o = s.ops;
        [o.exp_g, o.exp_gt, o.pairings, o.sigs, o.vfys, o.encodings].map(|x| {
            assert_eq!(x % n, 0, "{a}");
            x / n
        })
    };
    //                                    E1 E2 P Sig Vfy enc
    assert_eq!(per(Activity::AdminDispatch), [3, 2, 0, 1, 0, 1]);
    assert_eq!(per(Activity::ProxyDispatch), [0, 2, 4, 0, 0, 0]);
    assert_eq!(per(Activity::VoterReceive), [0, 1, 0, 0, 1, 0]);
    assert_eq!(per(Activity::VoterCast), [2, 2, 1, 0, 0, 0]);
    assert_eq!(per(Activity::ProxyCast), [2, 3, 4, 0, 0, 1]);
    // Each candidate scans each transaction once.
    let open = m.get(Activity::CandidateOpen).ops;
    assert_eq!((open.exp_g, open.exp_gt, open.pairings, open.encodings), (0, 2 * n, 0, 2 * n));
}

#[test]
fn zero_voter_election_costs_nothing_per_vote() {
    let mut e = election(0, &["C1", "C2"], 30);
    let r = e.run(&[]).unwrap();
    assert_eq!(r.total_valid, 0);
    for a in [
        Activity::AdminDispatch,
        Activity::ProxyDispatch,
        Activity::CredentialList,
        Activity::VoterReceive,
        Activity::VoterCast,
        Activity::ProxyCast,
        Activity::CandidateOpen,
    ] {
        assert!(e.metrics().get(a).ops.is_zero(), "{a}");
    }
}

#[test]
fn tampered_secret_is_detected() {
    let mut e = ready(1, &["C1", "C2"], 31);
    e.cast(0, "C1").unwrap();
    e.trigger_tally().unwrap();
    let mut s = e.candidates()[0].secret_entry();
    s.sk2 = s.sk2 + Scalar::one();
    e.board_mut()
        .append(Phase::Open, Kind::CandidateSecret, s.to_bytes())
        .unwrap();
    assert!(matches!(e.tally(), Err(ProtocolError::BadCandidateSecret(id)) if id == "C1"));
}
