//! Honest elections tally exactly what was scripted.

use laocoon_core::protocol::{Election, ElectionConfig};
use proptest::prelude::*;

fn scripted(voters: usize, candidates: usize, votes: &[Option<usize>], seed: u64) {
    let ids: Vec<String> = (0..candidates).map(|c| format!("C{}", c + 1)).collect();
    let refs: Vec<&str> = ids.iter().map(String::as_str).collect();
    let mut e = Election::new(ElectionConfig::new(voters, &refs), seed).unwrap();
    let choices: Vec<Option<&str>> = votes.iter().map(|v| v.map(|c| refs[c])).collect();
    let report = e.run(&choices).unwrap();

    let mut expected = vec![0u64; candidates];
    for c in votes.iter().flatten() {
        expected[*c] += 1;
    }
    let got: Vec<u64> = report.counts.iter().map(|(_, n)| *n).collect();
    assert_eq!(got, expected);
    assert_eq!(report.unopened, 0);
    assert_eq!(report.rejected.total(), 0);
    e.board().verify_chain().unwrap();
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, ..ProptestConfig::default() })]

    #[test]
    fn small_elections(
        (voters, candidates, votes) in (1usize..=8, 2usize..=5).prop_flat_map(|(v, c)| {
            (Just(v), Just(c), prop::collection::vec(prop::option::weighted(0.85, 0..c), v))
        }),
        seed in any::<u64>(),
    ) {
        scripted(voters, candidates, &votes, seed);
    }
}

#[test]
fn two_hundred_voters_ten_candidates() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(200);
    let votes: Vec<Option<usize>> = (0..200).map(|_| Some(rng.gen_range(0..10))).collect();
    scripted(200, 10, &votes, 200);
}
