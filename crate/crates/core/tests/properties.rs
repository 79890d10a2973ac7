//! Randomized algebraic invariants of the permutation and expansion layers.

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;

use genus::expr::{parse_word, Expression, TraceMonomial};
use genus::gluing::expand;
use genus::perm::SignedPermutation;

/// A uniformly random signed permutation of ±[n], seeded.
fn random_perm(n: usize, seed: u64) -> SignedPermutation {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    // A random bijection on {±1..±n}: shuffle all 2n signed values.
    let mut image: Vec<i64> = (1..=n as i64).flat_map(|v| [v, -v]).collect();
    image.shuffle(&mut rng);
    // Decompose the functional graph into orbits for from_cycles.
    let mut seen = vec![false; 2 * n];
    let slot = |x: i64| -> usize {
        if x > 0 {
            x as usize - 1
        } else {
            n + (-x) as usize - 1
        }
    };
    let mut orbit_cycles = Vec::new();
    for start in 0..2 * n {
        if seen[start] {
            continue;
        }
        let mut cyc = Vec::new();
        let mut cur = start;
        while !seen[cur] {
            seen[cur] = true;
            let x = if cur < n {
                (cur + 1) as i64
            } else {
                -((cur - n + 1) as i64)
            };
            cyc.push(x);
            cur = slot(image[cur]);
        }
        orbit_cycles.push(cyc);
    }
    SignedPermutation::from_cycles(&orbit_cycles, n).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn composition_is_associative(n in 1usize..8, s1: u64, s2: u64, s3: u64) {
        let p = random_perm(n, s1);
        let q = random_perm(n, s2);
        let r = random_perm(n, s3);
        let left = p.compose(&q).unwrap().compose(&r).unwrap();
        let right = p.compose(&q.compose(&r).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn inverse_cancels(n in 1usize..8, s: u64) {
        let p = random_perm(n, s);
        prop_assert!(p.compose(&p.inverse()).unwrap().is_identity());
        prop_assert!(p.inverse().compose(&p).unwrap().is_identity());
    }

    #[test]
    fn cycle_count_is_conjugation_invariant(n in 1usize..8, s1: u64, s2: u64) {
        let p = random_perm(n, s1);
        let q = random_perm(n, s2);
        let conj = q.compose(&p).unwrap().compose(&q.inverse()).unwrap();
        prop_assert_eq!(conj.cycle_count(), p.cycle_count());
    }

    #[test]
    fn display_parse_roundtrip(n in 1usize..8, s: u64) {
        let p = random_perm(n, s);
        let q = SignedPermutation::parse_cycles(&p.to_string(), n).unwrap();
        prop_assert_eq!(p, q);
    }

    #[test]
    fn monomial_canonical_under_rotation_and_reversal(
        entries in prop::collection::vec((1u32..6, any::<bool>()), 1..6),
        rot in 0usize..6,
    ) {
        let m = TraceMonomial::new(entries.clone());
        let k = rot % entries.len();
        let mut rotated = entries[k..].to_vec();
        rotated.extend_from_slice(&entries[..k]);
        prop_assert_eq!(&TraceMonomial::new(rotated), &m);
        let reversed: Vec<(u32, bool)> =
            entries.iter().rev().map(|&(l, t)| (l, !t)).collect();
        prop_assert_eq!(&TraceMonomial::new(reversed), &m);
    }

    #[test]
    fn expectation_invariant_under_word_transposition(
        letters in prop::collection::vec(prop::sample::select(vec!["Z", "Z'", "T"]), 1..7),
    ) {
        let word = parse_word(&letters.join(" ")).unwrap();
        let direct = expand(&Expression(vec![word.clone()])).unwrap();
        let transposed = expand(&Expression(vec![word.reversed_transposed()])).unwrap();
        prop_assert_eq!(direct, transposed);
    }
}
