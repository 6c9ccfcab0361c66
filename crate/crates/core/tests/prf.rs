mod common;

use common::*;
use proptest::prelude::*;
use qbe_core::prf::{
    ggm_eval, is_key_permutation, oracle_apply, parallel_compose, BlockPermutation,
    FamilyDescriptor, FeistelPermutation, FunctionFamily, TablePermutation, DEFAULT_ROUNDS,
};
use qbe_core::{BitString, PureState};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn permutation_families(n: u32, seed: u64) -> Vec<FunctionFamily> {
    vec![
        FunctionFamily::xor(n).unwrap(),
        FunctionFamily::feistel(n, seed, DEFAULT_ROUNDS).unwrap(),
        FunctionFamily::ggm(n, seed, DEFAULT_ROUNDS).unwrap(),
    ]
}

#[test]
fn built_in_families_are_key_permutations_up_to_eight_bits() {
    for n in 1..=8 {
        for f in permutation_families(n, 1000 + n as u64) {
            for x in all_strings(n) {
                assert!(is_key_permutation(&f, &x).unwrap(), "{f:?} x={x}");
            }
        }
    }
}

#[test]
fn colliding_table_is_not_a_key_permutation() {
    // Keys 0 and 1 share output 0 at every input.
    let rows = vec![
        vec![0, 0, 0, 0],
        vec![0, 0, 0, 0],
        vec![2, 2, 2, 2],
        vec![3, 3, 3, 3],
    ];
    let f = FunctionFamily::custom_table(2, &rows).unwrap();
    for x in all_strings(2) {
        assert!(!is_key_permutation(&f, &x).unwrap());
    }
}

#[test]
fn parallel_composition_preserves_key_permutations() {
    let halves = permutation_families(3, 5);
    for f in &halves {
        for g in &halves {
            let h = parallel_compose(f, g).unwrap();
            for x in all_strings(6) {
                assert!(is_key_permutation(&h, &x).unwrap(), "{f:?} ∥ {g:?}");
            }
        }
    }
}

#[test]
fn parallel_composition_matches_componentwise_eval() {
    let f = FunctionFamily::feistel(2, 17, 4).unwrap();
    let g = FunctionFamily::truly_random(2, 18).unwrap();
    let h = parallel_compose(&f, &g).unwrap();
    for k1 in all_strings(2) {
        for k2 in all_strings(2) {
            for x1 in all_strings(2) {
                for x2 in all_strings(2) {
                    let got = h
                        .eval(&k1.concat(&k2).unwrap(), &x1.concat(&x2).unwrap())
                        .unwrap();
                    let (left, right) = got.split_at(2).unwrap();
                    assert_eq!(left, f.eval(&k1, &x1).unwrap());
                    assert_eq!(right, g.eval(&k2, &x2).unwrap());
                }
            }
        }
    }
}

#[test]
fn ggm_with_table_permutations_matches_hand_composition() {
    // G0 = +1 mod 8, G1 = ×3 mod 8 (odd multiplier, so a bijection).
    let g0 = TablePermutation::new(3, (0..8).map(|v| (v + 1) % 8).collect()).unwrap();
    let g1 = TablePermutation::new(3, (0..8).map(|v| (v * 3) % 8).collect()).unwrap();
    let k = b("101");
    // x = 110: G_{x1}(G_{x2}(G_{x3}(k))) = G1(G1(G0(5))) = G1(G1(6)) = G1(2) = 6.
    assert_eq!(ggm_eval(&g0, &g1, &k, &b("110")).unwrap(), b("110"));
    // x = 000 iterates G0 three times: 5 → 6 → 7 → 0.
    assert_eq!(ggm_eval(&g0, &g1, &k, &b("000")).unwrap(), b("000"));
}

#[test]
fn feistel_inverse_is_exhaustive_at_six_bits() {
    let p = FeistelPermutation::new(6, 0xfeed, 5).unwrap();
    for x in 0..64 {
        assert_eq!(p.invert(p.apply(x)), x);
    }
}

#[test]
fn truly_random_memo_is_stable_and_seed_dependent() {
    let f = FunctionFamily::truly_random(6, 1).unwrap();
    let first: Vec<_> = all_strings(6)
        .map(|x| f.eval(&b("010101"), &x).unwrap())
        .collect();
    let second: Vec<_> = all_strings(6)
        .map(|x| f.eval(&b("010101"), &x).unwrap())
        .collect();
    assert_eq!(first, second);
    let other = FunctionFamily::truly_random(6, 2).unwrap();
    let third: Vec<_> = all_strings(6)
        .map(|x| other.eval(&b("010101"), &x).unwrap())
        .collect();
    if first == third {
        eprintln!("note: seeds 1 and 2 produced identical 64-entry rows");
    }
}

#[test]
fn concurrent_first_evaluations_agree() {
    let f = FunctionFamily::truly_random(10, 77).unwrap();
    let results: Vec<Vec<u64>> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..8)
            .map(|_| {
                let f = &f;
                s.spawn(move || {
                    (0..256)
                        .map(|x| {
                            f.eval(
                                &BitString::new(3, 10).unwrap(),
                                &BitString::new(x, 10).unwrap(),
                            )
                            .unwrap()
                            .value()
                        })
                        .collect()
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    assert!(results.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn descriptors_round_trip_for_every_kind() {
    let rows = vec![vec![1, 0], vec![0, 1]];
    let fams = vec![
        FunctionFamily::truly_random(3, 4).unwrap(),
        FunctionFamily::xor(3).unwrap(),
        FunctionFamily::feistel(3, 4, 6).unwrap(),
        FunctionFamily::ggm(3, 4, 3).unwrap(),
        parallel_compose(
            &FunctionFamily::xor(2).unwrap(),
            &FunctionFamily::ggm(2, 1, 4).unwrap(),
        )
        .unwrap(),
        FunctionFamily::custom_table(1, &rows).unwrap(),
    ];
    for f in fams {
        let json = serde_json::to_string(&f.descriptor()).unwrap();
        let d: FamilyDescriptor = serde_json::from_str(&json).unwrap();
        let g = FunctionFamily::from_descriptor(&d).unwrap();
        let n = f.n();
        for k in all_strings(n).take(8) {
            for x in all_strings(n).take(8) {
                assert_eq!(f.eval(&k, &x).unwrap(), g.eval(&k, &x).unwrap(), "{json}");
            }
        }
    }
}

#[test]
fn oracle_on_uniform_superposition_keeps_unit_norm() {
    let f = FunctionFamily::ggm(3, 2, 4).unwrap();
    let plus = PureState::plus().power(6).unwrap();
    let out = oracle_apply(&f, &b("011"), &plus).unwrap();
    assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn oracle_is_unitary(n in 1u32..=4, seed in any::<u64>(), key in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = FunctionFamily::truly_random(n, seed).unwrap();
        let k = BitString::new(key & ((1 << n) - 1), n).unwrap();
        let s = PureState::random(2 * n, &mut rng).unwrap();
        let t = PureState::random(2 * n, &mut rng).unwrap();
        let (us, ut) = (oracle_apply(&f, &k, &s).unwrap(), oracle_apply(&f, &k, &t).unwrap());
        prop_assert!((us.norm_sqr() - 1.0).abs() <= 1e-12);
        prop_assert!((us.inner(&ut).unwrap() - s.inner(&t).unwrap()).norm() <= 1e-12);
    }

    #[test]
    fn eval_is_deterministic(n in 1u32..=8, seed in any::<u64>(), k in any::<u64>(), x in any::<u64>()) {
        let mask = (1u64 << n) - 1;
        let (k, x) = (BitString::new(k & mask, n).unwrap(), BitString::new(x & mask, n).unwrap());
        for f in permutation_families(n, seed).into_iter().chain([FunctionFamily::truly_random(n, seed).unwrap()]) {
            let again = FunctionFamily::from_descriptor(&f.descriptor()).unwrap();
            prop_assert_eq!(f.eval(&k, &x).unwrap(), again.eval(&k, &x).unwrap());
        }
    }
}
