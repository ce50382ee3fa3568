use proptest::prelude::*;
use qpc_core::protocol::{decrypt, mod_add, mod_sub, participant_encrypt, PrivacyVector, RandomMask, RelationChain};
use qpc_core::qudit::{apply_single, make_ghz, qft_matrix, shift_operator, QuditState};

proptest! {
    #[test]
    fn shift_operators_are_unitary(d in 2usize..=13, r in 0usize..13) {
        let u = shift_operator::<f64>(d, r % d).unwrap();
        prop_assert!(u.unitarity_deviation() < 1e-10);
    }

    #[test]
    fn gates_preserve_norm(d in 2usize..=7, k in 1usize..=4, ops in prop::collection::vec((0usize..4, 0usize..7, any::<bool>()), 0..12)) {
        let mut state: QuditState<f64> = make_ghz(d, k).unwrap();
        let qft = qft_matrix::<f64>(d).unwrap();
        for (pos, r, use_qft) in ops {
            let u = if use_qft { qft.clone() } else { shift_operator(d, r % d).unwrap() };
            state = apply_single(&state, pos % k, &u).unwrap();
        }
        prop_assert!((state.norm_sqr() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn encryption_round_trips(l in 1usize..=8, seed in any::<u64>()) {
        use rand::SeedableRng;
        let d = 2 * l + 1;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let p = PrivacyVector::random(0, 5, l, &mut rng);
        let r = RandomMask::random(0, 5, d, &mut rng);
        let e = participant_encrypt(&p, &r, d).unwrap();
        prop_assert_eq!(decrypt(&e, &r, d).unwrap(), p.values);
    }

    #[test]
    fn modular_ops_stay_in_range(d in 1usize..50, a in 0usize..50, b in 0usize..50) {
        let (a, b) = (a % d, b % d);
        let s = mod_add(a, b, d).unwrap();
        prop_assert!(s < d);
        prop_assert_eq!(mod_sub(s, b, d).unwrap(), a);
    }

    #[test]
    fn relation_chain_round_trips(groups in prop::collection::vec(1usize..4, 1..5)) {
        let mut next = 0;
        let chain = RelationChain {
            groups: groups.iter().map(|&n| { let g: Vec<usize> = (next..next + n).collect(); next += n; g }).collect(),
        };
        let parsed: RelationChain = chain.to_string().parse().unwrap();
        prop_assert_eq!(parsed, chain);
    }
}
