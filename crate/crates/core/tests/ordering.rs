use qpc_core::protocol::{run_protocol, ForcedRandomness, PrivacyVector, ProtocolConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Ascending chain from plain integers: stable sort by value, `=` between
/// equal neighbours, `<` otherwise.
fn sorted_chain(values: &[usize]) -> String {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by_key(|&i| (values[i], i));
    let mut out = idx[0].to_string();
    for w in idx.windows(2) {
        out.push(if values[w[0]] == values[w[1]] { '=' } else { '<' });
        out.push_str(&w[1].to_string());
    }
    out
}

#[test]
fn oracle_self_check() {
    assert_eq!(sorted_chain(&[1, 2, 2]), "0<1=2");
    assert_eq!(sorted_chain(&[4, 2, 3]), "1<2<0");
    assert_eq!(sorted_chain(&[0, 0, 0, 0]), "0=1=2=3");
}

#[test]
fn random_honest_runs_match_plaintext_sort() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x04d3);
    for run in 0..300 {
        let l = rng.random_range(1..=6);
        let k = rng.random_range(3..=5);
        let m = rng.random_range(1..=8);
        let config = ProtocolConfig::new(l, k, m).unwrap().seed(rng.random());
        let privacies: Vec<_> = (0..k).map(|i| PrivacyVector::random(i, m, l, &mut rng)).collect();
        let out = run_protocol::<f64>(&config, &privacies, &ForcedRandomness::default(), None).unwrap();
        let done = out.completed().unwrap_or_else(|| panic!("run {run} aborted: {:?}", out.abort()));
        for j in 0..m {
            let column: Vec<usize> = privacies.iter().map(|p| p.values[j]).collect();
            assert_eq!(done.outcome.relations[j].to_string(), sorted_chain(&column), "run {run} index {j}");
        }
    }
}

#[test]
fn extreme_values_compare_correctly() {
    // Largest gap allowed by the range restriction: 0 vs l.
    for l in 1..=6 {
        let config = ProtocolConfig::new(l, 3, 2).unwrap().seed(l as u64);
        let privacies = vec![
            PrivacyVector::new(0, vec![0, l], l).unwrap(),
            PrivacyVector::new(1, vec![l, 0], l).unwrap(),
            PrivacyVector::new(2, vec![0, l], l).unwrap(),
        ];
        let out = run_protocol::<f64>(&config, &privacies, &ForcedRandomness::default(), None).unwrap();
        let rel: Vec<String> = out.completed().unwrap().outcome.relations.iter().map(|r| r.to_string()).collect();
        assert_eq!(rel, ["0=2<1", "1<0=2"]);
    }
}
