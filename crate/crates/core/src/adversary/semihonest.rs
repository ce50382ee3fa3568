use std::collections::{BTreeMap, BTreeSet};

use super::AdversaryError;
use crate::protocol::{EncryptedPrivacy, MeasurementRecord, ProtocolError};

/// What a semi-honest TP can infer from `w` and `p̄` alone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TpKnowledge {
    /// `candidates[i][j]`: values of `p_{i,j}` consistent with TP's view.
    pub candidates: Vec<Vec<BTreeSet<usize>>>,
    /// Consistent values of `p_{i,j} ⊖ p_{i',j}`, keyed by `(i, i', j)`, `i < i'`.
    pub differences: BTreeMap<(usize, usize, usize), BTreeSet<usize>>,
}

impl TpKnowledge {
    pub fn candidate_set_size(&self, i: usize, j: usize) -> usize {
        self.candidates[i][j].len()
    }

    /// The difference if TP's view pins it down.
    pub fn difference(&self, i: usize, i2: usize, j: usize) -> Option<usize> {
        let set = self.differences.get(&(i, i2, j))?;
        (set.len() == 1).then(|| *set.iter().next().unwrap())
    }
}

/// Enumerates every assignment of the hidden branch value `c_j`. Each one
/// fixes all masks (`r_{i,j} = w_{i,j} ⊖ c_j`) and hence all privacies, so
/// the enumeration covers every `(c, r, p)` consistent with TP's view.
#[allow(clippy::needless_range_loop)]
pub fn semihonest_tp_analysis(
    d: usize,
    records: &[MeasurementRecord],
    encrypted: &[EncryptedPrivacy],
) -> Result<TpKnowledge, AdversaryError> {
    let k = records.len();
    if encrypted.len() != k {
        return Err(ProtocolError::LengthMismatch { what: "encrypted privacies", expected: k, actual: encrypted.len() }.into());
    }
    let m = records.first().map_or(0, |r| r.values.len());
    if records.iter().map(|r| r.values.len()).chain(encrypted.iter().map(|e| e.values.len())).any(|len| len != m) {
        return Err(AdversaryError::InvalidScenario("ragged TP view".into()));
    }
    let mut candidates = vec![vec![BTreeSet::new(); m]; k];
    let mut differences: BTreeMap<(usize, usize, usize), BTreeSet<usize>> = BTreeMap::new();
    for j in 0..m {
        for c in 0..d {
            let p: Vec<usize> = (0..k)
                .map(|i| {
                    let r = (records[i].values[j] + d - c) % d;
                    (encrypted[i].values[j] + r) % d
                })
                .collect();
            for i in 0..k {
                candidates[i][j].insert(p[i]);
                for i2 in i + 1..k {
                    differences.entry((i, i2, j)).or_default().insert((p[i] + d - p[i2]) % d);
                }
            }
        }
    }
    Ok(TpKnowledge { candidates, differences })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_example_view() {
        let w = [[4, 7], [2, 6], [6, 2]];
        let e = [[6, 7], [0, 6], [5, 2]];
        let records: Vec<_> = w.iter().enumerate().map(|(i, v)| MeasurementRecord { owner: i, values: v.to_vec() }).collect();
        let enc: Vec<_> = e.iter().enumerate().map(|(i, v)| EncryptedPrivacy { owner: i, values: v.to_vec() }).collect();
        let know = semihonest_tp_analysis(9, &records, &enc).unwrap();
        for i in 0..3 {
            for j in 0..2 {
                assert_eq!(know.candidate_set_size(i, j), 9);
            }
        }
        // p = (1,4), (2,2), (2,3)
        assert_eq!(know.difference(0, 1, 0), Some(8));
        assert_eq!(know.difference(0, 1, 1), Some(2));
        assert_eq!(know.difference(1, 2, 1), Some(8));
    }

    #[test]
    fn single_participant_view() {
        let records = [MeasurementRecord { owner: 0, values: vec![3] }];
        let enc = [EncryptedPrivacy { owner: 0, values: vec![1] }];
        let know = semihonest_tp_analysis(5, &records, &enc).unwrap();
        assert_eq!(know.candidate_set_size(0, 0), 5);
        assert!(know.differences.is_empty());
    }
}
