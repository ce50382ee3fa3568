use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use super::arith::{mod_add, mod_sub, sign_function};
use super::types::{EncryptedPrivacy, MeasurementRecord};
use super::{ProtocolConfig, ProtocolError};

/// Ascending order of participants at one index, e.g. `0<1=2`.
///
/// Each group holds participants with equal values in ascending index order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationChain {
    pub groups: Vec<Vec<usize>>,
}

impl RelationChain {
    pub fn participants(&self) -> impl Iterator<Item = usize> + '_ {
        self.groups.iter().flatten().copied()
    }
}

impl fmt::Display for RelationChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text: Vec<String> = self
            .groups
            .iter()
            .map(|g| g.iter().map(|i| i.to_string()).collect::<Vec<_>>().join("="))
            .collect();
        f.write_str(&text.join("<"))
    }
}

impl FromStr for RelationChain {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let groups = s
            .split('<')
            .map(|g| g.split('=').map(|i| i.trim().parse::<usize>().map_err(|e| format!("{s:?}: {e}"))).collect())
            .collect::<Result<Vec<Vec<usize>>, _>>()?;
        Ok(RelationChain { groups })
    }
}

/// Everything TP derives in the comparison step.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonOutcome {
    /// `t[i][j] = p̄_{i,j} ⊕ w_{i,j}`.
    pub t: Vec<Vec<usize>>,
    /// `t(i, i')` for `i < i'`, one entry per index.
    pub differences: BTreeMap<(usize, usize), Vec<usize>>,
    /// `s(i, i')_j` keyed by `(i, i', j)` with `i < i'`.
    pub pairwise_signs: BTreeMap<(usize, usize, usize), i8>,
    pub relations: Vec<RelationChain>,
}

impl ComparisonOutcome {
    pub fn signs(&self, i: usize, i2: usize) -> Vec<i8> {
        (0..self.relations.len()).map(|j| self.pairwise_signs[&(i, i2, j)]).collect()
    }
}

/// Orders participants at index `j` using only the pairwise signs.
fn chain_from_signs(k: usize, j: usize, signs: &BTreeMap<(usize, usize, usize), i8>) -> Result<RelationChain, ProtocolError> {
    // sign(a, b): +1 when a's value exceeds b's.
    let sign = |a: usize, b: usize| if a < b { signs[&(a, b, j)] } else { -signs[&(b, a, j)] };
    let rank: Vec<usize> = (0..k).map(|a| (0..k).filter(|&b| b != a && sign(a, b) == 1).count()).collect();

    // The signs form a weak order iff they agree with the induced ranks.
    for a in 0..k {
        for b in a + 1..k {
            let implied = (rank[a] as i64 - rank[b] as i64).signum() as i8;
            if implied != sign(a, b) {
                return Err(ProtocolError::Integrity {
                    index: j,
                    detail: format!("s({a},{b}) = {} contradicts the other pairs", sign(a, b)),
                });
            }
        }
    }
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by_key(|&a| (rank[a], a));
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for a in order {
        match groups.last_mut() {
            Some(g) if rank[g[0]] == rank[a] => g.push(a),
            _ => groups.push(vec![a]),
        }
    }
    Ok(RelationChain { groups })
}

/// TP's comparison: combine encrypted privacies with measurement records,
/// take pairwise masked differences and publish one relation chain per index.
pub fn tp_compare(
    encrypted: &[EncryptedPrivacy],
    records: &[MeasurementRecord],
    config: &ProtocolConfig,
) -> Result<ComparisonOutcome, ProtocolError> {
    let (k, m, d) = (config.k, config.m, config.d);
    if encrypted.len() != k {
        return Err(ProtocolError::LengthMismatch { what: "encrypted privacies", expected: k, actual: encrypted.len() });
    }
    if records.len() != k {
        return Err(ProtocolError::LengthMismatch { what: "measurement records", expected: k, actual: records.len() });
    }
    let mut t = Vec::with_capacity(k);
    for (i, (e, w)) in encrypted.iter().zip(records).enumerate() {
        for owner in [e.owner, w.owner] {
            if owner != i {
                return Err(ProtocolError::OwnerMismatch { expected: i, actual: owner });
            }
        }
        for len in [e.values.len(), w.values.len()] {
            if len != m {
                return Err(ProtocolError::LengthMismatch { what: "per-participant vector", expected: m, actual: len });
            }
        }
        t.push(e.values.iter().zip(&w.values).map(|(&a, &b)| mod_add(a, b, d)).collect::<Result<Vec<_>, _>>()?);
    }

    let mut differences = BTreeMap::new();
    let mut pairwise_signs = BTreeMap::new();
    for i in 0..k {
        for i2 in i + 1..k {
            let diff = (0..m).map(|j| mod_sub(t[i][j], t[i2][j], d)).collect::<Result<Vec<_>, _>>()?;
            for (j, &x) in diff.iter().enumerate() {
                pairwise_signs.insert((i, i2, j), sign_function(x, config.l)?);
            }
            differences.insert((i, i2), diff);
        }
    }
    let relations = (0..m).map(|j| chain_from_signs(k, j, &pairwise_signs)).collect::<Result<_, _>>()?;
    Ok(ComparisonOutcome { t, differences, pairwise_signs, relations })
}
