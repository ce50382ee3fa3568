use std::collections::{BTreeMap, BTreeSet};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::eve::{InterceptResend, Interception};
use crate::protocol::{CheckRecord, Hop, Interposer, Link};
use crate::qudit::{BasisKind, EngineError, Handle, QuditPool};
use crate::Scalar;

/// A participant who measures their own GHZ particles before encoding to
/// learn each branch `c_j`, then intercepts the victim's return leg to read
/// `c_j ⊕ r_{victim,j}` and so recover the victim's mask.
#[derive(Debug, Clone)]
pub struct DishonestParticipant {
    pub attacker: usize,
    pub victim: usize,
    /// Branch values the attacker read from their own carriers.
    pub branch: Vec<usize>,
    /// Ground truth for the victim's unencoded carriers, for scoring only.
    pub victim_branch: Vec<Option<usize>>,
    pub eve: InterceptResend,
    rng: ChaCha8Rng,
    victim_handles: Vec<Handle>,
}

impl DishonestParticipant {
    pub fn new(attacker: usize, victim: usize, seed: u64) -> Self {
        DishonestParticipant {
            attacker,
            victim,
            branch: Vec::new(),
            victim_branch: Vec::new(),
            eve: InterceptResend::new(Some(victim), Link::Return, seed ^ 0x05ee_de7e),
            rng: ChaCha8Rng::seed_from_u64(seed),
            victim_handles: Vec::new(),
        }
    }

    pub fn with_z_probability(mut self, p: f64) -> Self {
        self.eve = self.eve.with_z_probability(p);
        self
    }

    /// Whether the attacker's branch values equal the victim's.
    pub fn branch_matches(&self) -> bool {
        !self.branch.is_empty()
            && self.branch.len() == self.victim_branch.len()
            && self.branch.iter().zip(&self.victim_branch).all(|(a, v)| Some(*a) == *v)
    }

    /// Mask entries `(j, r_{victim,j})` recovered from Z-basis interceptions
    /// of payload carriers. `decoy_positions` are the victim's return-leg
    /// decoy slots, which the attacker cannot know in advance; any
    /// interception landing on one is wasted.
    pub fn recovered_mask(&self, decoy_positions: &BTreeSet<usize>, d: usize) -> BTreeMap<usize, usize> {
        let mut payload_index = BTreeMap::new();
        let mut next = 0;
        let max = self.eve.log.iter().map(|e| e.position).max().map_or(0, |p| p + 1);
        for pos in 0..max {
            if !decoy_positions.contains(&pos) {
                payload_index.insert(pos, next);
                next += 1;
            }
        }
        self.eve
            .log
            .iter()
            .filter(|e: &&Interception| e.basis == BasisKind::Z)
            .filter_map(|e| {
                let j = *payload_index.get(&e.position)?;
                let c = *self.branch.get(j)?;
                Some((j, (e.outcome + d - c) % d))
            })
            .collect()
    }

    pub fn decoy_positions(&self, checks: &[CheckRecord]) -> BTreeSet<usize> {
        checks
            .iter()
            .filter(|c| c.link == Link::Return && c.participant == self.victim)
            .flat_map(|c| c.check.observations.iter().map(|o| o.position))
            .collect()
    }

    fn read_victim(&mut self, pool: &QuditPool<impl Scalar>) {
        self.victim_branch = self.victim_handles.iter().map(|&h| pool.definite_value(h)).collect();
    }
}

impl<T: Scalar> Interposer<T> for DishonestParticipant {
    fn on_quantum_send(&mut self, hop: Hop, carriers: &mut [Handle], pool: &mut QuditPool<T>) -> Result<(), EngineError> {
        self.eve.on_quantum_send(hop, carriers, pool)
    }

    fn before_encoding(&mut self, participant: usize, carriers: &[Handle], pool: &mut QuditPool<T>) -> Result<(), EngineError> {
        if participant == self.victim {
            self.victim_handles = carriers.to_vec();
        }
        if participant == self.attacker {
            self.branch = carriers
                .iter()
                .map(|&h| pool.measure(h, BasisKind::Z, &mut self.rng))
                .collect::<Result<_, _>>()?;
        }
        if !self.branch.is_empty() && !self.victim_handles.is_empty() {
            self.read_victim(pool);
        }
        Ok(())
    }
}

/// Values of one privacy entry consistent with what the attacker holds,
/// mapped to the number of explanations for each. With neither the mask nor
/// the encrypted entry every value in `Z_d` remains; with both the entry is
/// fixed.
pub fn attacker_candidates(d: usize, known_mask: Option<usize>, known_encrypted: Option<usize>) -> BTreeMap<usize, usize> {
    let mut out = BTreeMap::new();
    for r in 0..d {
        if known_mask.is_some_and(|m| m != r) {
            continue;
        }
        for e in 0..d {
            if known_encrypted.is_some_and(|x| x != e) {
                continue;
            }
            *out.entry((e + r) % d).or_insert(0) += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn candidate_counts() {
        assert_eq!(attacker_candidates(9, None, None).len(), 9);
        assert_eq!(attacker_candidates(9, Some(3), None).len(), 9);
        assert_eq!(attacker_candidates(9, None, Some(4)).len(), 9);
        let fixed = attacker_candidates(9, Some(3), Some(4));
        assert_eq!(fixed.into_iter().collect::<Vec<_>>(), vec![(7, 1)]);
        assert!(attacker_candidates(5, None, None).values().all(|&n| n == 5));
    }
}
