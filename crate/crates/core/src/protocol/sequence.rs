use rand::seq::index::sample;
use rand::Rng;

use super::transcript::Party;
use super::ProtocolError;
use crate::qudit::{BasisKind, Handle, QuditPool};
use crate::Scalar;

/// A decoy the sender inserted: where, in which basis, with which value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecoySlot {
    pub position: usize,
    pub basis: BasisKind,
    pub value: usize,
}

/// A particle sequence in transit together with the sender's private record
/// of its decoys. Only `carriers` is visible on the channel.
#[derive(Debug, Clone, PartialEq)]
pub struct DecoratedSequence {
    pub carriers: Vec<Handle>,
    pub decoy_slots: Vec<DecoySlot>,
    pub owner_claim: Party,
}

impl DecoratedSequence {
    /// Positions and bases the sender publishes once receipt is confirmed.
    pub fn announcement(&self) -> Vec<(usize, BasisKind)> {
        self.decoy_slots.iter().map(|s| (s.position, s.basis)).collect()
    }

    /// Carriers that are not decoys, in order.
    pub fn payload(&self) -> Vec<Handle> {
        self.carriers
            .iter()
            .enumerate()
            .filter(|(i, _)| !self.decoy_slots.iter().any(|s| s.position == *i))
            .map(|(_, h)| *h)
            .collect()
    }
}

/// Interleaves `count` fresh decoys (uniform value and basis) with `payload`
/// at uniformly random distinct positions.
pub fn insert_decoys<T: Scalar, R: Rng + ?Sized>(
    pool: &mut QuditPool<T>,
    payload: &[Handle],
    count: usize,
    sender: Party,
    rng: &mut R,
) -> Result<DecoratedSequence, ProtocolError> {
    let total = payload.len() + count;
    let mut positions = sample(rng, total, count).into_vec();
    positions.sort_unstable();

    let mut decoy_slots = Vec::with_capacity(count);
    let mut carriers = Vec::with_capacity(total);
    let mut rest = payload.iter();
    let mut next_decoy = positions.iter().peekable();
    for position in 0..total {
        if next_decoy.peek() == Some(&&position) {
            next_decoy.next();
            let value = rng.random_range(0..pool.dim());
            let basis = if rng.random_bool(0.5) { BasisKind::Z } else { BasisKind::X };
            carriers.push(pool.prepare(value, basis)?);
            decoy_slots.push(DecoySlot { position, basis, value });
        } else {
            carriers.push(*rest.next().expect("payload length accounted for"));
        }
    }
    Ok(DecoratedSequence { carriers, decoy_slots, owner_claim: sender })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecoyObservation {
    pub position: usize,
    pub basis: BasisKind,
    pub prepared: usize,
    pub observed: usize,
}

impl DecoyObservation {
    pub fn mismatch(&self) -> bool {
        self.prepared != self.observed
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecoyCheck {
    pub observations: Vec<DecoyObservation>,
    pub error_rate: f64,
    pub pass: bool,
    /// Non-decoy carriers in their original order.
    pub stripped: Vec<Handle>,
}

impl DecoyCheck {
    pub fn mismatches(&self) -> usize {
        self.observations.iter().filter(|o| o.mismatch()).count()
    }
}

/// The receiver measures every announced decoy in its announced basis; the
/// sender compares against its prepared values.
pub fn run_decoy_check<T: Scalar, R: Rng + ?Sized>(
    seq: &DecoratedSequence,
    announcement: &[(usize, BasisKind)],
    pool: &mut QuditPool<T>,
    rng: &mut R,
    threshold: f64,
) -> Result<DecoyCheck, ProtocolError> {
    let len = seq.carriers.len();
    let mut observations = Vec::with_capacity(announcement.len());
    for &(position, basis) in announcement {
        let slot = seq
            .decoy_slots
            .iter()
            .find(|s| s.position == position && position < len)
            .ok_or(ProtocolError::BadAnnouncement { position, len })?;
        let observed = pool.measure(seq.carriers[position], basis, rng)?;
        observations.push(DecoyObservation { position, basis, prepared: slot.value, observed });
    }
    let mismatches = observations.iter().filter(|o| o.mismatch()).count();
    let error_rate = if observations.is_empty() { 0.0 } else { mismatches as f64 / observations.len() as f64 };
    Ok(DecoyCheck { observations, error_rate, pass: error_rate <= threshold, stripped: seq.payload() })
}
