use rand::Rng;

use super::sequence::{insert_decoys, DecoratedSequence};
use super::transcript::Party;
use super::types::{MeasurementRecord, RandomMask};
use super::{ProtocolConfig, ProtocolError};
use crate::qudit::{make_ghz_capped, shift_operator, BasisKind, Handle, QuditPool};
use crate::Scalar;

/// TP builds `m` GHZ states, splits them into `k` particle sequences (sequence
/// `i` holds particle `i` of every state, in order) and decorates each with
/// decoys.
pub fn tp_prepare<T: Scalar, R: Rng + ?Sized>(
    config: &ProtocolConfig,
    rng: &mut R,
) -> Result<(QuditPool<T>, Vec<DecoratedSequence>), ProtocolError> {
    let mut pool = QuditPool::new(config.d);
    let mut ghz = Vec::with_capacity(config.m);
    for _ in 0..config.m {
        ghz.push(pool.insert(make_ghz_capped(config.d, config.k, config.amplitude_cap)?)?);
    }
    let sequences = (0..config.k)
        .map(|i| {
            let payload: Vec<Handle> = ghz.iter().map(|state| state[i]).collect();
            insert_decoys(&mut pool, &payload, config.decoys_per_sequence, Party::Tp, rng)
        })
        .collect::<Result<_, _>>()?;
    Ok((pool, sequences))
}

/// Applies `U_{r_j}` to the `j`-th carrier.
pub fn participant_encode<T: Scalar>(
    pool: &mut QuditPool<T>,
    stripped: &[Handle],
    mask: &RandomMask,
) -> Result<Vec<Handle>, ProtocolError> {
    if stripped.len() != mask.values.len() {
        return Err(ProtocolError::LengthMismatch { what: "carriers", expected: mask.values.len(), actual: stripped.len() });
    }
    for (&h, &r) in stripped.iter().zip(&mask.values) {
        pool.apply(h, &shift_operator(pool.dim(), r)?)?;
    }
    Ok(stripped.to_vec())
}

/// Z-basis measurement of every returned carrier, participant by participant.
///
/// `forced_first` pins the outcomes of participant 0's carriers (simulator
/// hook for reproducing a known collapse); every other outcome is sampled.
pub fn tp_measure_all<T: Scalar, R: Rng + ?Sized>(
    pool: &mut QuditPool<T>,
    encoded: &[Vec<Handle>],
    forced_first: Option<&[usize]>,
    rng: &mut R,
) -> Result<Vec<MeasurementRecord>, ProtocolError> {
    let mut records = Vec::with_capacity(encoded.len());
    for (owner, carriers) in encoded.iter().enumerate() {
        let mut values = Vec::with_capacity(carriers.len());
        for (j, &h) in carriers.iter().enumerate() {
            let value = match forced_first.filter(|_| owner == 0) {
                Some(forced) => {
                    pool.measure_with_outcome(h, BasisKind::Z, forced[j])?;
                    forced[j]
                }
                None => pool.measure(h, BasisKind::Z, rng)?,
            };
            values.push(value);
        }
        records.push(MeasurementRecord { owner, values });
    }
    Ok(records)
}
