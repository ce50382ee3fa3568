use rand::Rng;

use super::arith::{mod_add, mod_sub};
use super::ProtocolError;

fn check_values(what: &'static str, values: &[usize], max: usize) -> Result<(), ProtocolError> {
    match values.iter().find(|&&v| v > max) {
        Some(&value) => Err(ProtocolError::ValueOutOfRange { what, value, max }),
        None => Ok(()),
    }
}

/// Participant `owner`'s secret `p_i`, entries in `0..=l`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrivacyVector {
    pub owner: usize,
    pub values: Vec<usize>,
}

impl PrivacyVector {
    pub fn new(owner: usize, values: Vec<usize>, l: usize) -> Result<Self, ProtocolError> {
        check_values("privacy", &values, l)?;
        Ok(PrivacyVector { owner, values })
    }

    pub fn random<R: Rng + ?Sized>(owner: usize, m: usize, l: usize, rng: &mut R) -> Self {
        PrivacyVector { owner, values: (0..m).map(|_| rng.random_range(0..=l)).collect() }
    }
}

/// The shift amounts `r_i` a participant encodes with, entries in `0..d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomMask {
    pub owner: usize,
    pub values: Vec<usize>,
}

impl RandomMask {
    pub fn new(owner: usize, values: Vec<usize>, d: usize) -> Result<Self, ProtocolError> {
        check_values("mask", &values, d - 1)?;
        Ok(RandomMask { owner, values })
    }

    pub fn random<R: Rng + ?Sized>(owner: usize, m: usize, d: usize, rng: &mut R) -> Self {
        RandomMask { owner, values: (0..m).map(|_| rng.random_range(0..d)).collect() }
    }
}

/// TP's Z-basis outcomes `w_i` on participant `owner`'s returned carriers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasurementRecord {
    pub owner: usize,
    pub values: Vec<usize>,
}

/// `p̄_i = p_i ⊖ r_i`, the only privacy-dependent data TP receives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncryptedPrivacy {
    pub owner: usize,
    pub values: Vec<usize>,
}

pub fn participant_encrypt(p: &PrivacyVector, mask: &RandomMask, d: usize) -> Result<EncryptedPrivacy, ProtocolError> {
    if p.owner != mask.owner {
        return Err(ProtocolError::OwnerMismatch { expected: p.owner, actual: mask.owner });
    }
    if p.values.len() != mask.values.len() {
        return Err(ProtocolError::LengthMismatch { what: "mask", expected: p.values.len(), actual: mask.values.len() });
    }
    let values = p
        .values
        .iter()
        .zip(&mask.values)
        .map(|(&pv, &rv)| mod_sub(pv, rv, d))
        .collect::<Result<_, _>>()?;
    Ok(EncryptedPrivacy { owner: p.owner, values })
}

/// Inverse of [`participant_encrypt`], used by analysis code that knows the mask.
pub fn decrypt(e: &EncryptedPrivacy, mask: &RandomMask, d: usize) -> Result<Vec<usize>, ProtocolError> {
    e.values.iter().zip(&mask.values).map(|(&ev, &rv)| mod_add(ev, rv, d)).collect()
}
