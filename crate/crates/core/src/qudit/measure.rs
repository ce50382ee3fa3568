use std::collections::BTreeMap;

use rand::Rng;

use super::basis::BasisKind;
use super::state::QuditState;
use super::unitary::{apply_single, qft_matrix};
use super::{Complex, EngineError};
use crate::Scalar;

/// Expresses the subsystem in the requested basis so that a Z projection
/// there is the requested measurement.
fn rotate_in<T: Scalar>(state: &QuditState<T>, position: usize, basis: BasisKind) -> Result<QuditState<T>, EngineError> {
    if position >= state.subsystems() {
        return Err(EngineError::PositionOutOfRange { position, subsystems: state.subsystems() });
    }
    match basis {
        BasisKind::Z => Ok(state.clone()),
        BasisKind::X => apply_single(state, position, &qft_matrix(state.dim())?.adjoint()),
    }
}

fn rotate_out<T: Scalar>(state: QuditState<T>, position: usize, basis: BasisKind) -> Result<QuditState<T>, EngineError> {
    match basis {
        BasisKind::Z => Ok(state),
        BasisKind::X => apply_single(&state, position, &qft_matrix(state.dim())?),
    }
}

fn z_probabilities<T: Scalar>(state: &QuditState<T>, position: usize) -> Vec<f64> {
    let mut probs = vec![0.0; state.dim()];
    state.for_each_entry(|index, amp| probs[index[position]] += amp.norm_sqr().to_f64_lossy());
    probs
}

fn project<T: Scalar>(state: &QuditState<T>, position: usize, outcome: usize) -> Result<QuditState<T>, EngineError> {
    let mut kept: BTreeMap<Vec<usize>, Complex<T>> = BTreeMap::new();
    let mut weight = T::zero();
    state.for_each_entry(|index, amp| {
        if index[position] == outcome {
            weight += amp.norm_sqr();
            kept.insert(index.to_vec(), amp);
        }
    });
    if weight.is_nan() || weight <= T::zero() {
        return Err(EngineError::DegeneratePostState);
    }
    let scale = T::one() / weight.sqrt();
    kept.values_mut().for_each(|a| *a *= scale);
    Ok(QuditState::from_map(state.dim(), state.subsystems(), kept))
}

/// Born probabilities of each outcome `0..d` for measuring `position` in `basis`.
pub fn born_probabilities<T: Scalar>(state: &QuditState<T>, position: usize, basis: BasisKind) -> Result<Vec<f64>, EngineError> {
    Ok(z_probabilities(&rotate_in(state, position, basis)?, position))
}

/// Projective measurement of one subsystem.
///
/// The post-state is expressed in the original frame: after an X measurement
/// the measured qudit is left in `QFT|outcome⟩`.
pub fn measure<T: Scalar, R: Rng + ?Sized>(
    state: &QuditState<T>,
    position: usize,
    basis: BasisKind,
    rng: &mut R,
) -> Result<(usize, QuditState<T>), EngineError> {
    let rotated = rotate_in(state, position, basis)?;
    let probs = z_probabilities(&rotated, position);
    let draw: f64 = rng.random::<f64>() * probs.iter().sum::<f64>();
    let mut acc = 0.0;
    let mut outcome = None;
    for (value, p) in probs.iter().enumerate() {
        if *p <= 0.0 {
            continue;
        }
        acc += p;
        outcome = Some(value);
        if draw < acc {
            break;
        }
    }
    let outcome = outcome.ok_or(EngineError::DegeneratePostState)?;
    let post = rotate_out(project(&rotated, position, outcome)?, position, basis)?;
    Ok((outcome, post))
}

/// Projects onto a chosen outcome; fails if that outcome has (numerically)
/// zero probability.
pub fn measure_with_outcome<T: Scalar>(
    state: &QuditState<T>,
    position: usize,
    basis: BasisKind,
    outcome: usize,
) -> Result<QuditState<T>, EngineError> {
    if outcome >= state.dim() {
        return Err(EngineError::ValueOutOfRange { value: outcome, dim: state.dim() });
    }
    let rotated = rotate_in(state, position, basis)?;
    if z_probabilities(&rotated, position)[outcome] < T::TOLERANCE.to_f64_lossy() {
        return Err(EngineError::ImpossibleOutcome(outcome));
    }
    rotate_out(project(&rotated, position, outcome)?, position, basis)
}
