use rand::Rng;

use super::basis::{prepare_basis_state, BasisKind};
use super::measure::{measure, measure_with_outcome};
use super::state::QuditState;
use super::unitary::{apply_single, SingleQuditUnitary};
use super::EngineError;
use crate::Scalar;

/// Reference to one qudit: subsystem `slot` of register `register`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Handle {
    pub register: usize,
    pub slot: usize,
}

/// Owns every register (GHZ states, decoys, resent states) of one run.
///
/// Sequences in flight hold `Handle`s into the pool; operating on a handle
/// replaces the owning register with its updated state.
#[derive(Debug, Clone)]
pub struct QuditPool<T> {
    dim: usize,
    registers: Vec<QuditState<T>>,
}

impl<T: Scalar> QuditPool<T> {
    pub fn new(dim: usize) -> Self {
        QuditPool { dim, registers: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.registers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.registers.is_empty()
    }

    /// Adds a register and returns a handle for each of its subsystems.
    pub fn insert(&mut self, state: QuditState<T>) -> Result<Vec<Handle>, EngineError> {
        if state.dim() != self.dim {
            return Err(EngineError::DimensionMismatch { expected: self.dim, actual: state.dim() });
        }
        let register = self.registers.len();
        let handles = (0..state.subsystems()).map(|slot| Handle { register, slot }).collect();
        self.registers.push(state);
        Ok(handles)
    }

    /// Fresh single-qudit register in `|value⟩` or `QFT|value⟩`.
    pub fn prepare(&mut self, value: usize, basis: BasisKind) -> Result<Handle, EngineError> {
        let state = prepare_basis_state(self.dim, value, basis)?;
        Ok(self.insert(state)?[0])
    }

    pub fn register(&self, register: usize) -> Result<&QuditState<T>, EngineError> {
        self.registers.get(register).ok_or(EngineError::UnknownRegister(register))
    }

    fn register_mut(&mut self, register: usize) -> Result<&mut QuditState<T>, EngineError> {
        self.registers.get_mut(register).ok_or(EngineError::UnknownRegister(register))
    }

    pub fn apply(&mut self, handle: Handle, u: &SingleQuditUnitary<T>) -> Result<(), EngineError> {
        let reg = self.register_mut(handle.register)?;
        *reg = apply_single(reg, handle.slot, u)?;
        Ok(())
    }

    pub fn measure<R: Rng + ?Sized>(&mut self, handle: Handle, basis: BasisKind, rng: &mut R) -> Result<usize, EngineError> {
        let reg = self.register_mut(handle.register)?;
        let (outcome, post) = measure(reg, handle.slot, basis, rng)?;
        *reg = post;
        Ok(outcome)
    }

    pub fn measure_with_outcome(&mut self, handle: Handle, basis: BasisKind, outcome: usize) -> Result<(), EngineError> {
        let reg = self.register_mut(handle.register)?;
        *reg = measure_with_outcome(reg, handle.slot, basis, outcome)?;
        Ok(())
    }

    /// Simulator-side inspection: the Z label of `handle` if it is definite.
    pub fn definite_value(&self, handle: Handle) -> Option<usize> {
        self.registers.get(handle.register)?.definite_value(handle.slot)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qudit::{make_ghz, shift_operator};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn operations_through_handles() {
        let mut pool = QuditPool::<f64>::new(5);
        let hs = pool.insert(make_ghz(5, 3).unwrap()).unwrap();
        assert_eq!(hs.len(), 3);
        pool.apply(hs[1], &shift_operator(5, 2).unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let c = pool.measure(hs[0], BasisKind::Z, &mut rng).unwrap();
        assert_eq!(pool.definite_value(hs[1]), Some((c + 2) % 5));
        assert_eq!(pool.definite_value(hs[2]), Some(c));
    }

    #[test]
    fn dimension_checked_on_insert() {
        let mut pool = QuditPool::<f64>::new(5);
        assert!(pool.insert(make_ghz(3, 2).unwrap()).is_err());
        assert!(pool.apply(Handle { register: 4, slot: 0 }, &shift_operator(5, 1).unwrap()).is_err());
    }
}
