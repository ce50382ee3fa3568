use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::{Complex, EngineError};
use crate::Scalar;

/// Largest dense size `d^n` a state may have unless a different cap is passed.
pub const DEFAULT_AMPLITUDE_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
enum Storage<T> {
    /// Nonzero amplitudes keyed by index tuple, subsystem 0 first.
    Sparse(BTreeMap<Vec<usize>, Complex<T>>),
    /// Mixed-radix dense vector, subsystem 0 most significant.
    Dense(Vec<Complex<T>>),
}

/// Normalized pure state of `subsystems` qudits of dimension `dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuditState<T> {
    dim: usize,
    subsystems: usize,
    storage: Storage<T>,
}

fn dense_size(dim: usize, subsystems: usize) -> Option<u64> {
    (dim as u64).checked_pow(u32::try_from(subsystems).ok()?)
}

fn check_shape(dim: usize, subsystems: usize, cap: u64) -> Result<u64, EngineError> {
    if dim < 2 {
        return Err(EngineError::DimensionTooSmall(dim));
    }
    if subsystems == 0 {
        return Err(EngineError::NoSubsystems);
    }
    match dense_size(dim, subsystems) {
        Some(total) if total <= cap => Ok(total),
        _ => Err(EngineError::CapExceeded { dim, subsystems, cap }),
    }
}

impl<T: Scalar> QuditState<T> {
    /// Build a state from (index tuple, amplitude) pairs. Repeated tuples are
    /// summed; the result must be normalized.
    pub fn from_entries<I>(dim: usize, subsystems: usize, entries: I, cap: u64) -> Result<Self, EngineError>
    where
        I: IntoIterator<Item = (Vec<usize>, Complex<T>)>,
    {
        check_shape(dim, subsystems, cap)?;
        let mut map: BTreeMap<Vec<usize>, Complex<T>> = BTreeMap::new();
        for (index, amp) in entries {
            if index.len() != subsystems || index.iter().any(|&v| v >= dim) {
                return Err(EngineError::BadIndex(index));
            }
            *map.entry(index).or_insert_with(Complex::zero) += amp;
        }
        let state = Self::from_map(dim, subsystems, map);
        state.check_normalized()?;
        Ok(state)
    }

    /// Build a state from its full dense amplitude vector.
    pub fn from_dense(dim: usize, subsystems: usize, amplitudes: Vec<Complex<T>>) -> Result<Self, EngineError> {
        let total = check_shape(dim, subsystems, DEFAULT_AMPLITUDE_CAP)?;
        if amplitudes.len() as u64 != total {
            return Err(EngineError::BadMatrixSize { expected: total as usize, actual: amplitudes.len() });
        }
        let state = QuditState { dim, subsystems, storage: Storage::Dense(amplitudes) };
        state.check_normalized()?;
        Ok(state)
    }

    /// Product ket `|v_0⟩|v_1⟩…`.
    pub fn basis_ket(dim: usize, values: &[usize]) -> Result<Self, EngineError> {
        Self::from_entries(dim, values.len(), [(values.to_vec(), Complex::one())], DEFAULT_AMPLITUDE_CAP)
    }

    /// Picks sparse or dense storage; callers guarantee the shape is valid.
    pub(crate) fn from_map(dim: usize, subsystems: usize, mut map: BTreeMap<Vec<usize>, Complex<T>>) -> Self {
        map.retain(|_, a| a.norm() > T::PRUNE);
        let total = dense_size(dim, subsystems).unwrap_or(u64::MAX);
        let storage = if (map.len() as u64) * 2 > total {
            let mut dense = vec![Complex::zero(); total as usize];
            for (index, amp) in map {
                dense[flat_index(dim, &index)] = amp;
            }
            Storage::Dense(dense)
        } else {
            Storage::Sparse(map)
        };
        QuditState { dim, subsystems, storage }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn subsystems(&self) -> usize {
        self.subsystems
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.storage, Storage::Dense(_))
    }

    pub fn nonzero_count(&self) -> usize {
        match &self.storage {
            Storage::Sparse(map) => map.len(),
            Storage::Dense(v) => v.iter().filter(|a| a.norm() > T::PRUNE).count(),
        }
    }

    pub fn amplitude(&self, index: &[usize]) -> Result<Complex<T>, EngineError> {
        if index.len() != self.subsystems || index.iter().any(|&v| v >= self.dim) {
            return Err(EngineError::BadIndex(index.to_vec()));
        }
        Ok(match &self.storage {
            Storage::Sparse(map) => map.get(index).copied().unwrap_or_else(Complex::zero),
            Storage::Dense(v) => v[flat_index(self.dim, index)],
        })
    }

    /// Visits every nonzero amplitude in lexicographic index order.
    pub fn for_each_entry(&self, mut f: impl FnMut(&[usize], Complex<T>)) {
        match &self.storage {
            Storage::Sparse(map) => map.iter().for_each(|(k, a)| f(k, *a)),
            Storage::Dense(v) => {
                let mut index = vec![0; self.subsystems];
                for amp in v {
                    if amp.norm() > T::PRUNE {
                        f(&index, *amp);
                    }
                    increment(&mut index, self.dim);
                }
            }
        }
    }

    pub fn entries(&self) -> Vec<(Vec<usize>, Complex<T>)> {
        let mut out = Vec::with_capacity(self.nonzero_count());
        self.for_each_entry(|k, a| out.push((k.to_vec(), a)));
        out
    }

    pub fn norm_sqr(&self) -> T {
        let mut total = T::zero();
        self.for_each_entry(|_, a| total += a.norm_sqr());
        total
    }

    /// If every branch agrees on the value of `position`, return it.
    pub fn definite_value(&self, position: usize) -> Option<usize> {
        let mut seen: Option<usize> = None;
        let mut consistent = true;
        self.for_each_entry(|k, _| match seen {
            None => seen = Some(k[position]),
            Some(v) if v != k[position] => consistent = false,
            _ => {}
        });
        seen.filter(|_| consistent)
    }

    fn check_normalized(&self) -> Result<(), EngineError> {
        let n = self.norm_sqr();
        if (n - T::one()).abs() > T::TOLERANCE {
            return Err(EngineError::NotNormalized(n.to_f64_lossy()));
        }
        Ok(())
    }
}

fn flat_index(dim: usize, index: &[usize]) -> usize {
    index.iter().fold(0, |acc, &v| acc * dim + v)
}

fn increment(index: &mut [usize], dim: usize) {
    for slot in index.iter_mut().rev() {
        *slot += 1;
        if *slot < dim {
            return;
        }
        *slot = 0;
    }
}

/// `(|0…0⟩ + |1…1⟩ + … + |d−1…d−1⟩)/√d` under the default amplitude cap.
pub fn make_ghz<T: Scalar>(dim: usize, parties: usize) -> Result<QuditState<T>, EngineError> {
    make_ghz_capped(dim, parties, DEFAULT_AMPLITUDE_CAP)
}

pub fn make_ghz_capped<T: Scalar>(dim: usize, parties: usize, cap: u64) -> Result<QuditState<T>, EngineError> {
    let amp = Complex::new(T::one() / T::from_usize_lossy(dim).sqrt(), T::zero());
    QuditState::from_entries(dim, parties, (0..dim).map(|c| (vec![c; parties], amp)), cap)
}

/// True iff `a = e^{iθ} b` for some real θ, entrywise within `tol`.
pub fn equal_up_to_global_phase<T: Scalar>(a: &QuditState<T>, b: &QuditState<T>, tol: T) -> Result<bool, EngineError> {
    if a.dim != b.dim || a.subsystems != b.subsystems {
        return Err(EngineError::ShapeMismatch(a.dim, a.subsystems, b.dim, b.subsystems));
    }
    let mut union: BTreeMap<Vec<usize>, (Complex<T>, Complex<T>)> = BTreeMap::new();
    a.for_each_entry(|k, x| union.entry(k.to_vec()).or_insert((Complex::zero(), Complex::zero())).0 = x);
    b.for_each_entry(|k, y| union.entry(k.to_vec()).or_insert((Complex::zero(), Complex::zero())).1 = y);

    // Anchor the phase on b's largest amplitude.
    let Some((x0, y0)) = union.values().copied().max_by(|p, q| {
        p.1.norm_sqr().partial_cmp(&q.1.norm_sqr()).unwrap_or(std::cmp::Ordering::Equal)
    }) else {
        return Ok(true);
    };
    if y0.norm() <= tol || x0.norm() <= tol {
        return Ok(false);
    }
    let ratio = x0 / y0;
    let phase = ratio / ratio.norm();
    Ok(union.values().all(|(x, y)| (x - phase * y).norm() <= tol))
}
