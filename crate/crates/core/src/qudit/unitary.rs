use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::state::QuditState;
use super::{Complex, EngineError};
use crate::Scalar;

/// A `d × d` unitary acting on one qudit, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleQuditUnitary<T> {
    dim: usize,
    entries: Vec<Complex<T>>,
}

/// `exp(2πi · k / d)`, with `k` reduced mod `d` first so the angle stays small.
pub(crate) fn root_of_unity<T: Scalar>(k: usize, dim: usize) -> Complex<T> {
    let angle = T::TAU() * T::from_usize_lossy(k % dim) / T::from_usize_lossy(dim);
    Complex::from_polar(T::one(), angle)
}

impl<T: Scalar> SingleQuditUnitary<T> {
    /// Checked constructor: `entries` is row-major and `U·U†` must be the
    /// identity within `T::TOLERANCE`.
    pub fn new(dim: usize, entries: Vec<Complex<T>>) -> Result<Self, EngineError> {
        if dim < 2 {
            return Err(EngineError::DimensionTooSmall(dim));
        }
        if entries.len() != dim * dim {
            return Err(EngineError::BadMatrixSize { expected: dim * dim, actual: entries.len() });
        }
        let u = SingleQuditUnitary { dim, entries };
        let dev = u.unitarity_deviation();
        if dev.is_nan() || dev >= T::TOLERANCE {
            return Err(EngineError::NotUnitary(dev.to_f64_lossy()));
        }
        Ok(u)
    }

    pub fn identity(dim: usize) -> Result<Self, EngineError> {
        let mut entries = vec![Complex::zero(); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = Complex::one();
        }
        Self::new(dim, entries)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex<T> {
        self.entries[row * self.dim + col]
    }

    pub fn adjoint(&self) -> Self {
        let d = self.dim;
        let entries = (0..d * d).map(|i| self.entries[(i % d) * d + i / d].conj()).collect();
        SingleQuditUnitary { dim: d, entries }
    }

    /// Matrix product `self · rhs`.
    pub fn compose(&self, rhs: &Self) -> Result<Self, EngineError> {
        if self.dim != rhs.dim {
            return Err(EngineError::DimensionMismatch { expected: self.dim, actual: rhs.dim });
        }
        let d = self.dim;
        let mut entries = vec![Complex::zero(); d * d];
        for r in 0..d {
            for c in 0..d {
                entries[r * d + c] = (0..d).fold(Complex::zero(), |acc, k| acc + self.entry(r, k) * rhs.entry(k, c));
            }
        }
        Ok(SingleQuditUnitary { dim: d, entries })
    }

    /// Largest entry modulus of `U·U† − I`.
    pub fn unitarity_deviation(&self) -> T {
        let d = self.dim;
        let mut worst = T::zero();
        for r in 0..d {
            for c in 0..d {
                let mut acc = Complex::zero();
                for k in 0..d {
                    acc += self.entry(r, k) * self.entry(c, k).conj();
                }
                if r == c {
                    acc -= Complex::one();
                }
                worst = worst.max(acc.norm());
            }
        }
        worst
    }
}

/// Fourier matrix with entry `(z, x) = exp(2πi·x·z/d)/√d`.
pub fn qft_matrix<T: Scalar>(dim: usize) -> Result<SingleQuditUnitary<T>, EngineError> {
    if dim < 2 {
        return Err(EngineError::DimensionTooSmall(dim));
    }
    let scale = T::one() / T::from_usize_lossy(dim).sqrt();
    let entries = (0..dim * dim)
        .map(|i| root_of_unity::<T>((i / dim) * (i % dim), dim) * scale)
        .collect();
    SingleQuditUnitary::new(dim, entries)
}

/// `U_r = Σ_t exp(2πi·t·(t⊕r)/d) |t⊕r⟩⟨t|`.
pub fn shift_operator<T: Scalar>(dim: usize, r: usize) -> Result<SingleQuditUnitary<T>, EngineError> {
    if dim < 2 {
        return Err(EngineError::DimensionTooSmall(dim));
    }
    if r >= dim {
        return Err(EngineError::ValueOutOfRange { value: r, dim });
    }
    let mut entries = vec![Complex::zero(); dim * dim];
    for t in 0..dim {
        let target = (t + r) % dim;
        entries[target * dim + t] = root_of_unity(t * target, dim);
    }
    SingleQuditUnitary::new(dim, entries)
}

/// Applies `u` to subsystem `position`, leaving the others untouched.
pub fn apply_single<T: Scalar>(
    state: &QuditState<T>,
    position: usize,
    u: &SingleQuditUnitary<T>,
) -> Result<QuditState<T>, EngineError> {
    if u.dim() != state.dim() {
        return Err(EngineError::DimensionMismatch { expected: state.dim(), actual: u.dim() });
    }
    if position >= state.subsystems() {
        return Err(EngineError::PositionOutOfRange { position, subsystems: state.subsystems() });
    }
    let d = state.dim();
    let mut out: BTreeMap<Vec<usize>, Complex<T>> = BTreeMap::new();
    state.for_each_entry(|index, amp| {
        let col = index[position];
        for row in 0..d {
            let coeff = u.entry(row, col);
            if coeff.norm() <= T::PRUNE {
                continue;
            }
            let mut key = index.to_vec();
            key[position] = row;
            *out.entry(key).or_insert_with(Complex::zero) += coeff * amp;
        }
    });
    Ok(QuditState::from_map(d, state.subsystems(), out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qudit::{equal_up_to_global_phase, make_ghz};
    use std::f64::consts::PI;

    fn cis(turns: f64) -> Complex<f64> {
        Complex::new((2.0 * PI * turns).cos(), (2.0 * PI * turns).sin())
    }

    #[test]
    fn qft_d2_is_hadamard() {
        let h = qft_matrix::<f64>(2).unwrap();
        let s = 1.0 / 2f64.sqrt();
        let expected = [s, s, s, -s];
        for (i, e) in expected.iter().enumerate() {
            assert!((h.entry(i / 2, i % 2) - Complex::new(*e, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn qft_column_zero_is_uniform() {
        for d in 2..=13 {
            let q = qft_matrix::<f64>(d).unwrap();
            for z in 0..d {
                assert!((q.entry(z, 0) - Complex::new(1.0 / (d as f64).sqrt(), 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn qft_d3_unitary_by_direct_product() {
        // Independent oracle: build the matrix from ω directly and multiply.
        let w = cis(1.0 / 3.0);
        let s = 1.0 / 3f64.sqrt();
        let m: Vec<Vec<Complex<f64>>> =
            (0..3).map(|z| (0..3).map(|x| w.powu((x * z) as u32) * s).collect()).collect();
        let q = qft_matrix::<f64>(3).unwrap();
        for z in 0..3 {
            for x in 0..3 {
                assert!((q.entry(z, x) - m[z][x]).norm() < 1e-14);
            }
        }
        for r in 0..3 {
            for c in 0..3 {
                let dot: Complex<f64> = (0..3).map(|k| m[r][k] * m[c][k].conj()).sum();
                let want = if r == c { 1.0 } else { 0.0 };
                assert!((dot - Complex::new(want, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn shift_r0_is_diagonal_phase() {
        let u = shift_operator::<f64>(9, 0).unwrap();
        for t in 0..9 {
            assert!((u.entry(t, t) - cis((t * t) as f64 / 9.0)).norm() < 1e-12);
            for other in (0..9).filter(|&o| o != t) {
                assert_eq!(u.entry(other, t), Complex::zero());
            }
        }
    }

    #[test]
    fn shift_four_on_one_and_zero() {
        let u = shift_operator::<f64>(9, 4).unwrap();
        let one = QuditState::<f64>::basis_ket(9, &[1]).unwrap();
        let out = apply_single(&one, 0, &u).unwrap();
        assert_eq!(out.nonzero_count(), 1);
        assert!((out.amplitude(&[5]).unwrap() - cis(5.0 / 9.0)).norm() < 1e-12);

        let zero = QuditState::<f64>::basis_ket(9, &[0]).unwrap();
        let out = apply_single(&zero, 0, &u).unwrap();
        assert!((out.amplitude(&[4]).unwrap() - Complex::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn shift_rejects_out_of_range() {
        assert!(matches!(shift_operator::<f64>(9, 9), Err(EngineError::ValueOutOfRange { .. })));
    }

    #[test]
    fn non_unitary_rejected() {
        let m = vec![Complex::new(1.0, 0.0), Complex::new(1.0, 0.0), Complex::zero(), Complex::new(1.0, 0.0)];
        assert!(matches!(SingleQuditUnitary::<f64>::new(2, m), Err(EngineError::NotUnitary(_))));
    }

    #[test]
    fn identity_leaves_state_unchanged() {
        let g = make_ghz::<f64>(5, 3).unwrap();
        let id = SingleQuditUnitary::<f64>::identity(5).unwrap();
        for p in 0..3 {
            assert_eq!(apply_single(&g, p, &id).unwrap().entries(), g.entries());
        }
    }

    #[test]
    fn shift_on_ghz_first_particle() {
        let g = make_ghz::<f64>(9, 3).unwrap();
        let out = apply_single(&g, 0, &shift_operator(9, 4).unwrap()).unwrap();
        assert_eq!(out.nonzero_count(), 9);
        for c in 0..9 {
            let a = out.amplitude(&[(c + 4) % 9, c, c]).unwrap();
            assert!((a.norm() - 1.0 / 3.0).abs() < 1e-12);
        }
        assert!((out.norm_sqr() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn shift_then_inverse_shift_restores_ket() {
        for d in 2..=9 {
            for r in 0..d {
                let back = (d - r) % d;
                for s in 0..d {
                    let ket = QuditState::<f64>::basis_ket(d, &[s]).unwrap();
                    let once = apply_single(&ket, 0, &shift_operator(d, r).unwrap()).unwrap();
                    let twice = apply_single(&once, 0, &shift_operator(d, back).unwrap()).unwrap();
                    assert!(equal_up_to_global_phase(&twice, &ket, 1e-10).unwrap());
                }
            }
        }
    }

    #[test]
    fn apply_rejects_mismatches() {
        let g = make_ghz::<f64>(3, 2).unwrap();
        let u5 = qft_matrix::<f64>(5).unwrap();
        assert!(matches!(apply_single(&g, 0, &u5), Err(EngineError::DimensionMismatch { .. })));
        let u3 = qft_matrix::<f64>(3).unwrap();
        assert!(matches!(apply_single(&g, 2, &u3), Err(EngineError::PositionOutOfRange { .. })));
    }

    #[test]
    fn f32_engine_agrees_with_f64() {
        let u32_ = qft_matrix::<f32>(7).unwrap();
        let u64_ = qft_matrix::<f64>(7).unwrap();
        for r in 0..7 {
            for c in 0..7 {
                let a = u32_.entry(r, c);
                let b = u64_.entry(r, c);
                assert!((a.re as f64 - b.re).abs() < 1e-6 && (a.im as f64 - b.im).abs() < 1e-6);
            }
        }
    }
}
