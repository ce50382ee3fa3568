use std::fmt;

use super::state::QuditState;
use super::unitary::qft_matrix;
use super::{Complex, EngineError};
use crate::Scalar;

/// The two measurement bases: computational (`Z`) and its Fourier image (`X`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisKind {
    Z,
    X,
}

impl BasisKind {
    pub const ALL: [BasisKind; 2] = [BasisKind::Z, BasisKind::X];

    pub fn other(self) -> Self {
        match self {
            BasisKind::Z => BasisKind::X,
            BasisKind::X => BasisKind::Z,
        }
    }
}

impl fmt::Display for BasisKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BasisKind::Z => "Z",
            BasisKind::X => "X",
        })
    }
}

/// Single-qudit state `|value⟩` (Z) or `QFT|value⟩` (X).
pub fn prepare_basis_state<T: Scalar>(
    dim: usize,
    value: usize,
    basis: BasisKind,
) -> Result<QuditState<T>, EngineError> {
    if dim < 2 {
        return Err(EngineError::DimensionTooSmall(dim));
    }
    if value >= dim {
        return Err(EngineError::ValueOutOfRange { value, dim });
    }
    match basis {
        BasisKind::Z => QuditState::basis_ket(dim, &[value]),
        BasisKind::X => {
            let qft = qft_matrix::<T>(dim)?;
            let column: Vec<Complex<T>> = (0..dim).map(|z| qft.entry(z, value)).collect();
            QuditState::from_dense(dim, 1, column)
        }
    }
}
