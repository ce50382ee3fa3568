//! Exhaustive checks of how the shift operator acts on the two bases.

use super::basis::{prepare_basis_state, BasisKind};
use super::state::{equal_up_to_global_phase, QuditState};
use super::unitary::{apply_single, root_of_unity, shift_operator};
use super::EngineError;
use crate::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CovarianceVerdict {
    pub dim: usize,
    pub shift: usize,
    pub value: usize,
    pub holds: bool,
}

/// Per-`(d, r, s)` verdicts for one basis law.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CovarianceAudit {
    pub basis: BasisKind,
    pub verdicts: Vec<CovarianceVerdict>,
}

impl CovarianceAudit {
    pub fn holding(&self) -> usize {
        self.verdicts.iter().filter(|v| v.holds).count()
    }

    pub fn all_hold(&self) -> bool {
        self.verdicts.iter().all(|v| v.holds)
    }

    /// `(d, holding, checked)` per dimension, ascending.
    pub fn by_dimension(&self) -> Vec<(usize, usize, usize)> {
        let mut rows: Vec<(usize, usize, usize)> = Vec::new();
        for v in &self.verdicts {
            match rows.last_mut() {
                Some(row) if row.0 == v.dim => {
                    row.1 += v.holds as usize;
                    row.2 += 1;
                }
                _ => rows.push((v.dim, v.holds as usize, 1)),
            }
        }
        rows
    }
}

/// Checks `U_r|s⟩ = exp(2πi·s(s⊕r)/d)|s⊕r⟩` exactly, for `2 ≤ d ≤ max_dim`.
pub fn audit_z_shift<T: Scalar>(max_dim: usize) -> Result<CovarianceAudit, EngineError> {
    let mut verdicts = Vec::new();
    for d in 2..=max_dim {
        for r in 0..d {
            let u = shift_operator::<T>(d, r)?;
            for s in 0..d {
                let image = apply_single(&QuditState::basis_ket(d, &[s])?, 0, &u)?;
                let target = (s + r) % d;
                let expected = root_of_unity::<T>(s * target, d);
                let holds = image.nonzero_count() == 1
                    && (image.amplitude(&[target])? - expected).norm() < T::TOLERANCE;
                verdicts.push(CovarianceVerdict { dim: d, shift: r, value: s, holds });
            }
        }
    }
    Ok(CovarianceAudit { basis: BasisKind::Z, verdicts })
}

/// Tests whether `U_r·QFT|s⟩` equals `QFT|s⊕r⟩` up to a global phase.
pub fn audit_x_covariance<T: Scalar>(max_dim: usize) -> Result<CovarianceAudit, EngineError> {
    let mut verdicts = Vec::new();
    for d in 2..=max_dim {
        for r in 0..d {
            let u = shift_operator::<T>(d, r)?;
            for s in 0..d {
                let image = apply_single(&prepare_basis_state(d, s, BasisKind::X)?, 0, &u)?;
                let expected = prepare_basis_state(d, (s + r) % d, BasisKind::X)?;
                let holds = equal_up_to_global_phase(&image, &expected, T::TOLERANCE)?;
                verdicts.push(CovarianceVerdict { dim: d, shift: r, value: s, holds });
            }
        }
    }
    Ok(CovarianceAudit { basis: BasisKind::X, verdicts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn z_law_holds_everywhere() {
        let audit = audit_z_shift::<f64>(13).unwrap();
        assert_eq!(audit.verdicts.len(), (2..=13).map(|d| d * d).sum::<usize>());
        assert!(audit.all_hold());
    }

    /// Closed form of the X-line residual: `U_r QFT|s⟩` and `QFT|s⊕r⟩`
    /// differ on ket `|z⟩` by the phase `exp(2πi(z² − 2rz − sr)/d)`, which is
    /// global only when `z² − 2rz` is constant mod `d` over all `z`.
    fn x_law_by_formula(d: usize, r: usize) -> bool {
        let residual = |z: usize| ((z * z + 2 * d * d - 2 * r * z) % d) as f64;
        let r0 = residual(0);
        (0..d).all(|z| {
            let diff = 2.0 * PI * (residual(z) - r0) / d as f64;
            (diff.cos() - 1.0).abs() < 1e-12
        })
    }

    #[test]
    fn x_audit_matches_closed_form() {
        let audit = audit_x_covariance::<f64>(13).unwrap();
        for v in &audit.verdicts {
            assert_eq!(v.holds, x_law_by_formula(v.dim, v.shift), "{v:?}");
        }
        // The law fails for every (d, r, s) with d ≥ 2.
        assert_eq!(audit.holding(), 0);
        let rows = audit.by_dimension();
        assert_eq!(rows.first(), Some(&(2, 0, 4)));
        assert_eq!(rows.last(), Some(&(13, 0, 169)));
    }
}
