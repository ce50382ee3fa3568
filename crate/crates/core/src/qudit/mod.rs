//! Exact linear algebra for d-level systems.
//!
//! States are stored sparsely (protocol states never hold more than a few
//! `d` nonzero amplitudes) with a dense fallback for generic states. Every
//! operation is a pure function of its inputs plus an explicitly threaded
//! random source.

mod audit;
mod basis;
mod error;
mod measure;
mod pool;
mod state;
mod unitary;

pub use audit::{audit_x_covariance, audit_z_shift, CovarianceAudit, CovarianceVerdict};
pub use basis::{prepare_basis_state, BasisKind};
pub use error::EngineError;
pub use measure::{born_probabilities, measure, measure_with_outcome};
pub use pool::{Handle, QuditPool};
pub use state::{equal_up_to_global_phase, make_ghz, make_ghz_capped, QuditState, DEFAULT_AMPLITUDE_CAP};
pub use unitary::{apply_single, qft_matrix, shift_operator, SingleQuditUnitary};

pub type Complex<T> = num_complex::Complex<T>;
