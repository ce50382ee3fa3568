//! Simulator for multi-party private comparison of bounded integers using
//! d-level GHZ states and a semi-honest third party (TP).
//!
//! * [`qudit`]: sparse state vectors, Fourier and shift unitaries, seeded
//!   projective measurement.
//! * [`protocol`]: the six-step session between TP and `k` participants,
//!   including decoy-based eavesdropping checks.
//! * [`adversary`]: intercept-resend, dishonest-participant and semi-honest TP
//!   scenarios with Monte Carlo detection estimates.
//! * [`analysis`]: efficiency accounting, statistics and report emission.
//!
//! The engine is generic over [`Scalar`] (`f32` or `f64`); the aliases below
//! fix it to `f64`, which is what the protocol tolerances are stated for.

pub mod adversary;
pub mod analysis;
pub mod protocol;
pub mod qudit;
mod scalar;

pub use scalar::Scalar;

pub type QuditState = qudit::QuditState<f64>;
pub type QuditState32 = qudit::QuditState<f32>;
pub type SingleQuditUnitary = qudit::SingleQuditUnitary<f64>;
pub type SingleQuditUnitary32 = qudit::SingleQuditUnitary<f32>;
pub type QuditPool = qudit::QuditPool<f64>;
pub type Complex = num_complex::Complex<f64>;
