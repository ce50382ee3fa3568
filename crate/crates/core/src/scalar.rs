//! Floating point scalar abstraction for the qudit engine.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real scalar the engine is generic over: `f32` or `f64`.
///
/// `TOLERANCE` is the bound used for algebraic identities (unitarity, norm
/// preservation, phase equality). `PRUNE` is the modulus below which an
/// amplitude is treated as an exact zero and dropped from sparse storage.
pub trait Scalar:
    Float + FloatConst + NumAssign + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    const TOLERANCE: Self;
    const PRUNE: Self;

    fn from_f64_lossy(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 converts to every Scalar")
    }

    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize converts to every Scalar")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    const TOLERANCE: Self = 1e-10;
    const PRUNE: Self = 1e-13;
}

impl Scalar for f32 {
    const TOLERANCE: Self = 1e-4;
    const PRUNE: Self = 1e-6;
}
