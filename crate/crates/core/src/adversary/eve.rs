use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::protocol::{Hop, Interposer, Link};
use crate::qudit::{BasisKind, EngineError, Handle, QuditPool};
use crate::Scalar;

/// One carrier Eve measured and replaced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Interception {
    pub participant: usize,
    pub link: Link,
    pub position: usize,
    pub basis: BasisKind,
    pub outcome: usize,
}

/// Measures every carrier in a guessed basis (Z with probability
/// `z_probability`) and forwards a fresh state of the outcome in that basis.
/// Returns `(position, basis, outcome)` per carrier.
pub fn eve_intercept_resend<T: Scalar, R: Rng + ?Sized>(
    pool: &mut QuditPool<T>,
    carriers: &mut [Handle],
    z_probability: f64,
    rng: &mut R,
) -> Result<Vec<(usize, BasisKind, usize)>, EngineError> {
    let mut seen = Vec::with_capacity(carriers.len());
    for (position, carrier) in carriers.iter_mut().enumerate() {
        let basis = if rng.random_bool(z_probability) { BasisKind::Z } else { BasisKind::X };
        let outcome = pool.measure(*carrier, basis, rng)?;
        *carrier = pool.prepare(outcome, basis)?;
        seen.push((position, basis, outcome));
    }
    Ok(seen)
}

/// External intercept-resend eavesdropper on one leg of one participant
/// (or of every participant when `target` is `None`).
#[derive(Debug, Clone)]
pub struct InterceptResend {
    pub target: Option<usize>,
    pub link: Link,
    pub z_probability: f64,
    pub log: Vec<Interception>,
    pub(crate) rng: ChaCha8Rng,
}

impl InterceptResend {
    pub fn new(target: Option<usize>, link: Link, seed: u64) -> Self {
        InterceptResend { target, link, z_probability: 0.5, log: Vec::new(), rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn with_z_probability(mut self, p: f64) -> Self {
        self.z_probability = p;
        self
    }

    fn targets(&self, hop: &Hop) -> bool {
        hop.link == self.link && self.target.is_none_or(|t| t == hop.participant)
    }
}

impl<T: Scalar> Interposer<T> for InterceptResend {
    fn on_quantum_send(&mut self, hop: Hop, carriers: &mut [Handle], pool: &mut QuditPool<T>) -> Result<(), EngineError> {
        if !self.targets(&hop) {
            return Ok(());
        }
        for (position, basis, outcome) in eve_intercept_resend(pool, carriers, self.z_probability, &mut self.rng)? {
            self.log.push(Interception { participant: hop.participant, link: hop.link, position, basis, outcome });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qudit::prepare_basis_state;

    #[test]
    fn right_basis_is_transparent() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut pool = QuditPool::<f64>::new(9);
        for basis in BasisKind::ALL {
            for v in 0..9 {
                let mut carriers = [pool.insert(prepare_basis_state(9, v, basis).unwrap()).unwrap()[0]];
                let p = if basis == BasisKind::Z { 1.0 } else { 0.0 };
                let seen = eve_intercept_resend(&mut pool, &mut carriers, p, &mut rng).unwrap();
                assert_eq!(seen, vec![(0, basis, v)]);
                assert_eq!(pool.measure(carriers[0], basis, &mut rng).unwrap(), v);
            }
        }
    }

    #[test]
    fn wrong_basis_disturbs_at_rate_d_minus_1_over_d() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut pool = QuditPool::<f64>::new(9);
        let trials = 4000;
        let mut errors = 0;
        for t in 0..trials {
            let v = t % 9;
            let mut carriers = [pool.prepare(v, BasisKind::Z).unwrap()];
            eve_intercept_resend(&mut pool, &mut carriers, 0.0, &mut rng).unwrap();
            errors += (pool.measure(carriers[0], BasisKind::Z, &mut rng).unwrap() != v) as usize;
        }
        let rate = errors as f64 / trials as f64;
        // 8/9 ± 4σ (σ ≈ 0.005).
        assert!((rate - 8.0 / 9.0).abs() < 0.02, "rate {rate}");
    }
}
