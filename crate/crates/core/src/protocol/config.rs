use super::ProtocolError;
use crate::qudit::DEFAULT_AMPLITUDE_CAP;

/// Parameters of one comparison session.
///
/// Privacy values live in `0..=l` and all arithmetic is modulo `d = 2l + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolConfig {
    pub d: usize,
    pub k: usize,
    pub m: usize,
    pub l: usize,
    /// Decoys inserted into every quantum sequence, in both directions.
    /// Zero disables eavesdropping checks.
    pub decoys_per_sequence: usize,
    /// Largest decoy error rate a check tolerates; 0 aborts on any mismatch.
    pub detection_threshold: f64,
    pub seed: u64,
    pub amplitude_cap: u64,
}

impl ProtocolConfig {
    /// Config for privacies in `0..=l`, `k` participants and length `m`.
    pub fn new(l: usize, k: usize, m: usize) -> Result<Self, ProtocolError> {
        let config = ProtocolConfig {
            d: 2 * l + 1,
            k,
            m,
            l,
            decoys_per_sequence: m,
            detection_threshold: 0.0,
            seed: 0,
            amplitude_cap: DEFAULT_AMPLITUDE_CAP,
        };
        config.validate()?;
        Ok(config)
    }

    /// Same as [`ProtocolConfig::new`] but keyed by the odd modulus `d`.
    pub fn with_modulus(d: usize, k: usize, m: usize) -> Result<Self, ProtocolError> {
        if d.is_multiple_of(2) {
            return Err(ProtocolError::InvalidConfig(format!("d = {d} must be odd (d = 2l + 1)")));
        }
        Self::new(d / 2, k, m)
    }

    pub fn decoys(mut self, n: usize) -> Self {
        self.decoys_per_sequence = n;
        self
    }

    pub fn threshold(mut self, t: f64) -> Self {
        self.detection_threshold = t;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn amplitude_cap(mut self, cap: u64) -> Self {
        self.amplitude_cap = cap;
        self
    }

    pub fn validate(&self) -> Result<(), ProtocolError> {
        let fail = |msg: String| Err(ProtocolError::InvalidConfig(msg));
        if self.d != 2 * self.l + 1 {
            return fail(format!("d = {} must equal 2l + 1 = {}", self.d, 2 * self.l + 1));
        }
        if self.d < 3 {
            return fail(format!("d = {} must be at least 3", self.d));
        }
        if self.k < 3 {
            return fail(format!("k = {} must be at least 3", self.k));
        }
        if self.m < 1 {
            return fail("m must be at least 1".into());
        }
        if !(0.0..=1.0).contains(&self.detection_threshold) {
            return fail(format!("detection threshold {} outside [0, 1]", self.detection_threshold));
        }
        Ok(())
    }
}
