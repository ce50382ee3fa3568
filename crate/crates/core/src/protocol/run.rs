//! End-to-end orchestration of one comparison session.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::arith::mod_sub;
use super::compare::{tp_compare, ComparisonOutcome};
use super::sequence::{insert_decoys, run_decoy_check, DecoratedSequence, DecoyCheck};
use super::steps::{participant_encode, tp_measure_all, tp_prepare};
use super::transcript::{join, EventKind, Party, Step, Transcript};
use super::types::{participant_encrypt, EncryptedPrivacy, MeasurementRecord, PrivacyVector, RandomMask};
use super::{ProtocolConfig, ProtocolError};
use crate::qudit::{EngineError, Handle, QuditPool};
use crate::Scalar;

/// Direction of a quantum transmission.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Link {
    /// TP → participant (`S_i'`).
    Distribution,
    /// Participant → TP (encoded `S̄_i` plus fresh decoys).
    Return,
}

/// One quantum transmission an interposer can act on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Hop {
    pub step: Step,
    pub link: Link,
    pub participant: usize,
}

/// Hook for anything sitting on the quantum channels or inside a participant.
///
/// Implementations see carriers only; decoy positions and values stay with
/// the sender.
pub trait Interposer<T: Scalar> {
    fn on_quantum_send(&mut self, _hop: Hop, _carriers: &mut [Handle], _pool: &mut QuditPool<T>) -> Result<(), EngineError> {
        Ok(())
    }

    /// Called for every participant after decoy removal, before any
    /// participant encodes.
    fn before_encoding(&mut self, _participant: usize, _carriers: &[Handle], _pool: &mut QuditPool<T>) -> Result<(), EngineError> {
        Ok(())
    }
}

/// Injected randomness for reproducing a specific execution.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ForcedRandomness {
    /// `masks[i]` replaces participant `i`'s sampled `r_i`.
    pub masks: Option<Vec<Vec<usize>>>,
    /// `collapse[j]` is the common GHZ branch `c_j` TP's measurement lands in.
    pub collapse: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckRecord {
    pub step: Step,
    pub link: Link,
    pub participant: usize,
    pub check: DecoyCheck,
}

#[derive(Debug, Clone, PartialEq)]
pub enum AbortReason {
    DecoyCheck { link: Link, participant: usize, error_rate: f64 },
    Integrity { index: usize, detail: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Abort {
    pub step: Step,
    pub reason: AbortReason,
}

/// A run that reached publication, with the simulator's ground truth.
#[derive(Debug, Clone, PartialEq)]
pub struct CompletedRun {
    pub outcome: ComparisonOutcome,
    pub records: Vec<MeasurementRecord>,
    pub encrypted: Vec<EncryptedPrivacy>,
    pub masks: Vec<RandomMask>,
    /// `c_j` when every `w_{i,j} ⊖ r_{i,j}` agrees, `None` otherwise.
    pub common_values: Vec<Option<usize>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RunResult {
    Completed(Box<CompletedRun>),
    Aborted(Abort),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub result: RunResult,
    pub transcript: Transcript,
    pub checks: Vec<CheckRecord>,
}

impl RunOutput {
    pub fn completed(&self) -> Option<&CompletedRun> {
        match &self.result {
            RunResult::Completed(run) => Some(run),
            RunResult::Aborted(_) => None,
        }
    }

    pub fn abort(&self) -> Option<&Abort> {
        match &self.result {
            RunResult::Aborted(a) => Some(a),
            RunResult::Completed(_) => None,
        }
    }

    pub fn caught_by_decoys(&self) -> bool {
        matches!(self.abort(), Some(Abort { reason: AbortReason::DecoyCheck { .. }, .. }))
    }
}

struct Session<'a, 'b, T: Scalar> {
    config: &'a ProtocolConfig,
    rng: ChaCha8Rng,
    pool: QuditPool<T>,
    transcript: Transcript,
    checks: Vec<CheckRecord>,
    adversary: Option<&'b mut dyn Interposer<T>>,
}

impl<T: Scalar> Session<'_, '_, T> {
    fn intercept(&mut self, hop: Hop, seq: &mut DecoratedSequence) -> Result<(), ProtocolError> {
        if let Some(adv) = self.adversary.as_deref_mut() {
            adv.on_quantum_send(hop, &mut seq.carriers, &mut self.pool)?;
        }
        Ok(())
    }

    /// Sender announces, receiver measures and reports, sender judges.
    /// Returns the stripped carriers, or the abort if the check failed.
    fn check_leg(
        &mut self,
        step: Step,
        link: Link,
        participant: usize,
        seq: &DecoratedSequence,
    ) -> Result<Result<Vec<Handle>, Abort>, ProtocolError> {
        let (sender, receiver) = match link {
            Link::Distribution => (Party::Tp, Party::Participant(participant)),
            Link::Return => (Party::Participant(participant), Party::Tp),
        };
        let announcement = seq.announcement();
        self.transcript.push(
            step,
            EventKind::BasisAnnouncement,
            sender,
            receiver,
            format!(
                "positions={} bases={}",
                join(announcement.iter().map(|a| a.0)),
                join(announcement.iter().map(|a| a.1))
            ),
        );
        let check = run_decoy_check(seq, &announcement, &mut self.pool, &mut self.rng, self.config.detection_threshold)?;
        self.transcript.push(
            step,
            EventKind::ClassicalSend,
            receiver,
            sender,
            format!("outcomes={}", join(check.observations.iter().map(|o| o.observed))),
        );
        self.transcript.push(
            step,
            EventKind::DecoyCheckResult,
            sender,
            receiver,
            format!(
                "errors={}/{} rate={:.4} {}",
                check.mismatches(),
                check.observations.len(),
                check.error_rate,
                if check.pass { "pass" } else { "fail" }
            ),
        );
        let outcome = if check.pass {
            Ok(check.stripped.clone())
        } else {
            self.transcript.push(
                step,
                EventKind::Abort,
                sender,
                Party::Public,
                format!("decoy error rate {:.4} above threshold {:.4}", check.error_rate, self.config.detection_threshold),
            );
            Err(Abort {
                step,
                reason: AbortReason::DecoyCheck { link, participant, error_rate: check.error_rate },
            })
        };
        self.checks.push(CheckRecord { step, link, participant, check });
        Ok(outcome)
    }

    fn finish(self, result: RunResult) -> RunOutput {
        RunOutput { result, transcript: self.transcript, checks: self.checks }
    }
}

fn validate_inputs(config: &ProtocolConfig, privacies: &[PrivacyVector], forced: &ForcedRandomness) -> Result<(), ProtocolError> {
    config.validate()?;
    let (k, m) = (config.k, config.m);
    if privacies.len() != k {
        return Err(ProtocolError::LengthMismatch { what: "privacies", expected: k, actual: privacies.len() });
    }
    for (i, p) in privacies.iter().enumerate() {
        if p.owner != i {
            return Err(ProtocolError::OwnerMismatch { expected: i, actual: p.owner });
        }
        if p.values.len() != m {
            return Err(ProtocolError::LengthMismatch { what: "privacy", expected: m, actual: p.values.len() });
        }
        if let Some(&value) = p.values.iter().find(|&&v| v > config.l) {
            return Err(ProtocolError::ValueOutOfRange { what: "privacy", value, max: config.l });
        }
    }
    if let Some(masks) = &forced.masks {
        if masks.len() != k {
            return Err(ProtocolError::LengthMismatch { what: "forced masks", expected: k, actual: masks.len() });
        }
        for (i, r) in masks.iter().enumerate() {
            if r.len() != m {
                return Err(ProtocolError::LengthMismatch { what: "forced mask", expected: m, actual: r.len() });
            }
            RandomMask::new(i, r.clone(), config.d)?;
        }
    }
    if let Some(c) = &forced.collapse {
        if c.len() != m {
            return Err(ProtocolError::LengthMismatch { what: "forced collapse", expected: m, actual: c.len() });
        }
        if let Some(&value) = c.iter().find(|&&v| v >= config.d) {
            return Err(ProtocolError::ValueOutOfRange { what: "forced collapse", value, max: config.d - 1 });
        }
    }
    Ok(())
}

/// Runs all six steps. Decoy-check failures and non-transitive signs end the
/// run as an [`Abort`]; engine and input errors are returned as `Err`.
pub fn run_protocol<T: Scalar>(
    config: &ProtocolConfig,
    privacies: &[PrivacyVector],
    forced: &ForcedRandomness,
    adversary: Option<&mut dyn Interposer<T>>,
) -> Result<RunOutput, ProtocolError> {
    validate_inputs(config, privacies, forced)?;
    let (k, m, d) = (config.k, config.m, config.d);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let (pool, mut outbound) = tp_prepare::<T, _>(config, &mut rng)?;
    let mut s = Session { config, rng, pool, transcript: Transcript::default(), checks: Vec::new(), adversary };

    // Step 1: distribution.
    for (i, seq) in outbound.iter_mut().enumerate() {
        s.transcript.push(
            Step::Preparation,
            EventKind::QuantumSend,
            Party::Tp,
            Party::Participant(i),
            format!("carriers={} decoys={}", seq.carriers.len(), seq.decoy_slots.len()),
        );
        s.intercept(Hop { step: Step::Preparation, link: Link::Distribution, participant: i }, seq)?;
    }

    // Step 2: TP ↔ P_i decoy checks.
    let mut held = Vec::with_capacity(k);
    for (i, seq) in outbound.iter().enumerate() {
        match s.check_leg(Step::EavesdropCheck, Link::Distribution, i, seq)? {
            Ok(stripped) => held.push(stripped),
            Err(abort) => return Ok(s.finish(RunResult::Aborted(abort))),
        }
    }

    // Step 3: encoding and return.
    let masks: Vec<RandomMask> = match &forced.masks {
        Some(rows) => rows.iter().enumerate().map(|(i, r)| RandomMask { owner: i, values: r.clone() }).collect(),
        None => (0..k).map(|i| RandomMask::random(i, m, d, &mut s.rng)).collect(),
    };
    // Local operations on distinct particles commute, so every hook sees the
    // carriers before any participant has encoded.
    if let Some(adv) = s.adversary.as_deref_mut() {
        for (i, carriers) in held.iter().enumerate() {
            adv.before_encoding(i, carriers, &mut s.pool)?;
        }
    }
    let mut inbound = Vec::with_capacity(k);
    for (i, carriers) in held.iter().enumerate() {
        let encoded = participant_encode(&mut s.pool, carriers, &masks[i])?;
        let mut seq = insert_decoys(&mut s.pool, &encoded, config.decoys_per_sequence, Party::Participant(i), &mut s.rng)?;
        s.transcript.push(
            Step::Encoding,
            EventKind::QuantumSend,
            Party::Participant(i),
            Party::Tp,
            format!("carriers={} decoys={}", seq.carriers.len(), seq.decoy_slots.len()),
        );
        s.intercept(Hop { step: Step::Encoding, link: Link::Return, participant: i }, &mut seq)?;
        inbound.push(seq);
    }

    // Step 4: P_i ↔ TP decoy checks, then Z measurement.
    let mut returned = Vec::with_capacity(k);
    for (i, seq) in inbound.iter().enumerate() {
        match s.check_leg(Step::Measurement, Link::Return, i, seq)? {
            Ok(stripped) => returned.push(stripped),
            Err(abort) => return Ok(s.finish(RunResult::Aborted(abort))),
        }
    }
    let forced_first: Option<Vec<usize>> = forced
        .collapse
        .as_ref()
        .map(|c| c.iter().zip(&masks[0].values).map(|(&cj, &r)| (cj + r) % d).collect());
    let records = tp_measure_all(&mut s.pool, &returned, forced_first.as_deref(), &mut s.rng)?;

    // Step 5: encrypted privacies over the authenticated channel.
    let mut encrypted = Vec::with_capacity(k);
    for (p, r) in privacies.iter().zip(&masks) {
        let e = participant_encrypt(p, r, d)?;
        s.transcript.push(
            Step::PrivacyTransmission,
            EventKind::ClassicalSend,
            Party::Participant(p.owner),
            Party::Tp,
            format!("encrypted={}", join(&e.values)),
        );
        encrypted.push(e);
    }

    // Step 6: comparison and publication.
    let outcome = match tp_compare(&encrypted, &records, config) {
        Ok(outcome) => outcome,
        Err(ProtocolError::Integrity { index, detail }) => {
            s.transcript.push(Step::Comparison, EventKind::Abort, Party::Tp, Party::Public, format!("index {}: {detail}", index + 1));
            return Ok(s.finish(RunResult::Aborted(Abort { step: Step::Comparison, reason: AbortReason::Integrity { index, detail } })));
        }
        Err(e) => return Err(e),
    };
    for (j, chain) in outcome.relations.iter().enumerate() {
        s.transcript.push(Step::Comparison, EventKind::Publication, Party::Tp, Party::Public, format!("R{}={chain}", j + 1));
    }

    let common_values = (0..m)
        .map(|j| {
            let shifts: Vec<usize> = (0..k).map(|i| mod_sub(records[i].values[j], masks[i].values[j], d)).collect::<Result<_, _>>()?;
            Ok(shifts.iter().all(|&c| c == shifts[0]).then_some(shifts[0]))
        })
        .collect::<Result<Vec<_>, ProtocolError>>()?;
    let run = CompletedRun { outcome, records, encrypted, masks, common_values };
    Ok(s.finish(RunResult::Completed(Box::new(run))))
}
