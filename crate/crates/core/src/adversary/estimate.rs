use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::dishonest::{attacker_candidates, DishonestParticipant};
use super::eve::{InterceptResend, Interception};
use super::report::{AttackReport, LegTally};
use super::semihonest::semihonest_tp_analysis;
use super::AdversaryError;
use crate::protocol::{mod_sub, run_protocol, AbortReason, ForcedRandomness, Interposer, Link, PrivacyVector, ProtocolConfig, RunOutput};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AttackKind {
    ExternalInterceptResend,
    DishonestParticipant,
    SemiHonestTp,
}

impl AttackKind {
    pub const ALL: [AttackKind; 3] = [AttackKind::ExternalInterceptResend, AttackKind::DishonestParticipant, AttackKind::SemiHonestTp];

    pub fn name(self) -> &'static str {
        match self {
            AttackKind::ExternalInterceptResend => "external-intercept-resend",
            AttackKind::DishonestParticipant => "dishonest-participant",
            AttackKind::SemiHonestTp => "semi-honest-tp",
        }
    }
}

impl fmt::Display for AttackKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AttackKind {
    type Err = AdversaryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AttackKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| AdversaryError::InvalidScenario(format!("unknown attack kind `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AttackScenario {
    pub kind: AttackKind,
    /// Participant whose leg Eve attacks, or the dishonest participant.
    pub target: usize,
    /// Participant the dishonest participant spies on.
    pub victim: usize,
    /// Leg attacked by the external eavesdropper.
    pub link: Link,
    /// Probability that Eve guesses the Z basis.
    pub z_probability: f64,
    pub trials: u64,
    pub seed: u64,
    /// Fixed privacies for every trial; drawn per trial when `None`.
    pub privacies: Option<Vec<Vec<usize>>>,
}

impl AttackScenario {
    pub fn new(kind: AttackKind, trials: u64, seed: u64) -> Self {
        AttackScenario { kind, target: 0, victim: 1, link: Link::Distribution, z_probability: 0.5, trials, seed, privacies: None }
    }

    pub fn validate(&self, config: &ProtocolConfig) -> Result<(), AdversaryError> {
        config.validate()?;
        let bad = |msg: String| Err(AdversaryError::InvalidScenario(msg));
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.target >= config.k {
            return bad(format!("target {} is not a participant (k = {})", self.target, config.k));
        }
        if self.kind == AttackKind::DishonestParticipant {
            if self.victim >= config.k {
                return bad(format!("victim {} is not a participant (k = {})", self.victim, config.k));
            }
            if self.victim == self.target {
                return bad("victim and attacker must differ".into());
            }
        }
        if !(0.0..=1.0).contains(&self.z_probability) {
            return bad(format!("z_probability {} outside [0, 1]", self.z_probability));
        }
        if let Some(p) = &self.privacies {
            if p.len() != config.k {
                return bad(format!("{} privacy vectors for k = {}", p.len(), config.k));
            }
        }
        Ok(())
    }

    /// The leg whose decoy check measures the attack, if any.
    fn attacked_leg(&self) -> Option<(Link, usize)> {
        match self.kind {
            AttackKind::ExternalInterceptResend => Some((self.link, self.target)),
            AttackKind::DishonestParticipant => Some((Link::Return, self.victim)),
            AttackKind::SemiHonestTp => None,
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trial `index`; independent of worker count and scheduling.
pub fn trial_seed(base: u64, index: u64) -> u64 {
    splitmix64(splitmix64(base) ^ index)
}

#[derive(Debug, Default)]
pub(crate) struct TrialOutcome {
    pub caught: bool,
    pub integrity_abort: bool,
    pub leg: LegTally,
    pub knowledge: BTreeMap<&'static str, u64>,
}

fn leg_tally(output: &RunOutput, leg: Option<(Link, usize)>, log: &[Interception]) -> LegTally {
    let mut tally = LegTally::default();
    let Some((link, participant)) = leg else { return tally };
    for rec in output.checks.iter().filter(|c| c.link == link && c.participant == participant) {
        for obs in &rec.check.observations {
            let eve = log.iter().find(|e| e.link == link && e.participant == participant && e.position == obs.position);
            let matched = eve.is_some_and(|e| e.basis == obs.basis);
            tally.record(matched, obs.mismatch());
        }
    }
    tally
}

fn run_trial(scenario: &AttackScenario, config: &ProtocolConfig, index: u64) -> Result<TrialOutcome, AdversaryError> {
    let seed = trial_seed(scenario.seed, index);
    let mut cfg = config.clone();
    cfg.seed = seed;
    let privacies: Vec<PrivacyVector> = match &scenario.privacies {
        Some(rows) => rows.iter().enumerate().map(|(i, v)| PrivacyVector::new(i, v.clone(), cfg.l)).collect::<Result<_, _>>()?,
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(seed ^ 0x7072_6976));
            (0..cfg.k).map(|i| PrivacyVector::random(i, cfg.m, cfg.l, &mut rng)).collect()
        }
    };
    let adversary_seed = splitmix64(seed ^ 0x0065_7665);
    let leg = scenario.attacked_leg();
    let mut out = TrialOutcome::default();
    let output = match scenario.kind {
        AttackKind::ExternalInterceptResend => {
            let mut eve = InterceptResend::new(Some(scenario.target), scenario.link, adversary_seed).with_z_probability(scenario.z_probability);
            let output = run_protocol::<f64>(&cfg, &privacies, &ForcedRandomness::default(), Some(&mut eve as &mut dyn Interposer<f64>))?;
            out.leg = leg_tally(&output, leg, &eve.log);
            output
        }
        AttackKind::DishonestParticipant => {
            let mut adv = DishonestParticipant::new(scenario.target, scenario.victim, adversary_seed).with_z_probability(scenario.z_probability);
            let output = run_protocol::<f64>(&cfg, &privacies, &ForcedRandomness::default(), Some(&mut adv as &mut dyn Interposer<f64>))?;
            out.leg = leg_tally(&output, leg, &adv.eve.log);
            if !adv.branch.is_empty() {
                out.knowledge.insert("branch_checked", 1);
                out.knowledge.insert("branch_matched", adv.branch_matches() as u64);
            }
            if let Some(run) = output.completed() {
                let recovered = adv.recovered_mask(&adv.decoy_positions(&output.checks), cfg.d);
                let truth = &run.masks[scenario.victim].values;
                let correct = recovered.iter().filter(|(&j, &r)| truth[j] == r).count() as u64;
                let residual = recovered.values().map(|&r| attacker_candidates(cfg.d, Some(r), None).len() as u64).min().unwrap_or(cfg.d as u64);
                out.knowledge.insert("mask_entries_recovered", recovered.len() as u64);
                out.knowledge.insert("mask_entries_correct", correct);
                out.knowledge.insert("mask_entries_total", cfg.m as u64);
                out.knowledge.insert("min_privacy_candidates", residual);
            }
            output
        }
        AttackKind::SemiHonestTp => {
            let output = run_protocol::<f64>(&cfg, &privacies, &ForcedRandomness::default(), None)?;
            if let Some(run) = output.completed() {
                let know = semihonest_tp_analysis(cfg.d, &run.records, &run.encrypted)?;
                let all_d = know.candidates.iter().flatten().all(|s| s.len() == cfg.d);
                let mut exact = true;
                for &(i, i2, j) in know.differences.keys() {
                    let truth = mod_sub(privacies[i].values[j], privacies[i2].values[j], cfg.d)?;
                    exact &= know.difference(i, i2, j) == Some(truth);
                }
                out.knowledge.insert("runs_analyzed", 1);
                out.knowledge.insert("runs_all_candidates_full", all_d as u64);
                out.knowledge.insert("runs_differences_exact", exact as u64);
            }
            output
        }
    };
    out.caught = output.caught_by_decoys();
    out.integrity_abort = matches!(output.abort().map(|a| &a.reason), Some(AbortReason::Integrity { .. }));
    Ok(out)
}

/// Runs `scenario.trials` independent sessions in parallel and tallies how
/// often the attack is caught and what it learns. Results depend only on the
/// scenario seed, never on the thread count.
pub fn estimate_detection_probability(scenario: &AttackScenario, config: &ProtocolConfig) -> Result<AttackReport, AdversaryError> {
    scenario.validate(config)?;
    let outcomes: Vec<TrialOutcome> = (0..scenario.trials)
        .into_par_iter()
        .map(|t| run_trial(scenario, config, t))
        .collect::<Result<_, _>>()?;
    let mut report = AttackReport::empty(scenario.kind, config.d, config.decoys_per_sequence, scenario.attacked_leg().is_some());
    for o in &outcomes {
        report.absorb(o);
    }
    report.finish();
    Ok(report)
}
