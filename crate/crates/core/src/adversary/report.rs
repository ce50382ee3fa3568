use super::estimate::{AttackKind, TrialOutcome};
use std::collections::BTreeMap;

use crate::analysis::stats::{binomial_sd, proportion_interval};

/// Decoy observations on the attacked leg, split by whether Eve guessed the
/// decoy's basis.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LegTally {
    pub matched: u64,
    pub matched_errors: u64,
    pub unmatched: u64,
    pub unmatched_errors: u64,
}

impl LegTally {
    pub(crate) fn record(&mut self, matched: bool, error: bool) {
        if matched {
            self.matched += 1;
            self.matched_errors += error as u64;
        } else {
            self.unmatched += 1;
            self.unmatched_errors += error as u64;
        }
    }

    pub fn observed(&self) -> u64 {
        self.matched + self.unmatched
    }

    pub fn errors(&self) -> u64 {
        self.matched_errors + self.unmatched_errors
    }

    fn add(&mut self, o: &LegTally) {
        self.matched += o.matched;
        self.matched_errors += o.matched_errors;
        self.unmatched += o.unmatched;
        self.unmatched_errors += o.unmatched_errors;
    }
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Aggregate of an attack campaign.
#[derive(Debug, Clone, PartialEq)]
pub struct AttackReport {
    pub kind: AttackKind,
    pub d: usize,
    /// Decoys checked on the attacked leg per session.
    pub decoys_checked: usize,
    pub trials: u64,
    /// Sessions aborted by a failed decoy check.
    pub detections: u64,
    /// Sessions not caught by decoys, including integrity aborts.
    pub completed_undetected: u64,
    pub integrity_aborts: u64,
    pub leg: LegTally,
    pub decoys_observed: u64,
    pub decoy_mismatches: u64,
    pub per_decoy_error_rate: f64,
    pub detection_rate: f64,
    /// 95% interval on the detection rate.
    pub interval: (f64, f64),
    /// Counters describing what the adversary learned.
    pub knowledge: BTreeMap<String, u64>,
    has_leg: bool,
}

impl AttackReport {
    pub(crate) fn empty(kind: AttackKind, d: usize, decoys_checked: usize, has_leg: bool) -> Self {
        AttackReport {
            kind,
            d,
            decoys_checked,
            trials: 0,
            detections: 0,
            completed_undetected: 0,
            integrity_aborts: 0,
            leg: LegTally::default(),
            decoys_observed: 0,
            decoy_mismatches: 0,
            per_decoy_error_rate: 0.0,
            detection_rate: 0.0,
            interval: (0.0, 1.0),
            knowledge: BTreeMap::new(),
            has_leg,
        }
    }

    pub(crate) fn absorb(&mut self, o: &TrialOutcome) {
        self.trials += 1;
        if o.caught {
            self.detections += 1;
        } else {
            self.completed_undetected += 1;
        }
        self.integrity_aborts += o.integrity_abort as u64;
        self.leg.add(&o.leg);
        for (k, v) in &o.knowledge {
            *self.knowledge.entry((*k).to_string()).or_insert(0) += v;
        }
    }

    pub(crate) fn finish(&mut self) {
        self.decoys_observed = self.leg.observed();
        self.decoy_mismatches = self.leg.errors();
        self.per_decoy_error_rate = ratio(self.decoy_mismatches, self.decoys_observed);
        self.detection_rate = ratio(self.detections, self.trials);
        self.interval = proportion_interval(self.detections, self.trials, 0.95);
    }

    pub fn escape_rate(&self) -> f64 {
        1.0 - self.detection_rate
    }

    /// Per-decoy error probability under a uniform basis guess.
    pub fn per_decoy_analytic(&self) -> f64 {
        (self.d - 1) as f64 / (2 * self.d) as f64
    }

    /// Detection probability with every checked decoy disturbed
    /// independently: `1 − ((d+1)/(2d))^n`.
    pub fn derived_formula(&self) -> f64 {
        1.0 - ((self.d + 1) as f64 / (2 * self.d) as f64).powi(self.decoys_checked as i32)
    }

    /// The commonly quoted `1 − ((d−1)/(2d))^n`, which uses the per-decoy
    /// error rate as the escape rate.
    pub fn printed_formula(&self) -> f64 {
        1.0 - ((self.d - 1) as f64 / (2 * self.d) as f64).powi(self.decoys_checked as i32)
    }

    /// Whether the observed detection count is within `sds` binomial
    /// standard deviations of `trials · p`.
    pub fn consistent_with(&self, p: f64, sds: f64) -> bool {
        let expected = self.trials as f64 * p;
        let sd = binomial_sd(self.trials, p);
        (self.detections as f64 - expected).abs() <= sds * sd + 1e-9
    }

    pub fn matched_basis_error_rate(&self) -> f64 {
        ratio(self.leg.matched_errors, self.leg.matched)
    }

    pub fn unmatched_basis_error_rate(&self) -> f64 {
        ratio(self.leg.unmatched_errors, self.leg.unmatched)
    }

    pub fn records(&self) -> Vec<(String, String)> {
        let mut out: Vec<(String, String)> = vec![
            ("kind".into(), self.kind.to_string()),
            ("d".into(), self.d.to_string()),
            ("trials".into(), self.trials.to_string()),
            ("detections".into(), self.detections.to_string()),
            ("completed_undetected".into(), self.completed_undetected.to_string()),
            ("integrity_aborts".into(), self.integrity_aborts.to_string()),
        ];
        if self.has_leg {
            let yes_no = |b: bool| if b { "yes" } else { "no" }.to_string();
            out.extend([
                ("decoys_checked".into(), self.decoys_checked.to_string()),
                ("detection_rate".into(), format!("{:.6}", self.detection_rate)),
                ("escape_rate".into(), format!("{:.6}", self.escape_rate())),
                ("detection_interval_95".into(), format!("[{:.6}, {:.6}]", self.interval.0, self.interval.1)),
                ("decoys_observed".into(), self.decoys_observed.to_string()),
                ("decoy_mismatches".into(), self.decoy_mismatches.to_string()),
                ("per_decoy_error_rate".into(), format!("{:.6}", self.per_decoy_error_rate)),
                ("per_decoy_error_analytic".into(), format!("{:.6}", self.per_decoy_analytic())),
                ("matched_basis_error_rate".into(), format!("{:.6}", self.matched_basis_error_rate())),
                ("unmatched_basis_error_rate".into(), format!("{:.6}", self.unmatched_basis_error_rate())),
                ("derived_detection".into(), format!("{:.6}", self.derived_formula())),
                ("derived_within_3sd".into(), yes_no(self.consistent_with(self.derived_formula(), 3.0))),
                ("printed_detection".into(), format!("{:.6}", self.printed_formula())),
                ("printed_within_3sd".into(), yes_no(self.consistent_with(self.printed_formula(), 3.0))),
            ]);
        }
        out.extend(self.knowledge.iter().map(|(k, v)| (k.clone(), v.to_string())));
        out
    }
}
