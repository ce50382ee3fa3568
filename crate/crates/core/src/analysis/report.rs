use std::fmt::Write as _;
use std::str::FromStr;

use super::{AnalysisError, EfficiencyResult};
use crate::adversary::AttackReport;
use crate::protocol::{AbortReason, ComparisonOutcome, ProtocolConfig, RunOutput, RunResult, Transcript};
use crate::qudit::CovarianceAudit;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    /// Human-readable sections.
    Text,
    /// INI-style `[section]` headers with `key=value` lines.
    Records,
    /// `section,key,value` rows.
    Csv,
}

impl FromStr for ReportFormat {
    type Err = AnalysisError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(ReportFormat::Text),
            "records" => Ok(ReportFormat::Records),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(AnalysisError::UnknownFormat(other.to_string())),
        }
    }
}

impl ReportFormat {
    pub fn extension(self) -> &'static str {
        match self {
            ReportFormat::Text => "txt",
            ReportFormat::Records => "records",
            ReportFormat::Csv => "csv",
        }
    }
}

fn tuple(values: &[usize]) -> String {
    format!("({})", values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","))
}

/// `t`, `t(i,i')`, `s(i,i')` and `R_j` as ordered key/value pairs.
pub fn outcome_records(outcome: &ComparisonOutcome) -> Vec<(String, String)> {
    let mut out = Vec::new();
    for (i, row) in outcome.t.iter().enumerate() {
        out.push((format!("t{i}"), tuple(row)));
    }
    for (&(i, i2), diff) in &outcome.differences {
        out.push((format!("t({i},{i2})"), tuple(diff)));
    }
    for &(i, i2) in outcome.differences.keys() {
        let signs: Vec<String> = outcome.signs(i, i2).iter().map(|s| s.to_string()).collect();
        out.push((format!("s({i},{i2})"), format!("({})", signs.join(","))));
    }
    for (j, chain) in outcome.relations.iter().enumerate() {
        out.push((format!("R{}", j + 1), chain.to_string()));
    }
    out
}

/// `key=value` lines, one per [`outcome_records`] entry.
pub fn render_outcome(outcome: &ComparisonOutcome) -> String {
    outcome_records(outcome).into_iter().map(|(k, v)| format!("{k}={v}\n")).collect()
}

/// Report-ready digest of one protocol run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub label: String,
    pub records: Vec<(String, String)>,
}

impl RunSummary {
    pub fn from_output(label: impl Into<String>, config: &ProtocolConfig, output: &RunOutput) -> Self {
        let mut records = vec![
            ("d".to_string(), config.d.to_string()),
            ("k".to_string(), config.k.to_string()),
            ("m".to_string(), config.m.to_string()),
            ("decoys".to_string(), config.decoys_per_sequence.to_string()),
            ("seed".to_string(), config.seed.to_string()),
        ];
        match &output.result {
            RunResult::Completed(run) => {
                records.push(("status".into(), "completed".into()));
                for r in &run.records {
                    records.push((format!("w{}", r.owner), tuple(&r.values)));
                }
                for e in &run.encrypted {
                    records.push((format!("pbar{}", e.owner), tuple(&e.values)));
                }
                records.extend(outcome_records(&run.outcome));
            }
            RunResult::Aborted(abort) => {
                records.push(("status".into(), "aborted".into()));
                records.push(("abort_step".into(), abort.step.to_string()));
                let reason = match &abort.reason {
                    AbortReason::DecoyCheck { link, participant, error_rate } => {
                        format!("decoy check failed on {link:?} link of P{participant} (error rate {error_rate:.4})")
                    }
                    AbortReason::Integrity { index, detail } => format!("integrity failure at index {}: {detail}", index + 1),
                };
                records.push(("abort_reason".into(), reason));
            }
        }
        records.push(("transcript_events".into(), output.transcript.len().to_string()));
        RunSummary { label: label.into(), records }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ReportInputs {
    pub runs: Vec<RunSummary>,
    pub transcripts: Vec<(String, Transcript)>,
    pub attacks: Vec<AttackReport>,
    pub efficiency: Vec<EfficiencyResult>,
    pub audits: Vec<CovarianceAudit>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Section {
    pub title: String,
    pub records: Vec<(String, String)>,
}

/// Ordered sections; rendering is a pure function of the contents.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub sections: Vec<Section>,
}

pub fn build_report(inputs: &ReportInputs) -> Result<Report, AnalysisError> {
    let mut sections = Vec::new();
    for run in &inputs.runs {
        sections.push(Section { title: format!("run {}", run.label), records: run.records.clone() });
    }
    for (label, transcript) in &inputs.transcripts {
        let mut records = vec![("events".to_string(), transcript.len().to_string())];
        if let Some(step) = transcript.last_step() {
            records.push(("last_step".into(), step.to_string()));
        }
        sections.push(Section { title: format!("transcript {label}"), records });
    }
    for attack in &inputs.attacks {
        sections.push(Section { title: format!("attack {}", attack.kind), records: attack.records() });
    }
    if !inputs.efficiency.is_empty() {
        let records = inputs
            .efficiency
            .iter()
            .map(|r| {
                (format!("{} k={}", r.protocol, r.k), format!("eta={} c={} q={} b={}", r.eta, r.c, r.q, r.b))
            })
            .collect();
        sections.push(Section { title: "efficiency".into(), records });
    }
    for audit in &inputs.audits {
        let mut records = vec![
            ("checked".to_string(), audit.verdicts.len().to_string()),
            ("holding".to_string(), audit.holding().to_string()),
        ];
        for (d, holding, checked) in audit.by_dimension() {
            records.push((format!("d={d}"), format!("{holding}/{checked} hold")));
            // One digit per (r, s) in row-major order: 1 holds, 0 fails.
            let bits: String = audit
                .verdicts
                .iter()
                .filter(|v| v.dim == d)
                .map(|v| if v.holds { '1' } else { '0' })
                .collect();
            records.push((format!("d={d} verdicts"), bits));
        }
        sections.push(Section { title: format!("shift covariance audit {}-basis", audit.basis), records });
    }
    if sections.is_empty() {
        return Err(AnalysisError::EmptyReport);
    }
    Ok(Report { sections })
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl Report {
    pub fn section(&self, title: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.title == title)
    }

    pub fn render(&self, format: ReportFormat) -> String {
        let mut out = String::new();
        match format {
            ReportFormat::Text => {
                for (n, s) in self.sections.iter().enumerate() {
                    if n > 0 {
                        out.push('\n');
                    }
                    let _ = writeln!(out, "== {} ==", s.title);
                    for (k, v) in &s.records {
                        let _ = writeln!(out, "{k}: {v}");
                    }
                }
            }
            ReportFormat::Records => {
                for s in &self.sections {
                    let _ = writeln!(out, "[{}]", s.title);
                    for (k, v) in &s.records {
                        let _ = writeln!(out, "{k}={v}");
                    }
                }
            }
            ReportFormat::Csv => {
                out.push_str("section,key,value\n");
                for s in &self.sections {
                    for (k, v) in &s.records {
                        let _ = writeln!(out, "{},{},{}", csv_field(&s.title), csv_field(k), csv_field(v));
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::efficiency_table;

    #[test]
    fn empty_inputs_rejected() {
        assert_eq!(build_report(&ReportInputs::default()).unwrap_err(), AnalysisError::EmptyReport);
    }

    #[test]
    fn efficiency_only_report_has_no_attack_block() {
        let inputs = ReportInputs { efficiency: efficiency_table(3, 1).unwrap(), ..Default::default() };
        let text = build_report(&inputs).unwrap().render(ReportFormat::Text);
        assert!(text.contains("Ours k=3: eta=1/9"));
        assert!(!text.contains("attack"));
    }

    #[test]
    fn csv_quotes_commas() {
        let report = Report {
            sections: vec![Section { title: "run x".into(), records: vec![("t0".into(), "(1,5)".into())] }],
        };
        assert_eq!(report.render(ReportFormat::Csv), "section,key,value\nrun x,t0,\"(1,5)\"\n");
        assert_eq!(report.render(ReportFormat::Records), "[run x]\nt0=(1,5)\n");
    }

    #[test]
    fn formats_parse() {
        assert_eq!("records".parse::<ReportFormat>().unwrap(), ReportFormat::Records);
        assert!("json".parse::<ReportFormat>().is_err());
    }
}
