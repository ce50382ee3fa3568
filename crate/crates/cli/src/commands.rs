//! The `run`, `attack` and `efficiency` subcommands.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use qpc_core::adversary::{estimate_detection_probability, AttackKind, AttackReport, AttackScenario, DishonestParticipant, InterceptResend};
use qpc_core::analysis::{build_report, efficiency_table, efficiency_table_csv, ProtocolId, ReportFormat, ReportInputs, RunSummary};
use qpc_core::protocol::{run_protocol, Interposer, ProtocolConfig, RunOutput};
use qpc_core::qudit::{audit_x_covariance, audit_z_shift};

use crate::scenario::{Scenario, ScenarioError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_ABORT: i32 = 2;

/// Environment variable naming the default artifact directory.
pub const OUT_DIR_ENV: &str = "QPC_OUT_DIR";
pub const DEFAULT_OUT_DIR: &str = "qpc-out";

/// Largest dimension covered by the shift covariance audits in run reports.
pub const AUDIT_MAX_DIM: usize = 13;

/// Anything that ends a command with exit status 1.
#[derive(Debug, Clone, PartialEq)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

impl From<ScenarioError> for UsageError {
    fn from(e: ScenarioError) -> Self {
        UsageError(e.0)
    }
}

fn usage<E: fmt::Display>(context: &str) -> impl FnOnce(E) -> UsageError + '_ {
    move |e| UsageError(format!("{context}: {e}"))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioOptions {
    pub scenario: String,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: ReportFormat,
    pub trials: Option<u64>,
    pub workers: Option<usize>,
}

impl ScenarioOptions {
    pub fn new(scenario: impl Into<String>) -> Self {
        ScenarioOptions { scenario: scenario.into(), seed: None, out: None, format: ReportFormat::Text, trials: None, workers: None }
    }

    fn load(&self) -> Result<Scenario, UsageError> {
        let mut s = Scenario::load(&self.scenario)?;
        if let Some(seed) = self.seed {
            s.reseed(seed);
        }
        if let (Some(t), Some(a)) = (self.trials, s.attack.as_mut()) {
            if t == 0 {
                return Err(UsageError("--trials must be at least 1".into()));
            }
            a.trials = t;
        }
        Ok(s)
    }

    /// `--out`, then the scenario's `[output] dir`, then `$QPC_OUT_DIR`,
    /// then `./qpc-out`.
    fn out_dir(&self, scenario: &Scenario) -> PathBuf {
        self.out
            .clone()
            .or_else(|| scenario.output_dir.clone())
            .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR))
    }
}

fn write_artifact(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, UsageError> {
    std::fs::create_dir_all(dir).map_err(usage(&format!("cannot create {}", dir.display())))?;
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(usage(&format!("cannot write {}", path.display())))?;
    Ok(path)
}

fn run_attack(attack: &AttackScenario, config: &ProtocolConfig, workers: Option<usize>) -> Result<AttackReport, UsageError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = workers {
        if n == 0 {
            return Err(UsageError("--workers must be at least 1".into()));
        }
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(usage("worker pool"))?;
    pool.install(|| estimate_detection_probability(attack, config)).map_err(usage("attack"))
}

fn key_values(records: &[(String, String)]) -> String {
    records.iter().map(|(k, v)| format!("{k}={v}\n")).collect()
}

/// The adversary sitting on the channel during `qpc run`'s own session.
/// A semi-honest TP only analyses what it receives, so it needs none.
fn session_adversary(attack: &AttackScenario, seed: u64) -> Option<Box<dyn Interposer<f64>>> {
    let seed = seed ^ 0x0072_756e_5f61_6476;
    match attack.kind {
        AttackKind::ExternalInterceptResend => {
            Some(Box::new(InterceptResend::new(Some(attack.target), attack.link, seed).with_z_probability(attack.z_probability)))
        }
        AttackKind::DishonestParticipant => {
            Some(Box::new(DishonestParticipant::new(attack.target, attack.victim, seed).with_z_probability(attack.z_probability)))
        }
        AttackKind::SemiHonestTp => None,
    }
}

/// Result of `qpc run`, for callers that want more than the exit status.
#[derive(Debug, Clone)]
pub struct RunArtifacts {
    pub output: RunOutput,
    pub summary: RunSummary,
    pub attack: Option<AttackReport>,
    pub dir: PathBuf,
}

impl RunArtifacts {
    pub fn exit_code(&self) -> i32 {
        if self.output.completed().is_some() {
            EXIT_OK
        } else {
            EXIT_ABORT
        }
    }
}

/// Runs the scenario once (with its adversary on the channel, if any, plus
/// the attack campaign) and writes
/// `transcript.log`, `outcome.txt` and `report.<ext>`.
pub fn cmd_run(opts: &ScenarioOptions, stdout: &mut dyn Write) -> Result<RunArtifacts, UsageError> {
    let scenario = opts.load()?;
    let config = &scenario.config;
    let privacies = scenario.privacy_vectors();
    let mut adversary = scenario.attack.as_ref().and_then(|a| session_adversary(a, config.seed));
    let output = run_protocol::<f64>(config, &privacies, &scenario.forced, adversary.as_mut().map(|a| a.as_mut() as &mut dyn Interposer<f64>)).map_err(usage("run"))?;
    let summary = RunSummary::from_output(opts.scenario.as_str(), config, &output);
    let attack = scenario.attack.as_ref().map(|a| run_attack(a, config, opts.workers)).transpose()?;

    let audits = vec![
        audit_z_shift::<f64>(AUDIT_MAX_DIM).map_err(usage("audit"))?,
        audit_x_covariance::<f64>(AUDIT_MAX_DIM).map_err(usage("audit"))?,
    ];
    let inputs = ReportInputs {
        runs: vec![summary.clone()],
        transcripts: vec![(opts.scenario.clone(), output.transcript.clone())],
        attacks: attack.iter().cloned().collect(),
        efficiency: Vec::new(),
        audits,
    };
    let report = build_report(&inputs).map_err(usage("report"))?;

    let dir = opts.out_dir(&scenario);
    write_artifact(&dir, "transcript.log", &output.transcript.to_log())?;
    write_artifact(&dir, "outcome.txt", &key_values(&summary.records))?;
    let report_path = write_artifact(&dir, &format!("report.{}", opts.format.extension()), &report.render(opts.format))?;

    let _ = write!(stdout, "{}", key_values(&summary.records));
    let _ = writeln!(stdout, "report={}", report_path.display());
    Ok(RunArtifacts { output, summary, attack, dir })
}

/// Runs the scenario's attack campaign and writes `attack-report.<ext>`.
pub fn cmd_attack(opts: &ScenarioOptions, stdout: &mut dyn Write) -> Result<AttackReport, UsageError> {
    let scenario = opts.load()?;
    let Some(attack) = &scenario.attack else {
        return Err(UsageError(format!("scenario {} has no [attack] section", opts.scenario)));
    };
    let report = run_attack(attack, &scenario.config, opts.workers)?;
    let inputs = ReportInputs { attacks: vec![report.clone()], ..ReportInputs::default() };
    let rendered = build_report(&inputs).map_err(usage("report"))?.render(opts.format);
    let dir = opts.out_dir(&scenario);
    let path = write_artifact(&dir, &format!("attack-report.{}", opts.format.extension()), &rendered)?;
    let _ = write!(stdout, "{}", key_values(&report.records()));
    let _ = writeln!(stdout, "report={}", path.display());
    Ok(report)
}

/// Inclusive range of participant counts: `"3"`, `"3..5"` or `"3..=5"`.
pub fn parse_k_range(text: &str) -> Result<(u64, u64), UsageError> {
    let bad = || UsageError(format!("--k {text}: expected N, N..M or N..=M"));
    let num = |s: &str| s.trim().parse::<u64>().map_err(|_| bad());
    let (lo, hi) = match text.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?),
        None => {
            let k = num(text)?;
            (k, k)
        }
    };
    if lo < 3 {
        return Err(UsageError(format!("--k {text}: the protocol needs k >= 3")));
    }
    if hi < lo {
        return Err(UsageError(format!("--k {text}: empty range")));
    }
    Ok((lo, hi))
}

/// Efficiency table per requested `k`, rendered to a string.
pub fn cmd_efficiency(k_range: &str, format: ReportFormat) -> Result<String, UsageError> {
    let (lo, hi) = parse_k_range(k_range)?;
    let mut rows = Vec::new();
    for k in lo..=hi {
        rows.extend(efficiency_table(k, 1).map_err(usage("efficiency"))?);
    }
    Ok(match format {
        ReportFormat::Csv => efficiency_table_csv(&rows),
        ReportFormat::Text => {
            let mut out = String::new();
            for (n, block) in rows.chunks(ProtocolId::ALL.len()).enumerate() {
                if n > 0 {
                    out.push('\n');
                }
                out.push_str(&format!("k = {}\n", block[0].k));
                for row in block {
                    out.push_str(&format!("{}, {}\n", row.protocol, row.eta));
                }
            }
            out
        }
        ReportFormat::Records => {
            let inputs = ReportInputs { efficiency: rows, ..ReportInputs::default() };
            build_report(&inputs).map_err(usage("report"))?.render(format)
        }
    })
}
