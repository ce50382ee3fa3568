//! Scenario files: TOML documents describing one protocol configuration and
//! an optional attack campaign.

use std::fmt;
use std::path::{Path, PathBuf};

use qpc_core::adversary::{AttackKind, AttackScenario};
use qpc_core::protocol::{ForcedRandomness, Link, PrivacyVector, ProtocolConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

pub const PAPER_EXAMPLE: &str = include_str!("../scenarios/paper-example.toml");

/// Names accepted by `--scenario` in place of a path.
pub const BUNDLED: [(&str, &str); 1] = [("paper-example", PAPER_EXAMPLE)];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioError(pub String);

impl fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ScenarioError {}

fn err<T>(msg: impl Into<String>) -> Result<T, ScenarioError> {
    Err(ScenarioError(msg.into()))
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub protocol: ProtocolSection,
    pub decoys: Option<usize>,
    pub threshold: Option<f64>,
    pub seed: Option<u64>,
    pub attack: Option<AttackSection>,
    pub output: Option<OutputSection>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProtocolSection {
    pub d: Option<usize>,
    pub l: Option<usize>,
    pub k: usize,
    pub m: usize,
    pub privacies: Option<Vec<Vec<usize>>>,
    #[serde(default)]
    pub random_privacies: bool,
    pub masks: Option<Vec<Vec<usize>>>,
    pub collapse: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AttackSection {
    pub kind: String,
    pub trials: Option<u64>,
    pub target: Option<usize>,
    pub victim: Option<usize>,
    pub link: Option<String>,
    pub z_probability: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub dir: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Privacies {
    Fixed(Vec<Vec<usize>>),
    /// Drawn from the scenario seed.
    Random,
}

/// A validated scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub config: ProtocolConfig,
    pub privacies: Privacies,
    pub forced: ForcedRandomness,
    pub attack: Option<AttackScenario>,
    pub output_dir: Option<PathBuf>,
}

pub const DEFAULT_ATTACK_TRIALS: u64 = 1000;

impl Scenario {
    /// Loads a bundled scenario by name, or a file by path.
    pub fn load(name_or_path: &str) -> Result<Self, ScenarioError> {
        if let Some((_, text)) = BUNDLED.iter().find(|(name, _)| *name == name_or_path) {
            return Scenario::parse(text);
        }
        let path = Path::new(name_or_path);
        let text = std::fs::read_to_string(path).map_err(|e| ScenarioError(format!("cannot read scenario {}: {e}", path.display())))?;
        Scenario::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, ScenarioError> {
        let file: ScenarioFile = toml::from_str(text).map_err(|e| ScenarioError(format!("malformed scenario: {}", e.to_string().trim_end())))?;
        Scenario::from_file(file)
    }

    pub fn from_file(file: ScenarioFile) -> Result<Self, ScenarioError> {
        let p = &file.protocol;
        let (d, l) = match (p.d, p.l) {
            (Some(_), Some(_)) => return err("protocol: give exactly one of `d` and `l`, not both"),
            (None, None) => return err("protocol: one of `d` or `l` is required"),
            (Some(d), None) => {
                if d < 3 || d % 2 == 0 {
                    return err(format!("protocol.d = {d}: must be odd and at least 3 (d = 2l + 1)"));
                }
                (d, (d - 1) / 2)
            }
            (None, Some(l)) => {
                if l == 0 {
                    return err("protocol.l = 0: must be at least 1");
                }
                (2 * l + 1, l)
            }
        };
        if p.k < 3 {
            return err(format!("protocol.k = {}: at least 3 participants are required", p.k));
        }
        if p.m == 0 {
            return err("protocol.m = 0: privacy vectors need at least one element");
        }
        let mut config = ProtocolConfig::with_modulus(d, p.k, p.m).map_err(|e| ScenarioError(format!("protocol: {e}")))?;
        if let Some(n) = file.decoys {
            config = config.decoys(n);
        }
        if let Some(t) = file.threshold {
            if !(0.0..=1.0).contains(&t) {
                return err(format!("threshold = {t}: must lie in [0, 1]"));
            }
            config = config.threshold(t);
        }
        config = config.seed(file.seed.unwrap_or(0));

        let privacies = match (&p.privacies, p.random_privacies) {
            (Some(_), true) => return err("protocol: `privacies` and `random_privacies` are mutually exclusive"),
            (None, false) => return err("protocol: `privacies` is required unless `random_privacies = true`"),
            (None, true) => Privacies::Random,
            (Some(rows), false) => {
                check_rows("protocol.privacies", rows, p.k, p.m, l + 1, "privacies must lie in 0..=l")?;
                Privacies::Fixed(rows.clone())
            }
        };
        if let Some(rows) = &p.masks {
            check_rows("protocol.masks", rows, p.k, p.m, d, "masks must lie in 0..d")?;
        }
        if let Some(c) = &p.collapse {
            if c.len() != p.m {
                return err(format!("protocol.collapse: {} entries, expected m = {}", c.len(), p.m));
            }
            if let Some((j, v)) = c.iter().enumerate().find(|(_, &v)| v >= d) {
                return err(format!("protocol.collapse[{j}] = {v} is out of range: collapse values must lie in 0..d (d = {d})"));
            }
        }
        let forced = ForcedRandomness { masks: p.masks.clone(), collapse: p.collapse.clone() };

        let attack = file.attack.as_ref().map(|a| attack_scenario(a, &config)).transpose()?;
        Ok(Scenario { config, privacies, forced, attack, output_dir: file.output.and_then(|o| o.dir) })
    }

    /// Privacy vectors for a run with `config`'s seed.
    pub fn privacy_vectors(&self) -> Vec<PrivacyVector> {
        let c = &self.config;
        match &self.privacies {
            Privacies::Fixed(rows) => rows.iter().enumerate().map(|(i, v)| PrivacyVector { owner: i, values: v.clone() }).collect(),
            Privacies::Random => {
                let mut rng = ChaCha8Rng::seed_from_u64(c.seed ^ 0x7072_6976_6163_7921);
                (0..c.k).map(|i| PrivacyVector::random(i, c.m, c.l, &mut rng)).collect()
            }
        }
    }

    /// Applies a `--seed` override to the run and any attack campaign.
    pub fn reseed(&mut self, seed: u64) {
        self.config.seed = seed;
        if let Some(a) = &mut self.attack {
            a.seed = seed;
        }
    }
}

fn check_rows(field: &str, rows: &[Vec<usize>], k: usize, m: usize, bound: usize, rule: &str) -> Result<(), ScenarioError> {
    if rows.len() != k {
        return err(format!("{field}: {} vectors, expected one per participant (k = {k})", rows.len()));
    }
    for (i, row) in rows.iter().enumerate() {
        if row.len() != m {
            return err(format!("{field}[{i}]: length {}, expected m = {m}", row.len()));
        }
        if let Some((j, v)) = row.iter().enumerate().find(|(_, &v)| v >= bound) {
            return err(format!("{field}[{i}][{j}] = {v} is out of range: {rule} (bound {})", bound - 1));
        }
    }
    Ok(())
}

fn attack_scenario(a: &AttackSection, config: &ProtocolConfig) -> Result<AttackScenario, ScenarioError> {
    let kind: AttackKind = a.kind.parse().map_err(|_| {
        let known: Vec<&str> = AttackKind::ALL.iter().map(|k| k.name()).collect();
        ScenarioError(format!("attack.kind = \"{}\": unknown attack kind (expected one of {})", a.kind, known.join(", ")))
    })?;
    let mut s = AttackScenario::new(kind, a.trials.unwrap_or(DEFAULT_ATTACK_TRIALS), config.seed);
    if let Some(t) = a.target {
        s.target = t;
    }
    if let Some(v) = a.victim {
        s.victim = v;
    }
    if let Some(z) = a.z_probability {
        s.z_probability = z;
    }
    s.link = match a.link.as_deref() {
        None | Some("distribution") => Link::Distribution,
        Some("return") => Link::Return,
        Some(other) => return err(format!("attack.link = \"{other}\": expected \"distribution\" or \"return\"")),
    };
    s.validate(config).map_err(|e| ScenarioError(format!("attack: {e}")))?;
    Ok(s)
}
