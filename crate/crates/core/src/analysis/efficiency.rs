use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;

use super::AnalysisError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProtocolId {
    Cth2013,
    Hhh2017,
    Lys2014,
    Hhg2015,
    Ours,
}

impl ProtocolId {
    pub const ALL: [ProtocolId; 5] =
        [ProtocolId::Cth2013, ProtocolId::Hhh2017, ProtocolId::Lys2014, ProtocolId::Hhg2015, ProtocolId::Ours];

    pub fn name(self) -> &'static str {
        match self {
            ProtocolId::Cth2013 => "CTH2013",
            ProtocolId::Hhh2017 => "HHH2017",
            ProtocolId::Lys2014 => "LYS2014",
            ProtocolId::Hhg2015 => "HHG2015",
            ProtocolId::Ours => "Ours",
        }
    }
}

impl fmt::Display for ProtocolId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProtocolId {
    type Err = AnalysisError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ProtocolId::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| AnalysisError::UnknownProtocol(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EfficiencyInput {
    pub protocol: ProtocolId,
    pub k: u64,
    pub m: u64,
}

/// `η = c / (q + b)`: compared digits over qudits plus classical digits spent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EfficiencyResult {
    pub protocol: ProtocolId,
    pub k: u64,
    pub m: u64,
    pub c: u64,
    pub q: u64,
    pub b: u64,
    pub eta: Ratio<u64>,
}

pub fn efficiency(input: EfficiencyInput) -> Result<EfficiencyResult, AnalysisError> {
    let EfficiencyInput { protocol, k, m } = input;
    if k < 3 || m < 1 {
        return Err(AnalysisError::InvalidSize { k, m });
    }
    let mk = m * k;
    // (quantum carriers incl. decoys, classical digits)
    let (q, b) = match protocol {
        // GHZ-class particles + decoys; m encoded bits per participant.
        ProtocolId::Cth2013 => (mk + mk, mk),
        // 2m states + 2m decoys per participant, 2mk qubits of TP1→TP2
        // direct communication; m bits to each of the two TPs.
        ProtocolId::Hhh2017 => (2 * mk + 2 * mk + 2 * mk, mk + mk),
        // Entangled particles + decoys; m encrypted digits per participant.
        // Excludes the key-agreement cost.
        ProtocolId::Lys2014 => (mk + mk, mk),
        // GHZ and entangled sequences with decoys, then the re-encoded
        // sequence with decoys back to TP.
        ProtocolId::Hhg2015 => (2 * mk + 2 * mk + mk + mk, 0),
        // GHZ particles + decoys; m encrypted digits per participant.
        ProtocolId::Ours => (mk + mk, mk),
    };
    Ok(EfficiencyResult { protocol, k, m, c: m, q, b, eta: Ratio::new(m, q + b) })
}

/// All five rows for one `(k, m)`.
pub fn efficiency_table(k: u64, m: u64) -> Result<Vec<EfficiencyResult>, AnalysisError> {
    ProtocolId::ALL.into_iter().map(|protocol| efficiency(EfficiencyInput { protocol, k, m })).collect()
}

pub fn efficiency_table_csv(rows: &[EfficiencyResult]) -> String {
    let mut out = String::from("k,protocol,m,c,q,b,eta\n");
    for r in rows {
        out.push_str(&format!("{},{},{},{},{},{},{}\n", r.k, r.protocol, r.m, r.c, r.q, r.b, r.eta));
    }
    out
}
