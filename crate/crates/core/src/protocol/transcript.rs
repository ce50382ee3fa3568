use std::fmt;

/// Message endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Party {
    Tp,
    Participant(usize),
    /// Broadcast to everyone.
    Public,
}

impl fmt::Display for Party {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Party::Tp => f.write_str("TP"),
            Party::Participant(i) => write!(f, "P{i}"),
            Party::Public => f.write_str("ALL"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Step {
    Preparation = 1,
    EavesdropCheck = 2,
    Encoding = 3,
    Measurement = 4,
    PrivacyTransmission = 5,
    Comparison = 6,
}

impl Step {
    pub fn number(self) -> u8 {
        self as u8
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Step::Preparation => "preparation",
            Step::EavesdropCheck => "eavesdrop-check",
            Step::Encoding => "encoding",
            Step::Measurement => "measurement",
            Step::PrivacyTransmission => "privacy-transmission",
            Step::Comparison => "comparison",
        };
        write!(f, "{}:{name}", self.number())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventKind {
    QuantumSend,
    BasisAnnouncement,
    DecoyCheckResult,
    ClassicalSend,
    Publication,
    Abort,
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EventKind::QuantumSend => "quantum-send",
            EventKind::BasisAnnouncement => "basis-announcement",
            EventKind::DecoyCheckResult => "decoy-check-result",
            EventKind::ClassicalSend => "classical-send",
            EventKind::Publication => "publication",
            EventKind::Abort => "abort",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Event {
    pub step: Step,
    pub kind: EventKind,
    pub sender: Party,
    pub receiver: Party,
    pub payload: String,
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "step={} event={} from={} to={} payload=\"{}\"",
            self.step, self.kind, self.sender, self.receiver, self.payload
        )
    }
}

/// Ordered log of every message exchanged in one run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Transcript {
    events: Vec<Event>,
}

impl Transcript {
    pub fn push(&mut self, step: Step, kind: EventKind, sender: Party, receiver: Party, payload: impl Into<String>) {
        self.events.push(Event { step, kind, sender, receiver, payload: payload.into() });
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn last_step(&self) -> Option<Step> {
        self.events.last().map(|e| e.step)
    }

    /// Steps never go backwards within a run.
    pub fn is_step_ordered(&self) -> bool {
        self.events.windows(2).all(|w| w[0].step <= w[1].step)
    }

    /// One event per line.
    pub fn to_log(&self) -> String {
        self.events.iter().map(|e| format!("{e}\n")).collect()
    }
}

/// Comma-joined list for payload summaries.
pub(crate) fn join<T: fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}
