//! Attack scenarios against the protocol and Monte Carlo estimation of how
//! often they are caught and what they reveal.

mod dishonest;
mod estimate;
mod eve;
mod report;
mod semihonest;

pub use dishonest::{attacker_candidates, DishonestParticipant};
pub use estimate::{estimate_detection_probability, trial_seed, AttackKind, AttackScenario};
pub use eve::{eve_intercept_resend, InterceptResend, Interception};
pub use report::AttackReport;
pub use semihonest::{semihonest_tp_analysis, TpKnowledge};

use thiserror::Error;

use crate::protocol::ProtocolError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AdversaryError {
    #[error("invalid attack scenario: {0}")]
    InvalidScenario(String),
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
}
