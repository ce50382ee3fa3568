//! The comparison protocol: TP and participant steps, decoy checking and
//! the modular comparison pipeline.

mod arith;
mod compare;
mod config;
mod error;
mod run;
mod sequence;
mod steps;
mod transcript;
mod types;

pub use arith::{mod_add, mod_sub, sign_function};
pub use compare::{tp_compare, ComparisonOutcome, RelationChain};
pub use config::ProtocolConfig;
pub use error::ProtocolError;
pub use run::{
    run_protocol, Abort, AbortReason, CheckRecord, CompletedRun, ForcedRandomness, Hop, Interposer, Link, RunOutput,
    RunResult,
};
pub use sequence::{insert_decoys, run_decoy_check, DecoratedSequence, DecoyCheck, DecoyObservation, DecoySlot};
pub use steps::{participant_encode, tp_measure_all, tp_prepare};
pub use transcript::{Event, EventKind, Party, Step, Transcript};
pub use types::{decrypt, participant_encrypt, EncryptedPrivacy, MeasurementRecord, PrivacyVector, RandomMask};
