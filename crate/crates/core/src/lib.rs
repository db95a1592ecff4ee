//! Automatic measures of verbal and behavioural alignment for situated,
//! task-oriented dialogue.
//!
//! The crate ingests transcripts and activity logs ([`corpus`]), mines shared
//! referring expressions ([`routines`]), recognises spoken instructions and
//! matches them to edit actions ([`instructions`]), computes task-success
//! measures ([`measures`]) and runs the nonparametric analyses ([`stats`],
//! [`report`]).

pub mod corpus;
pub mod error;
pub mod instructions;
pub mod measures;
pub mod report;
pub mod routines;
pub mod stats;

pub use corpus::{ActionEvent, Network, Speaker, TeamId, Utterance};
pub use error::{Error, Result};
pub use instructions::{Instruction, MatchRecord, Verdict};
pub use measures::TeamSuccess;
pub use report::{Analysis, AnalysisConfig, Dataset, Hypothesis, HypothesisReport};
pub use routines::Routine;
