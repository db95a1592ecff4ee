//! Corpus ingestion: transcripts, event logs, the activity network and test
//! scores, plus the merged chronological action stream.

mod events;
mod network;
mod scores;
mod stream;
mod tokenize;
mod transcript;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use events::{load_event_log, read_event_log, write_event_log, EditEvent, EditKind, EventLog, SubmitEvent};
pub use network::{Edge, Network, Node, NodeId, WeightedEdge};
pub use scores::{load_scores, read_scores, write_scores, TestScores, MAX_TEST_SCORE};
pub use stream::{
    build_action_stream, build_action_stream_with, relative_time, ActionEvent, ActionObject,
    StreamConfig, Verb,
};
pub use tokenize::tokenize;
pub use transcript::{load_transcript, read_transcript, write_transcript, Utterance};

#[cfg(test)]
pub(crate) use network::fixtures;

pub type TeamId = u32;

/// Who produced an utterance or an edit.
///
/// Transcripts also contain the robot's speech (`I`); it is kept in the
/// corpus but never counts as one of the two interlocutors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Speaker {
    A,
    B,
    #[serde(rename = "I")]
    Robot,
}

impl Speaker {
    pub fn is_human(self) -> bool {
        !matches!(self, Speaker::Robot)
    }

    /// The other interlocutor; the robot has none.
    pub fn other(self) -> Option<Speaker> {
        match self {
            Speaker::A => Some(Speaker::B),
            Speaker::B => Some(Speaker::A),
            Speaker::Robot => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Speaker::A => "A",
            Speaker::B => "B",
            Speaker::Robot => "I",
        }
    }
}

impl fmt::Display for Speaker {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Speaker {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "A" | "a" => Ok(Speaker::A),
            "B" | "b" => Ok(Speaker::B),
            "I" | "i" => Ok(Speaker::Robot),
            other => Err(format!("speaker must be A or B (or I for the robot), got {other:?}")),
        }
    }
}
