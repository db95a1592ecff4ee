use serde::{Deserialize, Serialize};

use super::{Edge, EditEvent, EditKind, Speaker, SubmitEvent, Utterance};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verb {
    Says,
    Adds,
    Removes,
    Submits,
}

impl Verb {
    pub fn as_str(self) -> &'static str {
        match self {
            Verb::Says => "says",
            Verb::Adds => "adds",
            Verb::Removes => "removes",
            Verb::Submits => "submits",
        }
    }

    pub fn edit_kind(self) -> Option<EditKind> {
        match self {
            Verb::Adds => Some(EditKind::Add),
            Verb::Removes => Some(EditKind::Remove),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ActionObject {
    /// Index into the team's utterance list.
    Utterance(usize),
    Edge(Edge),
    Submission { cost: u64 },
}

/// One row of the subject-verb-object-turn-attempt stream.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ActionEvent {
    /// `None` for robot speech and submissions.
    pub subject: Option<Speaker>,
    pub verb: Verb,
    pub object: ActionObject,
    pub time: f64,
    pub turn: u32,
    pub attempt: u32,
}

impl ActionEvent {
    pub fn is_edit(&self) -> bool {
        matches!(self.verb, Verb::Adds | Verb::Removes)
    }

    pub fn edge(&self) -> Option<Edge> {
        match self.object {
            ActionObject::Edge(e) => Some(e),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StreamConfig {
    /// Editor during odd turns when the log does not name the actor; the
    /// other learner edits during even turns.
    pub first_editor: Speaker,
}

impl Default for StreamConfig {
    fn default() -> Self {
        StreamConfig {
            first_editor: Speaker::A,
        }
    }
}

pub fn build_action_stream(
    utterances: &[Utterance],
    edits: &[EditEvent],
    submits: &[SubmitEvent],
) -> Result<Vec<ActionEvent>> {
    build_action_stream_with(utterances, edits, submits, &StreamConfig::default())
}

/// Merges one team's utterances, edits and submissions into a chronological
/// stream, stamping each entry with its turn and attempt.
///
/// A turn spans two edits and an attempt ends with each submission.
/// Utterances are placed at their start time. At equal times edits come
/// first, then submissions, then speech.
pub fn build_action_stream_with(
    utterances: &[Utterance],
    edits: &[EditEvent],
    submits: &[SubmitEvent],
    config: &StreamConfig,
) -> Result<Vec<ActionEvent>> {
    let team = utterances
        .first()
        .map(|u| u.team)
        .or_else(|| edits.first().map(|e| e.team))
        .or_else(|| submits.first().map(|s| s.team));
    let foreign = utterances.iter().map(|u| u.team)
        .chain(edits.iter().map(|e| e.team))
        .chain(submits.iter().map(|s| s.team))
        .any(|t| Some(t) != team);
    if foreign {
        return Err(Error::Invalid("action stream inputs span several teams".into()));
    }
    if !config.first_editor.is_human() {
        return Err(Error::Invalid("the first editor must be A or B".into()));
    }

    enum Entry<'a> {
        Edit(&'a EditEvent),
        Submit(&'a SubmitEvent),
        Says(usize, &'a Utterance),
    }
    let mut entries: Vec<(f64, u8, Entry)> = Vec::with_capacity(
        utterances.len() + edits.len() + submits.len(),
    );
    entries.extend(edits.iter().map(|e| (e.time, 0, Entry::Edit(e))));
    entries.extend(submits.iter().map(|s| (s.time, 1, Entry::Submit(s))));
    entries.extend(
        utterances
            .iter()
            .enumerate()
            .map(|(i, u)| (u.start, 2, Entry::Says(i, u))),
    );
    entries.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    let mut turn = 1u32;
    let mut attempt = 1u32;
    let mut edits_in_turn = 0u8;
    let mut stream = Vec::with_capacity(entries.len());
    for (time, _, entry) in entries {
        let event = match entry {
            Entry::Says(idx, u) => ActionEvent {
                subject: u.speaker.is_human().then_some(u.speaker),
                verb: Verb::Says,
                object: ActionObject::Utterance(idx),
                time,
                turn,
                attempt,
            },
            Entry::Edit(e) => {
                let actor = e.actor.unwrap_or_else(|| {
                    if turn % 2 == 1 {
                        config.first_editor
                    } else {
                        config.first_editor.other().expect("human editor")
                    }
                });
                let ev = ActionEvent {
                    subject: Some(actor),
                    verb: match e.kind {
                        EditKind::Add => Verb::Adds,
                        EditKind::Remove => Verb::Removes,
                    },
                    object: ActionObject::Edge(e.edge),
                    time,
                    turn,
                    attempt,
                };
                edits_in_turn += 1;
                if edits_in_turn == 2 {
                    edits_in_turn = 0;
                    turn += 1;
                }
                ev
            }
            Entry::Submit(s) => {
                let ev = ActionEvent {
                    subject: None,
                    verb: Verb::Submits,
                    object: ActionObject::Submission { cost: s.cost },
                    time,
                    turn,
                    attempt,
                };
                attempt += 1;
                ev
            }
        };
        stream.push(event);
    }
    Ok(stream)
}

/// Progress through the activity, in percent of the team's duration.
pub fn relative_time(time: f64, duration: f64) -> Result<f64> {
    if duration.is_nan() || duration <= 0.0 {
        return Err(Error::Invalid(format!("team duration must be positive, got {duration}")));
    }
    Ok(100.0 * time / duration)
}
