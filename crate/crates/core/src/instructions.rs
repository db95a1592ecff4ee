//! Rule-based instruction recognition and the instruction-to-action matcher.
//!
//! Utterances are scanned for node names and edit verbs; consecutive
//! entities are folded into (possibly partial) `Add`/`Remove` instructions.
//! Replaying the action stream, each edit is then labelled a match, a
//! mismatch or a nonmatch against the other learner's pending instructions.

use std::collections::HashSet;
use std::fmt;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::corpus::{
    ActionEvent, ActionObject, Edge, EditKind, Network, Speaker, TeamId, Utterance, Verb,
};
use crate::error::{Error, Result};

pub const ADD_VERBS: [&str; 6] = ["add", "build", "connect", "do", "go", "put"];
pub const REMOVE_VERBS: [&str; 6] = ["away", "cut", "delete", "erase", "remove", "rub"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EntityLabel {
    Node,
    Add,
    Remove,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entity {
    pub token: String,
    pub label: EntityLabel,
}

/// Gazetteer of node names and edit verbs.
#[derive(Debug, Clone)]
pub struct Lexicon {
    nodes: HashSet<String>,
}

impl Lexicon {
    pub fn new<I, S>(node_tokens: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        Lexicon {
            nodes: node_tokens
                .into_iter()
                .map(|s| s.as_ref().to_lowercase())
                .collect(),
        }
    }

    pub fn from_network(network: &Network) -> Self {
        Lexicon {
            nodes: network.node_tokens(),
        }
    }

    /// Node names win over verbs, then add verbs over remove verbs.
    pub fn label(&self, token: &str) -> Option<EntityLabel> {
        if self.nodes.contains(token) {
            Some(EntityLabel::Node)
        } else if ADD_VERBS.contains(&token) {
            Some(EntityLabel::Add)
        } else if REMOVE_VERBS.contains(&token) {
            Some(EntityLabel::Remove)
        } else {
            None
        }
    }
}

pub fn recognise_entities<S: AsRef<str>>(tokens: &[S], lexicon: &Lexicon) -> Vec<Entity> {
    tokens
        .iter()
        .filter_map(|t| {
            let t = t.as_ref();
            lexicon.label(t).map(|label| Entity {
                token: t.to_string(),
                label,
            })
        })
        .collect()
}

/// An inferred edit intention. `v` is `None` for partial instructions that
/// name only one node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instruction {
    pub verb: EditKind,
    pub u: String,
    pub v: Option<String>,
    /// Learner who gave the instruction; unset straight out of recognition.
    pub agent: Option<Speaker>,
    /// Stream index of the utterance the instruction came from.
    pub source: Option<usize>,
}

fn capitalised(token: &str) -> String {
    let mut chars = token.chars();
    match chars.next() {
        Some(first) => first.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.v.as_deref().map_or_else(|| "?".to_string(), capitalised);
        write!(f, "{}({},{})", self.verb, capitalised(&self.u), v)
    }
}

impl Instruction {
    /// `Instruct_A(Add(Gallen,?))`
    pub fn annotation(&self) -> String {
        match self.agent {
            Some(agent) => format!("Instruct_{agent}({self})"),
            None => format!("Instruct({self})"),
        }
    }
}

#[derive(Default)]
struct Draft {
    verb: Option<EditKind>,
    u: Option<String>,
    v: Option<String>,
}

fn default_verb(emitted: &[Instruction]) -> EditKind {
    emitted.last().map_or(EditKind::Add, |i| i.verb)
}

/// Infers the instructions in one tokenised utterance.
///
/// A verb entity closes a draft that already has a verb and a first node
/// (emitting it as a partial instruction) and starts a new draft with that
/// verb. A node fills the first slot, or the second if it names a different
/// node, which completes and emits the instruction. A draft still holding a
/// first node at the end of the utterance is emitted as partial. Missing
/// verbs default to the previous instruction's verb, or `Add`.
pub fn recognise_instructions<S: AsRef<str>>(tokens: &[S], lexicon: &Lexicon) -> Vec<Instruction> {
    let mut emitted: Vec<Instruction> = Vec::new();
    let mut draft = Draft::default();

    let emit = |draft: Draft, emitted: &mut Vec<Instruction>| {
        let verb = draft.verb.unwrap_or_else(|| default_verb(emitted));
        emitted.push(Instruction {
            verb,
            u: draft.u.expect("emitted drafts hold a node"),
            v: draft.v,
            agent: None,
            source: None,
        });
    };

    for entity in recognise_entities(tokens, lexicon) {
        match entity.label {
            EntityLabel::Add | EntityLabel::Remove => {
                let verb = if entity.label == EntityLabel::Add {
                    EditKind::Add
                } else {
                    EditKind::Remove
                };
                if draft.verb.is_some() {
                    if draft.u.is_some() {
                        emit(std::mem::take(&mut draft), &mut emitted);
                    }
                    draft.u = None;
                    draft.v = None;
                }
                draft.verb = Some(verb);
            }
            EntityLabel::Node => {
                if draft.u.is_none() {
                    draft.u = Some(entity.token);
                } else if draft.v.is_none() && draft.u.as_deref() != Some(entity.token.as_str()) {
                    draft.v = Some(entity.token);
                    emit(std::mem::take(&mut draft), &mut emitted);
                }
            }
        }
    }
    if draft.u.is_some() {
        emit(draft, &mut emitted);
    }
    emitted
}

/// Whether an edit carries out an instruction. Partial instructions match
/// any edit touching their node; full ones need both nodes.
pub fn check_match(instruction: &Instruction, kind: EditKind, endpoints: (&str, &str)) -> bool {
    if instruction.verb != kind {
        return false;
    }
    let touches = |node: &str| node == endpoints.0 || node == endpoints.1;
    match &instruction.v {
        None => touches(&instruction.u),
        Some(v) => touches(&instruction.u) && touches(v),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    Match,
    Mismatch,
    Nonmatch,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Match => "Match",
            Verdict::Mismatch => "Mismatch",
            Verdict::Nonmatch => "Nonmatch",
        })
    }
}

/// Verdict for one edit action.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchRecord {
    pub verdict: Verdict,
    pub actor: Speaker,
    /// Stream index of the edit.
    pub action: usize,
    pub kind: EditKind,
    pub edge: Edge,
    /// Matched or mismatched instruction; `None` for nonmatches.
    pub instruction: Option<Instruction>,
    pub time: f64,
}

impl fmt::Display for MatchRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.instruction {
            Some(i) => write!(f, "{}_{}({})", self.verdict, self.actor, i.annotation()),
            None => write!(f, "{}_{}(Do_{}({}))", self.verdict, self.actor, self.actor, self.kind),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MatcherConfig {
    /// Empty the whole pending list after every match or mismatch, instead
    /// of dropping only the instructions the edit satisfied.
    pub clear_on_verdict: bool,
}

/// Per-row output of the matcher, parallel to the action stream.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Annotation {
    /// Instructions recognised in this row's utterance.
    pub instructions: Vec<Instruction>,
    /// Pending list after the row was processed.
    pub pending: Vec<Instruction>,
    pub record: Option<MatchRecord>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Annotated {
    pub rows: Vec<Annotation>,
    pub records: Vec<MatchRecord>,
}

/// Replays a team's action stream, keeping a list of pending instructions.
///
/// The list empties whenever the turn or attempt changes. Speech appends
/// its recognised instructions, tagged with the speaker. An edit by one
/// learner is judged against the other learner's pending instructions: no
/// candidates gives a nonmatch; otherwise the last candidate it satisfies is
/// a match, failing which the last candidate is a mismatch. After a match or
/// mismatch every pending instruction the edit satisfies is dropped.
pub fn match_instructions_to_actions(
    stream: &[ActionEvent],
    utterances: &[Utterance],
    network: &Network,
    config: &MatcherConfig,
) -> Result<Annotated> {
    let lexicon = Lexicon::from_network(network);
    let mut pending: Vec<Instruction> = Vec::new();
    let mut period = (1u32, 1u32);
    let mut out = Annotated::default();

    for (idx, action) in stream.iter().enumerate() {
        if (action.turn, action.attempt) != period {
            pending.clear();
            period = (action.turn, action.attempt);
        }
        let mut row = Annotation::default();

        match (action.verb, action.object) {
            (Verb::Says, ActionObject::Utterance(u)) => {
                let utterance = utterances.get(u).ok_or_else(|| {
                    Error::Invalid(format!("stream refers to missing utterance {u}"))
                })?;
                if let Some(agent) = action.subject.filter(|s| s.is_human()) {
                    row.instructions = recognise_instructions(&utterance.tokens, &lexicon)
                        .into_iter()
                        .map(|mut i| {
                            i.agent = Some(agent);
                            i.source = Some(idx);
                            i
                        })
                        .collect();
                    pending.extend(row.instructions.iter().cloned());
                }
            }
            (Verb::Adds | Verb::Removes, ActionObject::Edge(edge)) => {
                let actor = action
                    .subject
                    .filter(|s| s.is_human())
                    .ok_or_else(|| Error::Invalid(format!("edit at row {idx} has no actor")))?;
                let kind = action.verb.edit_kind().expect("edit verb");
                let (u, v) = endpoint_tokens(network, edge)?;
                let satisfies = |i: &Instruction| check_match(i, kind, (&u, &v));

                let candidates: Vec<&Instruction> =
                    pending.iter().filter(|i| i.agent != Some(actor)).collect();
                let (verdict, instruction) = if candidates.is_empty() {
                    (Verdict::Nonmatch, None)
                } else if let Some(hit) = candidates.iter().rev().find(|i| satisfies(i)) {
                    (Verdict::Match, Some((*hit).clone()))
                } else {
                    let last = candidates.last().expect("non-empty");
                    (Verdict::Mismatch, Some((*last).clone()))
                };
                if verdict != Verdict::Nonmatch {
                    if config.clear_on_verdict {
                        pending.clear();
                    } else {
                        pending.retain(|i| !satisfies(i));
                    }
                }
                let record = MatchRecord {
                    verdict,
                    actor,
                    action: idx,
                    kind,
                    edge,
                    instruction,
                    time: action.time,
                };
                out.records.push(record.clone());
                row.record = Some(record);
            }
            _ => {}
        }
        row.pending = pending.clone();
        out.rows.push(row);
    }
    Ok(out)
}

fn endpoint_tokens(network: &Network, edge: Edge) -> Result<(String, String)> {
    let token = |id| {
        network
            .token(id)
            .ok_or_else(|| Error::UnknownNode(id.to_string()))
    };
    Ok((token(edge.u)?, token(edge.v)?))
}

/// Action times of the records with the given verdict.
pub fn match_mismatch_times(records: &[MatchRecord], verdict: Verdict) -> Vec<f64> {
    records
        .iter()
        .filter(|r| r.verdict == verdict)
        .map(|r| r.time)
        .collect()
}

/// Number of distinct source utterances among the instructions behind
/// records with the given verdict.
pub fn utterance_grouped_count(records: &[MatchRecord], verdict: Verdict) -> usize {
    records
        .iter()
        .filter(|r| r.verdict == verdict)
        .filter_map(|r| r.instruction.as_ref().and_then(|i| i.source))
        .collect::<HashSet<_>>()
        .len()
}

/// Matches per mismatch; `None` without mismatches.
pub fn match_mismatch_ratio(records: &[MatchRecord]) -> Option<f64> {
    let count = |v| records.iter().filter(|r| r.verdict == v).count();
    let mismatches = count(Verdict::Mismatch);
    (mismatches > 0).then(|| count(Verdict::Match) as f64 / mismatches as f64)
}

fn join_instructions(list: &[Instruction]) -> String {
    list.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

/// Writes the annotated corpus of one or more teams as CSV:
/// `team,subject,verb,object,time,turn,attempt,instructions,verdict,matched_instruction,matched_agent`.
pub fn write_annotated_csv<W: Write>(
    teams: &[(TeamId, &[ActionEvent], &[Utterance], &Annotated)],
    network: &Network,
    writer: W,
) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record([
        "team",
        "subject",
        "verb",
        "object",
        "time",
        "turn",
        "attempt",
        "instructions",
        "verdict",
        "matched_instruction",
        "matched_agent",
    ])?;
    for &(team, stream, utterances, annotated) in teams {
        for (action, row) in stream.iter().zip(&annotated.rows) {
            let object = match action.object {
                ActionObject::Utterance(i) => utterances[i].text.clone(),
                ActionObject::Edge(e) => network.edge_name(e),
                ActionObject::Submission { cost } => cost.to_string(),
            };
            let (verdict, matched, agent) = match &row.record {
                Some(r) => (
                    r.verdict.to_string(),
                    r.instruction.as_ref().map(ToString::to_string).unwrap_or_default(),
                    r.instruction
                        .as_ref()
                        .and_then(|i| i.agent)
                        .map(|a| a.to_string())
                        .unwrap_or_default(),
                ),
                None => (String::new(), String::new(), String::new()),
            };
            let subject = match (action.subject, action.verb) {
                (Some(s), _) => s.to_string(),
                (None, Verb::Says) => Speaker::Robot.to_string(),
                (None, _) => String::new(),
            };
            wtr.write_record([
                team.to_string(),
                subject,
                action.verb.as_str().to_string(),
                object,
                action.time.to_string(),
                action.turn.to_string(),
                action.attempt.to_string(),
                join_instructions(&row.instructions),
                verdict,
                matched,
                agent,
            ])?;
        }
    }
    wtr.flush().map_err(|e| Error::io("<annotated>", e))?;
    Ok(())
}
