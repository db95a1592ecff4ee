use std::fmt;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::transcript::{csv_reader, line_of, require_columns};
use super::{Edge, Network, Speaker, TeamId};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EditKind {
    Add,
    Remove,
}

impl fmt::Display for EditKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EditKind::Add => "Add",
            EditKind::Remove => "Remove",
        })
    }
}

/// Addition or deletion of an edge in the shared solution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EditEvent {
    pub team: TeamId,
    pub time: f64,
    pub kind: EditKind,
    pub edge: Edge,
    /// Learner who performed the edit, when the log records it.
    pub actor: Option<Speaker>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubmitEvent {
    pub team: TeamId,
    pub time: f64,
    pub cost: u64,
}

/// Everything read from an event log, sorted by team then time.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EventLog {
    pub edits: Vec<EditEvent>,
    pub submits: Vec<SubmitEvent>,
    /// Experimenter stop records (`end` rows), one time per team at most.
    pub stops: Vec<(TeamId, f64)>,
}

impl EventLog {
    pub fn for_team(&self, team: TeamId) -> EventLog {
        EventLog {
            edits: self.edits.iter().filter(|e| e.team == team).cloned().collect(),
            submits: self.submits.iter().filter(|s| s.team == team).cloned().collect(),
            stops: self.stops.iter().filter(|s| s.0 == team).copied().collect(),
        }
    }

    /// Time of the team's last logged event, which closes the activity.
    pub fn last_time(&self, team: TeamId) -> Option<f64> {
        let edits = self.edits.iter().filter(|e| e.team == team).map(|e| e.time);
        let submits = self.submits.iter().filter(|s| s.team == team).map(|s| s.time);
        let stops = self.stops.iter().filter(|s| s.0 == team).map(|s| s.1);
        edits.chain(submits).chain(stops).reduce(f64::max)
    }
}

#[derive(Debug, Deserialize)]
struct Row {
    team: TeamId,
    time_sec: f64,
    event: String,
    #[serde(default)]
    u: String,
    #[serde(default)]
    v: String,
    #[serde(default)]
    cost: Option<u64>,
    #[serde(default)]
    subject: String,
}

#[derive(Serialize)]
struct OutRow<'a> {
    team: TeamId,
    time_sec: f64,
    event: &'a str,
    u: String,
    v: String,
    cost: Option<u64>,
    subject: &'a str,
}

/// Reads an event log CSV (`team,time_sec,event,u,v,cost`, optional
/// `subject`). Node references may be names or numeric ids.
pub fn read_event_log<R: Read>(reader: R, path: &Path, network: &Network) -> Result<EventLog> {
    let optimal = network.optimal_cost()?;
    let mut rdr = csv_reader(reader);
    let headers = rdr.headers()?.clone();
    require_columns(path, &headers, &["team", "time_sec", "event", "u", "v", "cost"])?;

    let mut log = EventLog::default();
    for record in rdr.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            Error::parse(path, line, e.to_string())
        })?;
        let line = line_of(&record);
        let row: Row = record
            .deserialize(Some(&headers))
            .map_err(|e| Error::parse(path, line, e.to_string()))?;
        if !row.time_sec.is_finite() || row.time_sec < 0.0 {
            return Err(Error::parse(path, line, "time_sec must be finite and non-negative"));
        }
        let actor = match row.subject.as_str() {
            "" => None,
            s => {
                let who: Speaker = s.parse().map_err(|e: String| Error::parse(path, line, e))?;
                if !who.is_human() {
                    return Err(Error::parse(path, line, "edits are made by A or B"));
                }
                Some(who)
            }
        };

        match row.event.to_lowercase().as_str() {
            kind @ ("add" | "remove") => {
                let u = network
                    .resolve(&row.u)
                    .map_err(|e| Error::parse(path, line, e.to_string()))?;
                let v = network
                    .resolve(&row.v)
                    .map_err(|e| Error::parse(path, line, e.to_string()))?;
                let edge = Edge::new(u, v);
                if !network.contains_edge(edge) {
                    let err = Error::NotAnEdge(row.u.clone(), row.v.clone());
                    return Err(Error::parse(path, line, err.to_string()));
                }
                log.edits.push(EditEvent {
                    team: row.team,
                    time: row.time_sec,
                    kind: if kind == "add" { EditKind::Add } else { EditKind::Remove },
                    edge,
                    actor,
                });
            }
            "submit" => {
                let cost = row
                    .cost
                    .ok_or_else(|| Error::parse(path, line, "submit without cost"))?;
                if cost < optimal {
                    return Err(Error::parse(
                        path,
                        line,
                        format!("submitted cost {cost} is below the optimal cost {optimal}"),
                    ));
                }
                log.submits.push(SubmitEvent {
                    team: row.team,
                    time: row.time_sec,
                    cost,
                });
            }
            "end" => log.stops.push((row.team, row.time_sec)),
            other => {
                return Err(Error::parse(path, line, format!("unknown event {other:?}")));
            }
        }
    }

    log.edits
        .sort_by(|a, b| a.team.cmp(&b.team).then(a.time.total_cmp(&b.time)));
    log.submits
        .sort_by(|a, b| a.team.cmp(&b.team).then(a.time.total_cmp(&b.time)));
    log.stops
        .sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
    Ok(log)
}

pub fn load_event_log(path: impl AsRef<Path>, network: &Network) -> Result<EventLog> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_event_log(file, path, network)
}

/// Writes the log back out with node names; rows ordered by team and time.
pub fn write_event_log<W: Write>(log: &EventLog, network: &Network, writer: W) -> Result<()> {
    let name = |id| network.node(id).map(|n| n.name.clone()).unwrap_or_default();
    let mut rows: Vec<(TeamId, f64, OutRow)> = Vec::new();
    for e in &log.edits {
        rows.push((
            e.team,
            e.time,
            OutRow {
                team: e.team,
                time_sec: e.time,
                event: match e.kind {
                    EditKind::Add => "add",
                    EditKind::Remove => "remove",
                },
                u: name(e.edge.u),
                v: name(e.edge.v),
                cost: None,
                subject: e.actor.map_or("", Speaker::as_str),
            },
        ));
    }
    for s in &log.submits {
        rows.push((
            s.team,
            s.time,
            OutRow {
                team: s.team,
                time_sec: s.time,
                event: "submit",
                u: String::new(),
                v: String::new(),
                cost: Some(s.cost),
                subject: "",
            },
        ));
    }
    for &(team, time) in &log.stops {
        rows.push((
            team,
            time,
            OutRow {
                team,
                time_sec: time,
                event: "end",
                u: String::new(),
                v: String::new(),
                cost: None,
                subject: "",
            },
        ));
    }
    // Stable: edits precede submits precede stops at equal times.
    rows.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));

    let mut wtr = csv::Writer::from_writer(writer);
    for (_, _, row) in rows {
        wtr.serialize(row)?;
    }
    wtr.flush().map_err(|e| Error::io("<events>", e))?;
    Ok(())
}
