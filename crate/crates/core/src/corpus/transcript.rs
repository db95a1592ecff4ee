use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{tokenize, Speaker, TeamId};
use crate::error::{Error, Result};

/// One inter-pausal unit of a single speaker.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Utterance {
    pub team: TeamId,
    pub speaker: Speaker,
    pub start: f64,
    pub end: f64,
    pub text: String,
    pub tokens: Vec<String>,
    /// Position of this utterance's first token in the team's dialogue.
    pub offset: usize,
}

impl Utterance {
    /// Global positions covered by this utterance's tokens.
    pub fn positions(&self) -> std::ops::Range<usize> {
        self.offset..self.offset + self.tokens.len()
    }
}

#[derive(Debug, Deserialize)]
struct Row {
    team: TeamId,
    speaker: String,
    start_sec: f64,
    end_sec: f64,
    utterance: String,
}

#[derive(Serialize)]
struct OutRow<'a> {
    team: TeamId,
    speaker: &'a str,
    start_sec: f64,
    end_sec: f64,
    utterance: &'a str,
}

pub(crate) fn csv_reader<R: Read>(reader: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader)
}

pub(crate) fn require_columns(
    path: &Path,
    headers: &csv::StringRecord,
    columns: &[&str],
) -> Result<()> {
    for col in columns {
        if !headers.iter().any(|h| h == *col) {
            return Err(Error::parse(path, 1, format!("missing column {col:?}")));
        }
    }
    Ok(())
}

pub(crate) fn line_of(record: &csv::StringRecord) -> u64 {
    record.position().map_or(0, |p| p.line())
}

/// Reads a transcript CSV (`team,speaker,start_sec,end_sec,utterance`).
///
/// Utterances come back grouped by team and sorted by start time within a
/// team (stable for equal starts); token offsets restart at 0 for each team.
pub fn read_transcript<R: Read>(reader: R, path: &Path) -> Result<Vec<Utterance>> {
    let mut rdr = csv_reader(reader);
    let headers = rdr.headers()?.clone();
    require_columns(path, &headers, &["team", "speaker", "start_sec", "end_sec", "utterance"])?;

    let mut utterances = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            Error::parse(path, line, e.to_string())
        })?;
        let line = line_of(&record);
        let row: Row = record
            .deserialize(Some(&headers))
            .map_err(|e| Error::parse(path, line, e.to_string()))?;
        let speaker: Speaker = row
            .speaker
            .parse()
            .map_err(|e: String| Error::parse(path, line, e))?;
        if !row.start_sec.is_finite() || !row.end_sec.is_finite() || row.start_sec < 0.0 {
            return Err(Error::parse(path, line, "times must be finite and non-negative"));
        }
        if row.start_sec > row.end_sec {
            return Err(Error::parse(path, line, "start_sec is after end_sec"));
        }
        utterances.push(Utterance {
            team: row.team,
            speaker,
            start: row.start_sec,
            end: row.end_sec,
            tokens: tokenize(&row.utterance),
            text: row.utterance,
            offset: 0,
        });
    }

    utterances.sort_by(|a, b| a.team.cmp(&b.team).then(a.start.total_cmp(&b.start)));
    assign_offsets(&mut utterances);
    Ok(utterances)
}

pub fn load_transcript(path: impl AsRef<Path>) -> Result<Vec<Utterance>> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_transcript(file, path)
}

pub fn write_transcript<W: Write>(utterances: &[Utterance], writer: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    for u in utterances {
        wtr.serialize(OutRow {
            team: u.team,
            speaker: u.speaker.as_str(),
            start_sec: u.start,
            end_sec: u.end,
            utterance: &u.text,
        })?;
    }
    wtr.flush().map_err(|e| Error::io("<transcript>", e))?;
    Ok(())
}

fn assign_offsets(utterances: &mut [Utterance]) {
    let mut team = None;
    let mut next = 0;
    for u in utterances {
        if team != Some(u.team) {
            team = Some(u.team);
            next = 0;
        }
        u.offset = next;
        next += u.tokens.len();
    }
}
