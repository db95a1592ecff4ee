use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::transcript::{csv_reader, line_of, require_columns};
use super::{Speaker, TeamId};
use crate::error::{Error, Result};

/// Highest score on the pre- and post-tests (ten items).
pub const MAX_TEST_SCORE: u32 = 10;

/// Pre/post-test totals of one learner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TestScores {
    pub team: TeamId,
    pub speaker: Speaker,
    pub pre: u32,
    pub post: u32,
}

#[derive(Deserialize)]
struct Row {
    team: TeamId,
    speaker: String,
    pre: u32,
    post: u32,
}

pub fn read_scores<R: Read>(reader: R, path: &Path) -> Result<Vec<TestScores>> {
    let mut rdr = csv_reader(reader);
    let headers = rdr.headers()?.clone();
    require_columns(path, &headers, &["team", "speaker", "pre", "post"])?;

    let mut out: Vec<TestScores> = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            Error::parse(path, line, e.to_string())
        })?;
        let line = line_of(&record);
        let row: Row = record
            .deserialize(Some(&headers))
            .map_err(|e| Error::parse(path, line, e.to_string()))?;
        let speaker: Speaker = row.speaker.parse().map_err(|e: String| Error::parse(path, line, e))?;
        if !speaker.is_human() {
            return Err(Error::parse(path, line, "test scores belong to A or B"));
        }
        if row.pre > MAX_TEST_SCORE || row.post > MAX_TEST_SCORE {
            return Err(Error::parse(
                path,
                line,
                format!("scores must lie in 0..={MAX_TEST_SCORE}"),
            ));
        }
        if out.iter().any(|s| s.team == row.team && s.speaker == speaker) {
            return Err(Error::parse(path, line, "duplicate scores for this learner"));
        }
        out.push(TestScores {
            team: row.team,
            speaker,
            pre: row.pre,
            post: row.post,
        });
    }
    out.sort_by_key(|s| (s.team, s.speaker));
    Ok(out)
}

pub fn load_scores(path: impl AsRef<Path>) -> Result<Vec<TestScores>> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_scores(file, path)
}

pub fn write_scores<W: Write>(scores: &[TestScores], writer: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record(["team", "speaker", "pre", "post"])?;
    for s in scores {
        wtr.write_record([
            s.team.to_string(),
            s.speaker.to_string(),
            s.pre.to_string(),
            s.post.to_string(),
        ])?;
    }
    wtr.flush().map_err(|e| Error::io("<scores>", e))?;
    Ok(())
}
