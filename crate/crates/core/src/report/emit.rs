//! Writing reports and per-team tables to disk.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::{Analysis, HypothesisReport};
use crate::error::{Error, Result};
use crate::instructions::write_annotated_csv;
use crate::measures::write_features_csv;
use crate::stats::format_p;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format {other:?}; expected csv or json")),
        }
    }
}

fn cell(value: Option<f64>) -> String {
    value.map(|v| v.to_string()).unwrap_or_default()
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

fn finish(path: &Path, mut w: impl Write) -> Result<()> {
    w.flush().map_err(|e| Error::io(path, e))
}

/// Writes a report into `out_dir` and returns the files written.
///
/// CSV produces `<stem>.csv` (per-team rows), `<stem>_summary.csv` and
/// `<stem>_distributions.csv` (long format: team, series, value). JSON
/// produces a single `<stem>.json`.
pub fn emit(report: &HypothesisReport, format: Format, out_dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let dir = out_dir.as_ref();
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let stem = report.hypothesis.stem();
    match format {
        Format::Json => {
            let path = dir.join(format!("{stem}.json"));
            let mut w = create(&path)?;
            serde_json::to_writer_pretty(&mut w, report)?;
            writeln!(w).map_err(|e| Error::io(&path, e))?;
            finish(&path, w)?;
            Ok(vec![path])
        }
        Format::Csv => {
            let table = dir.join(format!("{stem}.csv"));
            let mut wtr = csv::Writer::from_writer(create(&table)?);
            let header: Vec<&str> = std::iter::once("team")
                .chain(report.columns.iter().map(String::as_str))
                .collect();
            wtr.write_record(&header)?;
            for row in &report.rows {
                let record: Vec<String> = std::iter::once(row.team.to_string())
                    .chain(row.values.iter().map(|v| cell(*v)))
                    .collect();
                wtr.write_record(&record)?;
            }
            finish(&table, wtr.into_inner().map_err(|e| Error::io(&table, e.into_error()))?)?;

            let summary = dir.join(format!("{stem}_summary.csv"));
            let mut wtr = csv::Writer::from_writer(create(&summary)?);
            wtr.write_record(["name", "test", "statistic", "p_value", "p_display", "n"])?;
            for s in &report.summary {
                wtr.write_record([
                    s.name.clone(),
                    s.test.clone(),
                    cell(s.statistic),
                    cell(s.p_value),
                    s.p_value.map(format_p).unwrap_or_default(),
                    s.n.to_string(),
                ])?;
            }
            finish(&summary, wtr.into_inner().map_err(|e| Error::io(&summary, e.into_error()))?)?;

            let dists = dir.join(format!("{stem}_distributions.csv"));
            let mut wtr = csv::Writer::from_writer(create(&dists)?);
            wtr.write_record(["team", "series", "value"])?;
            for d in &report.distributions {
                for v in &d.values {
                    wtr.write_record([d.team.to_string(), d.series.clone(), v.to_string()])?;
                }
            }
            finish(&dists, wtr.into_inner().map_err(|e| Error::io(&dists, e.into_error()))?)?;
            Ok(vec![table, summary, dists])
        }
    }
}

/// `team,expression,initiator,priming_time,establishment_time,priming_token_pos,establishment_token_pos,contains_referent`,
/// teams in id order.
pub fn write_routine_table<W: Write>(analysis: &Analysis, writer: W) -> Result<()> {
    let nodes = analysis.network.node_tokens();
    let mut teams: Vec<_> = analysis.teams.iter().collect();
    teams.sort_by_key(|t| t.team);
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record([
        "team",
        "expression",
        "initiator",
        "priming_time",
        "establishment_time",
        "priming_token_pos",
        "establishment_token_pos",
        "contains_referent",
    ])?;
    for t in teams {
        for r in &t.routines {
            wtr.write_record([
                t.team.to_string(),
                r.text(),
                r.initiator.to_string(),
                r.priming.time.to_string(),
                r.establishment.time.to_string(),
                r.priming.position.to_string(),
                r.establishment.position.to_string(),
                r.contains_referent(&nodes).to_string(),
            ])?;
        }
    }
    wtr.flush().map_err(|e| Error::io("<routines>", e))?;
    Ok(())
}

impl Analysis {
    /// Annotated action streams of every team, in team id order.
    pub fn write_annotated<W: Write>(&self, writer: W) -> Result<()> {
        let mut teams: Vec<_> = self.teams.iter().collect();
        teams.sort_by_key(|t| t.team);
        let rows: Vec<_> = teams
            .iter()
            .map(|t| (t.team, t.stream.as_slice(), t.utterances.as_slice(), &t.annotated))
            .collect();
        write_annotated_csv(&rows, &self.network, writer)
    }

    /// Task-level features of every team, in team id order.
    pub fn write_features<W: Write>(&self, writer: W) -> Result<()> {
        let mut successes = self.successes();
        successes.sort_by_key(|s| s.team);
        write_features_csv(&successes, writer)
    }
}
