//! Corpus-level pipeline: loading a corpus directory, running every team
//! through the measures, and assembling the hypothesis tables.

mod emit;
mod hypotheses;

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::{
    build_action_stream_with, load_event_log, load_scores, load_transcript, write_event_log,
    write_scores, write_transcript, ActionEvent, EventLog, Network, Speaker, StreamConfig,
    TeamId, TestScores, Utterance, MAX_TEST_SCORE,
};
use crate::error::{Error, Result};
use crate::instructions::{match_instructions_to_actions, Annotated, MatchRecord, MatcherConfig, Verdict};
use crate::measures::{relative_learning_gain, submission_error, team_error, team_learning, TeamSuccess};
use crate::routines::{extract_routines, filter_task_routines, token_events, Routine, TokenEvents, FILLERS, INFORMATION_MARKER};

pub use emit::{emit, write_routine_table, Format};
pub use hypotheses::{run, run_h11, run_h12, run_h21, run_h22};

pub const TRANSCRIPTS_FILE: &str = "transcripts.csv";
pub const EVENTS_FILE: &str = "events.csv";
pub const NETWORK_FILE: &str = "network.json";
pub const TESTS_FILE: &str = "tests.csv";

/// Everything recorded for one team.
#[derive(Debug, Clone, PartialEq)]
pub struct TeamCorpus {
    pub team: TeamId,
    pub utterances: Vec<Utterance>,
    pub log: EventLog,
    pub scores: Vec<TestScores>,
}

impl TeamCorpus {
    /// Seconds until the last logged event, or until the end of the last
    /// utterance when nothing was logged.
    pub fn duration(&self) -> f64 {
        self.log.last_time(self.team).unwrap_or_else(|| {
            self.utterances.iter().map(|u| u.end).fold(0.0, f64::max)
        })
    }

    fn score(&self, speaker: Speaker) -> Result<&TestScores> {
        self.scores
            .iter()
            .find(|s| s.speaker == speaker)
            .ok_or_else(|| Error::Invalid(format!("team {} has no test scores for {speaker}", self.team)))
    }
}

/// A validated corpus: the shared network and per-team recordings, ordered
/// by team id.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub network: Network,
    pub teams: Vec<TeamCorpus>,
}

impl Dataset {
    pub fn new(
        network: Network,
        utterances: Vec<Utterance>,
        log: EventLog,
        scores: Vec<TestScores>,
    ) -> Result<Self> {
        let mut by_team: BTreeMap<TeamId, Vec<Utterance>> = BTreeMap::new();
        for u in utterances {
            by_team.entry(u.team).or_default().push(u);
        }
        let known: BTreeSet<TeamId> = by_team.keys().copied().collect();
        let logged = log
            .edits
            .iter()
            .map(|e| e.team)
            .chain(log.submits.iter().map(|s| s.team))
            .chain(log.stops.iter().map(|s| s.0))
            .chain(scores.iter().map(|s| s.team));
        for team in logged {
            if !known.contains(&team) {
                return Err(Error::Invalid(format!("team {team} has no transcript")));
            }
        }
        let teams = by_team
            .into_iter()
            .map(|(team, utterances)| {
                let corpus = TeamCorpus {
                    team,
                    utterances,
                    log: log.for_team(team),
                    scores: scores.iter().filter(|s| s.team == team).cloned().collect(),
                };
                corpus.score(Speaker::A)?;
                corpus.score(Speaker::B)?;
                Ok(corpus)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Dataset { network, teams })
    }

    pub fn load_files(
        transcripts: impl AsRef<Path>,
        events: impl AsRef<Path>,
        network: impl AsRef<Path>,
        tests: impl AsRef<Path>,
    ) -> Result<Self> {
        let network = Network::load(network)?;
        let utterances = load_transcript(transcripts)?;
        let log = load_event_log(events, &network)?;
        let scores = load_scores(tests)?;
        Dataset::new(network, utterances, log, scores)
    }

    /// Loads `transcripts.csv`, `events.csv`, `network.json` and `tests.csv`
    /// from a corpus directory.
    pub fn load(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref();
        Dataset::load_files(
            dir.join(TRANSCRIPTS_FILE),
            dir.join(EVENTS_FILE),
            dir.join(NETWORK_FILE),
            dir.join(TESTS_FILE),
        )
    }

    /// Writes the corpus in the layout [`Dataset::load`] reads.
    pub fn write(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let create = |name: &str| {
            let path = dir.join(name);
            std::fs::File::create(&path).map_err(|e| Error::io(path, e))
        };
        let utterances: Vec<Utterance> =
            self.teams.iter().flat_map(|t| t.utterances.iter().cloned()).collect();
        write_transcript(&utterances, create(TRANSCRIPTS_FILE)?)?;

        let mut log = EventLog::default();
        let mut scores = Vec::new();
        for t in &self.teams {
            log.edits.extend(t.log.edits.iter().cloned());
            log.submits.extend(t.log.submits.iter().cloned());
            log.stops.extend(t.log.stops.iter().copied());
            scores.extend(t.scores.iter().cloned());
        }
        write_event_log(&log, &self.network, create(EVENTS_FILE)?)?;
        write_scores(&scores, create(TESTS_FILE)?)?;
        let path = dir.join(NETWORK_FILE);
        std::fs::write(&path, self.network.to_json()? + "\n").map_err(|e| Error::io(path, e))
    }

    pub fn team(&self, team: TeamId) -> Option<&TeamCorpus> {
        self.teams.iter().find(|t| t.team == team)
    }
}

/// Knobs of the whole pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisConfig {
    /// Keep only routines that mention a node.
    pub task_only: bool,
    pub matcher: MatcherConfig,
    pub stream: StreamConfig,
    /// Seconds; defaults to the quickest team's duration.
    pub common_window: Option<f64>,
    /// Count every "oh" token instead of every utterance containing one.
    pub oh_per_token: bool,
    /// Count (mis)matches once per instructing utterance instead of once
    /// per edit.
    pub group_by_utterance: bool,
    pub max_score: f64,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            task_only: true,
            matcher: MatcherConfig::default(),
            stream: StreamConfig::default(),
            common_window: None,
            oh_per_token: false,
            group_by_utterance: true,
            max_score: f64::from(MAX_TEST_SCORE),
        }
    }
}

/// Per-team intermediate results shared by the hypothesis tables.
#[derive(Debug, Clone)]
pub struct TeamAnalysis {
    pub team: TeamId,
    pub success: TeamSuccess,
    pub utterances: Vec<Utterance>,
    pub routines: Vec<Routine>,
    pub stream: Vec<ActionEvent>,
    pub annotated: Annotated,
    pub fillers: TokenEvents,
    /// End times of the utterances holding "oh", once per utterance or per
    /// token depending on the configuration.
    pub oh_times: Vec<f64>,
    pub oh_tokens: usize,
    pub oh_utterances: usize,
    group_by_utterance: bool,
}

impl TeamAnalysis {
    /// Times of the (mis)matches of a verdict. Grouped by utterance, each
    /// instructing utterance contributes the time of its first follow-up.
    pub fn verdict_times(&self, verdict: Verdict) -> Vec<f64> {
        let records = self.annotated.records.iter().filter(|r| r.verdict == verdict);
        if !self.group_by_utterance || verdict == Verdict::Nonmatch {
            return records.map(|r| r.time).collect();
        }
        let mut seen = HashSet::new();
        records
            .filter(|r| seen.insert(source_of(r)))
            .map(|r| r.time)
            .collect()
    }

    pub fn verdict_count(&self, verdict: Verdict) -> usize {
        self.verdict_times(verdict).len()
    }

    pub fn duration(&self) -> f64 {
        self.success.duration
    }
}

fn source_of(record: &MatchRecord) -> Option<usize> {
    record.instruction.as_ref().and_then(|i| i.source)
}

/// All teams analysed, sorted by increasing error then duration.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub network: Network,
    pub config: AnalysisConfig,
    /// Common window in seconds.
    pub window: f64,
    pub teams: Vec<TeamAnalysis>,
}

impl Analysis {
    pub fn run(dataset: &Dataset, config: &AnalysisConfig) -> Result<Self> {
        let mut teams = dataset
            .teams
            .iter()
            .map(|t| analyse_team(t, &dataset.network, config))
            .collect::<Result<Vec<_>>>()?;
        teams.sort_by(|a, b| {
            a.success
                .error
                .total_cmp(&b.success.error)
                .then(a.success.duration.total_cmp(&b.success.duration))
                .then(a.team.cmp(&b.team))
        });
        let window = match config.common_window {
            Some(w) if w > 0.0 => w,
            Some(w) => return Err(Error::Invalid(format!("common window must be positive, got {w}"))),
            None => teams
                .iter()
                .map(|t| t.success.duration)
                .min_by(f64::total_cmp)
                .unwrap_or(0.0),
        };
        Ok(Analysis {
            network: dataset.network.clone(),
            config: config.clone(),
            window,
            teams,
        })
    }

    pub fn team(&self, team: TeamId) -> Option<&TeamAnalysis> {
        self.teams.iter().find(|t| t.team == team)
    }

    pub fn successes(&self) -> Vec<TeamSuccess> {
        self.teams.iter().map(|t| t.success.clone()).collect()
    }
}

pub fn analyse_team(corpus: &TeamCorpus, network: &Network, config: &AnalysisConfig) -> Result<TeamAnalysis> {
    let team = corpus.team;
    let duration = corpus.duration();
    if duration.is_nan() || duration <= 0.0 {
        return Err(Error::Invalid(format!("team {team} has a zero duration")));
    }
    let optimal = network.optimal_cost()? as f64;
    let errors = corpus
        .log
        .submits
        .iter()
        .map(|s| submission_error(s.cost as f64, optimal))
        .collect::<Result<Vec<_>>>()?;
    let error = team_error(&errors).map_err(|_| Error::Invalid(format!("team {team} has no submissions")))?;
    let gain = |speaker| -> Result<f64> {
        let s = corpus.score(speaker)?;
        relative_learning_gain(f64::from(s.pre), f64::from(s.post), config.max_score)
    };
    let (learn_a, learn_b) = (gain(Speaker::A)?, gain(Speaker::B)?);
    let n_edits = corpus.log.edits.len();
    let success = TeamSuccess {
        team,
        error,
        learn: team_learning(learn_a, learn_b),
        learn_a,
        learn_b,
        duration,
        n_submissions: errors.len(),
        n_turns: n_edits.div_ceil(2) as u32,
    };

    let all = extract_routines(&corpus.utterances);
    let routines = if config.task_only {
        filter_task_routines(&all, network)
    } else {
        all
    };
    let stream = build_action_stream_with(
        &corpus.utterances,
        &corpus.log.edits,
        &corpus.log.submits,
        &config.stream,
    )?;
    let annotated = match_instructions_to_actions(&stream, &corpus.utterances, network, &config.matcher)?;
    let fillers = token_events(&corpus.utterances, &routines, &FILLERS);

    let mut oh_times = Vec::new();
    let (mut oh_tokens, mut oh_utterances) = (0, 0);
    for u in corpus.utterances.iter().filter(|u| u.speaker.is_human()) {
        let n = u.tokens.iter().filter(|t| *t == INFORMATION_MARKER).count();
        if n == 0 {
            continue;
        }
        oh_tokens += n;
        oh_utterances += 1;
        let repeat = if config.oh_per_token { n } else { 1 };
        oh_times.extend(std::iter::repeat_n(u.end, repeat));
    }

    Ok(TeamAnalysis {
        team,
        success,
        utterances: corpus.utterances.clone(),
        routines,
        stream,
        annotated,
        fillers,
        oh_times,
        oh_tokens,
        oh_utterances,
        group_by_utterance: config.group_by_utterance,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Hypothesis {
    #[serde(rename = "h1.1")]
    H11,
    #[serde(rename = "h1.2")]
    H12,
    #[serde(rename = "h2.1")]
    H21,
    #[serde(rename = "h2.2")]
    H22,
}

impl Hypothesis {
    pub const ALL: [Hypothesis; 4] = [Hypothesis::H11, Hypothesis::H12, Hypothesis::H21, Hypothesis::H22];

    pub fn as_str(self) -> &'static str {
        match self {
            Hypothesis::H11 => "h1.1",
            Hypothesis::H12 => "h1.2",
            Hypothesis::H21 => "h2.1",
            Hypothesis::H22 => "h2.2",
        }
    }

    /// File stem used for emitted tables, e.g. `h1_1`.
    pub fn stem(self) -> String {
        self.as_str().replace('.', "_")
    }
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Hypothesis {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Hypothesis::ALL
            .into_iter()
            .find(|h| h.as_str().eq_ignore_ascii_case(s) || h.stem().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown hypothesis {s:?}; expected h1.1, h1.2, h2.1 or h2.2"))
    }
}

/// One team's row of a hypothesis table; `values` line up with the report's
/// columns and are `None` where a test could not be run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TeamRow {
    pub team: TeamId,
    pub values: Vec<Option<f64>>,
}

/// Raw values behind a boxplot: one series of one team.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Distribution {
    pub team: TeamId,
    pub series: String,
    pub values: Vec<f64>,
}

/// A corpus-level statistic, e.g. a correlation with error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryStat {
    pub name: String,
    pub test: String,
    pub statistic: Option<f64>,
    pub p_value: Option<f64>,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub hypothesis: Hypothesis,
    /// Column names after `team`.
    pub columns: Vec<String>,
    pub rows: Vec<TeamRow>,
    pub distributions: Vec<Distribution>,
    pub summary: Vec<SummaryStat>,
}

impl HypothesisReport {
    pub fn empty(hypothesis: Hypothesis, columns: &[&str]) -> Self {
        HypothesisReport {
            hypothesis,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            distributions: Vec::new(),
            summary: Vec::new(),
        }
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// A team's value in a named column.
    pub fn value(&self, team: TeamId, column: &str) -> Option<f64> {
        let idx = self.column(column)?;
        self.rows.iter().find(|r| r.team == team)?.values[idx]
    }

    pub fn summary(&self, name: &str) -> Option<&SummaryStat> {
        self.summary.iter().find(|s| s.name == name)
    }

    pub fn distribution(&self, team: TeamId, series: &str) -> Option<&[f64]> {
        self.distributions
            .iter()
            .find(|d| d.team == team && d.series == series)
            .map(|d| d.values.as_slice())
    }
}
