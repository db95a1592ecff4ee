//! Routine expressions: token sequences shared by both interlocutors.
//!
//! A sequence is a routine when (i) both learners produce it and (ii) at
//! least one of its occurrences is not covered by an occurrence of a longer
//! routine at the same place in the text. The first occurrence primes the
//! routine; the first reuse by the other learner establishes it.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::corpus::{relative_time, Network, Speaker, Utterance};
use crate::error::{Error, Result};
use crate::stats::quantile;

/// Where a routine was primed or established.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Anchor {
    /// Index of the utterance in the slice given to [`extract_routines`].
    pub utterance: usize,
    /// Global position of the expression's first token.
    pub position: usize,
    /// End time of the utterance.
    pub time: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Occurrence {
    pub utterance: usize,
    pub position: usize,
    pub speaker: Speaker,
    /// Not covered by an occurrence of a longer routine.
    pub free: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Routine {
    pub expression: Vec<String>,
    pub initiator: Speaker,
    pub priming: Anchor,
    pub establishment: Anchor,
    pub occurrences: Vec<Occurrence>,
}

impl Routine {
    pub fn text(&self) -> String {
        self.expression.join(" ")
    }

    pub fn contains_referent(&self, node_tokens: &HashSet<String>) -> bool {
        self.expression.iter().any(|t| node_tokens.contains(t))
    }
}

#[derive(Debug, Clone, Copy)]
struct Occ {
    utt: u32,
    start: u32,
}

/// Shared n-grams of one length, with every occurrence.
type Level = Vec<(Vec<u32>, Vec<Occ>)>;

/// Finds every routine of a team's dialogue, sorted by establishment.
///
/// Only the two learners' utterances take part; robot speech is skipped but
/// keeps its index. Candidates grow one token at a time from sequences that
/// are already shared, since every sub-sequence of a shared sequence is
/// itself shared. Containment is then resolved from the longest routines
/// down.
pub fn extract_routines(utterances: &[Utterance]) -> Vec<Routine> {
    let mut vocab: HashMap<&str, u32> = HashMap::new();
    let seqs: Vec<Vec<u32>> = utterances
        .iter()
        .map(|u| {
            if !u.speaker.is_human() {
                return Vec::new();
            }
            u.tokens
                .iter()
                .map(|t| {
                    let next = vocab.len() as u32;
                    *vocab.entry(t.as_str()).or_insert(next)
                })
                .collect()
        })
        .collect();

    let shared = |occs: &[Occ]| {
        let mut seen_a = false;
        let mut seen_b = false;
        for o in occs {
            match utterances[o.utt as usize].speaker {
                Speaker::A => seen_a = true,
                Speaker::B => seen_b = true,
                Speaker::Robot => {}
            }
            if seen_a && seen_b {
                return true;
            }
        }
        false
    };

    let mut unigrams: HashMap<u32, Vec<Occ>> = HashMap::new();
    for (utt, seq) in seqs.iter().enumerate() {
        for (start, &tok) in seq.iter().enumerate() {
            unigrams.entry(tok).or_default().push(Occ {
                utt: utt as u32,
                start: start as u32,
            });
        }
    }
    let mut levels: Vec<Level> = vec![unigrams
        .into_iter()
        .filter(|(_, occs)| shared(occs))
        .map(|(tok, occs)| (vec![tok], occs))
        .collect()];

    loop {
        let current = levels.last().expect("at least one level");
        if current.is_empty() {
            levels.pop();
            break;
        }
        let len = current[0].0.len();
        let mut grown: HashMap<Vec<u32>, Vec<Occ>> = HashMap::new();
        for (expr, occs) in current {
            for o in occs {
                let seq = &seqs[o.utt as usize];
                if let Some(&next) = seq.get(o.start as usize + len) {
                    let mut key = expr.clone();
                    key.push(next);
                    grown.entry(key).or_default().push(*o);
                }
            }
        }
        levels.push(
            grown
                .into_iter()
                .filter(|(_, occs)| shared(occs))
                .map(|(expr, mut occs)| {
                    occs.sort_by_key(|o| (o.utt, o.start));
                    (expr, occs)
                })
                .collect(),
        );
    }

    let words: Vec<&str> = {
        let mut w = vec![""; vocab.len()];
        for (s, &id) in &vocab {
            w[id as usize] = s;
        }
        w
    };

    // cover[u][s]: furthest end of any routine occurrence in utterance u
    // starting at or before s.
    let mut cover: Vec<Vec<u32>> = seqs.iter().map(|s| vec![0; s.len()]).collect();
    let mut routines = Vec::new();
    for level in levels.iter().rev() {
        let mut accepted: Vec<&(Vec<u32>, Vec<Occ>)> = Vec::new();
        for entry @ (expr, occs) in level {
            let len = expr.len() as u32;
            let free: Vec<bool> = occs
                .iter()
                .map(|o| cover[o.utt as usize][o.start as usize] < o.start + len)
                .collect();
            if !free.iter().any(|&f| f) {
                continue;
            }
            accepted.push(entry);
            routines.push(build_routine(utterances, &words, expr, occs, &free));
        }
        for (expr, occs) in accepted {
            let len = expr.len() as u32;
            for o in occs {
                let row = &mut cover[o.utt as usize];
                for slot in &mut row[o.start as usize..] {
                    *slot = (*slot).max(o.start + len);
                }
            }
        }
    }

    routines.sort_by(|a, b| {
        a.establishment
            .time
            .total_cmp(&b.establishment.time)
            .then(a.establishment.position.cmp(&b.establishment.position))
            .then_with(|| a.expression.cmp(&b.expression))
    });
    routines
}

fn build_routine(
    utterances: &[Utterance],
    words: &[&str],
    expr: &[u32],
    occs: &[Occ],
    free: &[bool],
) -> Routine {
    let occurrences: Vec<Occurrence> = occs
        .iter()
        .zip(free)
        .map(|(o, &free)| {
            let u = &utterances[o.utt as usize];
            Occurrence {
                utterance: o.utt as usize,
                position: u.offset + o.start as usize,
                speaker: u.speaker,
                free,
            }
        })
        .collect();
    let anchor = |o: &Occurrence| Anchor {
        utterance: o.utterance,
        position: o.position,
        time: utterances[o.utterance].end,
    };
    let first = &occurrences[0];
    let establishing = occurrences
        .iter()
        .find(|o| o.speaker != first.speaker)
        .expect("shared expressions have occurrences by both learners");
    Routine {
        expression: expr.iter().map(|&t| words[t as usize].to_string()).collect(),
        initiator: first.speaker,
        priming: anchor(first),
        establishment: anchor(establishing),
        occurrences,
    }
}

/// Keeps routines mentioning at least one node of the network.
pub fn filter_task_routines(routines: &[Routine], network: &Network) -> Vec<Routine> {
    let nodes = network.node_tokens();
    routines
        .iter()
        .filter(|r| r.contains_referent(&nodes))
        .cloned()
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TimeMode {
    /// Seconds since the start of the activity.
    Absolute,
    /// Seconds, keeping only times within the first `window` seconds.
    CommonWindow(f64),
    /// Percent of the team's duration.
    Normalized(f64),
}

/// Establishment times (end of the establishing utterance) in the given mode.
pub fn establishment_times(routines: &[Routine], mode: TimeMode) -> Result<Vec<f64>> {
    let times = routines.iter().map(|r| r.establishment.time);
    match mode {
        TimeMode::Absolute => Ok(times.collect()),
        TimeMode::CommonWindow(window) => Ok(times.filter(|&t| t <= window).collect()),
        TimeMode::Normalized(duration) => times.map(|t| relative_time(t, duration)).collect(),
    }
}

/// Interquartile span (Q1, Q3) of normalized establishment times, with
/// linearly interpolated percentiles.
pub fn collaborative_period(times: &[f64]) -> Result<(f64, f64)> {
    if times.is_empty() {
        return Err(Error::NoEstablishments);
    }
    let mut sorted = times.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok((quantile(&sorted, 0.25), quantile(&sorted, 0.75)))
}

/// Token positions of routine priming, routine establishment and marker
/// words in one team's dialogue.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenEvents {
    pub priming_positions: Vec<usize>,
    pub establishment_positions: Vec<usize>,
    pub marker_positions: Vec<usize>,
}

pub const FILLERS: [&str; 2] = ["uh", "um"];
pub const INFORMATION_MARKER: &str = "oh";

pub fn token_events<S: AsRef<str>>(
    utterances: &[Utterance],
    routines: &[Routine],
    markers: &[S],
) -> TokenEvents {
    let markers: HashSet<&str> = markers.iter().map(AsRef::as_ref).collect();
    let marker_positions = utterances
        .iter()
        .filter(|u| u.speaker.is_human())
        .flat_map(|u| {
            u.tokens
                .iter()
                .enumerate()
                .filter(|(_, t)| markers.contains(t.as_str()))
                .map(move |(i, _)| u.offset + i)
        })
        .collect();
    TokenEvents {
        priming_positions: routines.iter().map(|r| r.priming.position).collect(),
        establishment_positions: routines.iter().map(|r| r.establishment.position).collect(),
        marker_positions,
    }
}
