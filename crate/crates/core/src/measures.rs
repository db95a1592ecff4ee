//! Task-success measures: solution error, learning gain and derived groups.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::corpus::{TeamId, MAX_TEST_SCORE};
use crate::error::{Error, Result};

/// Per-team performance and learning outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TeamSuccess {
    pub team: TeamId,
    /// Lowest submission error.
    pub error: f64,
    pub learn: f64,
    pub learn_a: f64,
    pub learn_b: f64,
    /// Seconds.
    pub duration: f64,
    pub n_submissions: usize,
    pub n_turns: u32,
}

/// Relative excess of a submitted spanning tree over the optimum.
pub fn submission_error(cost: f64, optimal_cost: f64) -> Result<f64> {
    if optimal_cost.is_nan() || optimal_cost <= 0.0 || !cost.is_finite() {
        return Err(Error::Invalid(format!(
            "submission error needs a positive optimal cost, got {optimal_cost}"
        )));
    }
    if cost < optimal_cost {
        return Err(Error::Invalid(format!(
            "cost {cost} is below the optimal cost {optimal_cost}"
        )));
    }
    Ok((cost - optimal_cost) / optimal_cost)
}

pub fn team_error(submission_errors: &[f64]) -> Result<f64> {
    submission_errors
        .iter()
        .copied()
        .min_by(f64::total_cmp)
        .ok_or_else(|| Error::Invalid("team has no submissions".into()))
}

/// Gain normalised by the room for improvement, or loss normalised by the
/// pre-test score. A perfect pre-test followed by a perfect post-test
/// counts as no gain.
pub fn relative_learning_gain(pre: f64, post: f64, max_score: f64) -> Result<f64> {
    let in_range = |s: f64| (0.0..=max_score).contains(&s);
    if max_score.is_nan() || max_score <= 0.0 || !in_range(pre) || !in_range(post) {
        return Err(Error::Invalid(format!(
            "test scores ({pre}, {post}) outside [0, {max_score}]"
        )));
    }
    Ok(if post >= pre {
        if pre == max_score {
            0.0
        } else {
            (post - pre) / (max_score - pre)
        }
    } else {
        (post - pre) / pre
    })
}

/// Learning gain with the default maximum test score.
pub fn learning_gain(pre: f64, post: f64) -> Result<f64> {
    relative_learning_gain(pre, post, f64::from(MAX_TEST_SCORE))
}

pub fn team_learning(learn_a: f64, learn_b: f64) -> f64 {
    (learn_a + learn_b) / 2.0
}

/// Splits teams into positive learners and the rest.
pub fn learning_groups(teams: &[TeamSuccess]) -> (Vec<TeamId>, Vec<TeamId>) {
    let (pos, other): (Vec<_>, Vec<_>) = teams.iter().partition(|t| t.learn > 0.0);
    (
        pos.into_iter().map(|t| t.team).collect(),
        other.into_iter().map(|t| t.team).collect(),
    )
}

/// Duration of the quickest team.
pub fn common_window(durations: &[f64]) -> Result<f64> {
    durations
        .iter()
        .copied()
        .min_by(f64::total_cmp)
        .ok_or_else(|| Error::Invalid("no teams to take a common window over".into()))
}

/// `team,error,learn,learn_A,learn_B,duration_sec,n_submissions,n_turns`
pub fn write_features_csv<W: Write>(teams: &[TeamSuccess], writer: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record([
        "team",
        "error",
        "learn",
        "learn_A",
        "learn_B",
        "duration_sec",
        "n_submissions",
        "n_turns",
    ])?;
    for t in teams {
        wtr.write_record([
            t.team.to_string(),
            t.error.to_string(),
            t.learn.to_string(),
            t.learn_a.to_string(),
            t.learn_b.to_string(),
            t.duration.to_string(),
            t.n_submissions.to_string(),
            t.n_turns.to_string(),
        ])?;
    }
    wtr.flush().map_err(|e| Error::io("<features>", e))?;
    Ok(())
}
