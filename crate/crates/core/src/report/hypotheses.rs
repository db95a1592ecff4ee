//! The four hypothesis tables built from an [`Analysis`].

use super::{Analysis, Distribution, Hypothesis, HypothesisReport, SummaryStat, TeamAnalysis, TeamRow};
use crate::corpus::relative_time;
use crate::error::Result;
use crate::instructions::Verdict;
use crate::routines::{establishment_times, TimeMode};
use crate::stats::{cliffs_delta, kruskal_wallis, mann_whitney_u, mean, median, quantile, spearman, std_dev};

pub const H11_COLUMNS: [&str; 11] = [
    "error",
    "learn",
    "duration_sec",
    "n_routines",
    "n_routines_window",
    "median_abs",
    "median_window",
    "median_norm",
    "q1_norm",
    "q3_norm",
    "iqr_norm",
];

pub const H12_COLUMNS: [&str; 11] = [
    "n_filler",
    "n_routine",
    "median_filler",
    "median_priming",
    "median_establishment",
    "U_priming",
    "p_priming",
    "delta_priming",
    "U_estab",
    "p_estab",
    "delta_estab",
];

pub const H21_COLUMNS: [&str; 14] = [
    "error",
    "learn",
    "n_match",
    "n_mismatch",
    "ratio",
    "n_match_records",
    "n_mismatch_records",
    "n_nonmatch",
    "median_match",
    "median_mismatch",
    "median_match_window",
    "median_mismatch_window",
    "median_match_norm",
    "median_mismatch_norm",
];

pub const H22_COLUMNS: [&str; 12] = [
    "n_oh",
    "n_oh_tokens",
    "n_match",
    "n_mismatch",
    "ratio",
    "median_oh",
    "median_match",
    "median_mismatch",
    "U",
    "p",
    "delta",
    "n_oh_utterances",
];

pub fn run(analysis: &Analysis, hypothesis: Hypothesis) -> Result<HypothesisReport> {
    match hypothesis {
        Hypothesis::H11 => run_h11(analysis),
        Hypothesis::H12 => run_h12(analysis),
        Hypothesis::H21 => run_h21(analysis),
        Hypothesis::H22 => run_h22(analysis),
    }
}

fn count(n: usize) -> Option<f64> {
    Some(n as f64)
}

fn normalized(times: &[f64], duration: f64) -> Result<Vec<f64>> {
    times.iter().map(|&t| relative_time(t, duration)).collect()
}

fn within(times: &[f64], window: f64) -> Vec<f64> {
    times.iter().copied().filter(|&t| t <= window).collect()
}

/// Spearman's rho of a per-team value against error, dropping teams whose
/// value is missing.
fn spearman_vs_error(name: &str, teams: &[TeamAnalysis], values: &[Option<f64>]) -> SummaryStat {
    let (x, y): (Vec<f64>, Vec<f64>) = teams
        .iter()
        .zip(values)
        .filter_map(|(t, v)| v.map(|v| (v, t.success.error)))
        .unzip();
    let result = spearman(&x, &y).ok();
    SummaryStat {
        name: name.to_string(),
        test: "spearman".into(),
        statistic: result.as_ref().map(|r| r.statistic),
        p_value: result.and_then(|r| r.p_value),
        n: x.len(),
    }
}

/// Kruskal-Wallis H of a per-team value between positive learners and the
/// rest, dropping teams whose value is missing.
fn kruskal_by_learning(name: &str, teams: &[TeamAnalysis], values: &[Option<f64>]) -> SummaryStat {
    let mut positive = Vec::new();
    let mut other = Vec::new();
    for (t, v) in teams.iter().zip(values) {
        if let Some(v) = *v {
            if t.success.learn > 0.0 {
                positive.push(v);
            } else {
                other.push(v);
            }
        }
    }
    let result = kruskal_wallis(&[&positive, &other]).ok();
    SummaryStat {
        name: name.to_string(),
        test: "kruskal_wallis".into(),
        statistic: result.as_ref().map(|r| r.statistic),
        p_value: result.and_then(|r| r.p_value),
        n: positive.len() + other.len(),
    }
}

fn descriptive(name: &str, test: &str, values: &[f64], f: fn(&[f64]) -> Option<f64>) -> SummaryStat {
    SummaryStat {
        name: name.to_string(),
        test: test.to_string(),
        statistic: f(values),
        p_value: None,
        n: values.len(),
    }
}

fn column<const N: usize>(rows: &[TeamRow], columns: &[&str; N], name: &str) -> Vec<Option<f64>> {
    let idx = columns.iter().position(|c| *c == name).expect("known column");
    rows.iter().map(|r| r.values[idx]).collect()
}

fn report<const N: usize>(hypothesis: Hypothesis, columns: &[&str; N]) -> HypothesisReport {
    HypothesisReport::empty(hypothesis, columns)
}

/// Establishment times of task routines: medians in absolute seconds, within
/// the common window and as percent of each team's duration.
pub fn run_h11(analysis: &Analysis) -> Result<HypothesisReport> {
    let mut out = report(Hypothesis::H11, &H11_COLUMNS);
    let mut pooled_norm = Vec::new();
    for t in &analysis.teams {
        let abs = establishment_times(&t.routines, TimeMode::Absolute)?;
        let win = establishment_times(&t.routines, TimeMode::CommonWindow(analysis.window))?;
        let norm = establishment_times(&t.routines, TimeMode::Normalized(t.duration()))?;
        let quartiles = (!norm.is_empty()).then(|| {
            let mut sorted = norm.clone();
            sorted.sort_by(f64::total_cmp);
            (quantile(&sorted, 0.25), quantile(&sorted, 0.75))
        });
        out.rows.push(TeamRow {
            team: t.team,
            values: vec![
                Some(t.success.error),
                Some(t.success.learn),
                Some(t.duration()),
                count(abs.len()),
                count(win.len()),
                median(&abs),
                median(&win),
                median(&norm),
                quartiles.map(|q| q.0),
                quartiles.map(|q| q.1),
                quartiles.map(|q| q.1 - q.0),
            ],
        });
        pooled_norm.extend(norm.iter().copied());
        for (series, values) in [
            ("establishment_abs", abs),
            ("establishment_window", win),
            ("establishment_norm", norm),
        ] {
            out.distributions.push(Distribution {
                team: t.team,
                series: series.into(),
                values,
            });
        }
    }

    let teams = &analysis.teams;
    let col = |name| column(&out.rows, &H11_COLUMNS, name);
    let medians_norm: Vec<f64> = col("median_norm").into_iter().flatten().collect();
    out.summary = vec![
        spearman_vs_error("median_abs_vs_error", teams, &col("median_abs")),
        spearman_vs_error("median_window_vs_error", teams, &col("median_window")),
        spearman_vs_error("median_norm_vs_error", teams, &col("median_norm")),
        kruskal_by_learning("median_abs_by_learning", teams, &col("median_abs")),
        kruskal_by_learning("median_norm_by_learning", teams, &col("median_norm")),
        descriptive("mean_of_medians_norm", "mean", &medians_norm, mean),
        descriptive("combined_sd_norm", "sd", &pooled_norm, std_dev),
    ];
    Ok(out)
}

/// Positions of fillers against priming and establishment positions of task
/// routines. Medians are percent of the team's token count.
pub fn run_h12(analysis: &Analysis) -> Result<HypothesisReport> {
    let mut out = report(Hypothesis::H12, &H12_COLUMNS);
    for t in &analysis.teams {
        let total: usize = t.utterances.iter().map(|u| u.tokens.len()).sum();
        let as_f64 = |v: &[usize]| v.iter().map(|&p| p as f64).collect::<Vec<_>>();
        let percent = |v: &[f64]| v.iter().map(|p| 100.0 * p / total.max(1) as f64).collect::<Vec<_>>();
        let fillers = as_f64(&t.fillers.marker_positions);
        let priming = as_f64(&t.fillers.priming_positions);
        let estab = as_f64(&t.fillers.establishment_positions);

        let compare = |other: &[f64]| -> [Option<f64>; 3] {
            match (mann_whitney_u(&fillers, other), cliffs_delta(&fillers, other)) {
                (Ok(u), Ok(d)) => [Some(u.statistic), u.p_value, Some(d)],
                _ => [None; 3],
            }
        };
        let [u_p, p_p, d_p] = compare(&priming);
        let [u_e, p_e, d_e] = compare(&estab);
        out.rows.push(TeamRow {
            team: t.team,
            values: vec![
                count(fillers.len()),
                count(t.routines.len()),
                median(&percent(&fillers)),
                median(&percent(&priming)),
                median(&percent(&estab)),
                u_p,
                p_p,
                d_p,
                u_e,
                p_e,
                d_e,
            ],
        });
        for (series, values) in [
            ("filler_pos", fillers),
            ("priming_pos", priming),
            ("establishment_pos", estab),
        ] {
            out.distributions.push(Distribution {
                team: t.team,
                series: series.into(),
                values: percent(&values),
            });
        }
    }
    let teams = &analysis.teams;
    let col = |name| column(&out.rows, &H12_COLUMNS, name);
    out.summary = vec![
        spearman_vs_error("delta_priming_vs_error", teams, &col("delta_priming")),
        spearman_vs_error("delta_estab_vs_error", teams, &col("delta_estab")),
        kruskal_by_learning("delta_priming_by_learning", teams, &col("delta_priming")),
        kruskal_by_learning("delta_estab_by_learning", teams, &col("delta_estab")),
    ];
    Ok(out)
}

fn ratio(matches: usize, mismatches: usize) -> Option<f64> {
    (mismatches > 0).then(|| matches as f64 / mismatches as f64)
}

/// Timing of matches and mismatches.
pub fn run_h21(analysis: &Analysis) -> Result<HypothesisReport> {
    let mut out = report(Hypothesis::H21, &H21_COLUMNS);
    let mut pooled_match = Vec::new();
    let mut pooled_mismatch = Vec::new();
    for t in &analysis.teams {
        let matches = t.verdict_times(Verdict::Match);
        let mismatches = t.verdict_times(Verdict::Mismatch);
        let records = |v| t.annotated.records.iter().filter(|r| r.verdict == v).count();
        let match_norm = normalized(&matches, t.duration())?;
        let mismatch_norm = normalized(&mismatches, t.duration())?;
        out.rows.push(TeamRow {
            team: t.team,
            values: vec![
                Some(t.success.error),
                Some(t.success.learn),
                count(matches.len()),
                count(mismatches.len()),
                ratio(matches.len(), mismatches.len()),
                count(records(Verdict::Match)),
                count(records(Verdict::Mismatch)),
                count(records(Verdict::Nonmatch)),
                median(&matches),
                median(&mismatches),
                median(&within(&matches, analysis.window)),
                median(&within(&mismatches, analysis.window)),
                median(&match_norm),
                median(&mismatch_norm),
            ],
        });
        pooled_match.extend(match_norm.iter().copied());
        pooled_mismatch.extend(mismatch_norm.iter().copied());
        for (series, values) in [
            ("match_abs", matches),
            ("mismatch_abs", mismatches),
            ("match_norm", match_norm),
            ("mismatch_norm", mismatch_norm),
        ] {
            out.distributions.push(Distribution {
                team: t.team,
                series: series.into(),
                values,
            });
        }
    }
    let teams = &analysis.teams;
    let col = |name| column(&out.rows, &H21_COLUMNS, name);
    let flat = |name| col(name).into_iter().flatten().collect::<Vec<f64>>();
    out.summary = vec![
        spearman_vs_error("median_match_vs_error", teams, &col("median_match")),
        spearman_vs_error("median_mismatch_vs_error", teams, &col("median_mismatch")),
        spearman_vs_error("median_match_window_vs_error", teams, &col("median_match_window")),
        spearman_vs_error("median_match_norm_vs_error", teams, &col("median_match_norm")),
        spearman_vs_error("median_mismatch_norm_vs_error", teams, &col("median_mismatch_norm")),
        kruskal_by_learning("median_match_by_learning", teams, &col("median_match")),
        kruskal_by_learning("median_match_norm_by_learning", teams, &col("median_match_norm")),
        kruskal_by_learning("median_mismatch_by_learning", teams, &col("median_mismatch")),
        descriptive("mean_of_medians_match_norm", "mean", &flat("median_match_norm"), mean),
        descriptive("combined_sd_match_norm", "sd", &pooled_match, std_dev),
        descriptive("mean_of_medians_mismatch_norm", "mean", &flat("median_mismatch_norm"), mean),
        descriptive("combined_sd_mismatch_norm", "sd", &pooled_mismatch, std_dev),
    ];
    Ok(out)
}

/// "oh" times against the pooled match and mismatch times.
pub fn run_h22(analysis: &Analysis) -> Result<HypothesisReport> {
    let mut out = report(Hypothesis::H22, &H22_COLUMNS);
    for t in &analysis.teams {
        let matches = t.verdict_times(Verdict::Match);
        let mismatches = t.verdict_times(Verdict::Mismatch);
        let pooled: Vec<f64> = matches.iter().chain(&mismatches).copied().collect();
        let (u, p, delta) = match (
            mann_whitney_u(&t.oh_times, &pooled),
            cliffs_delta(&t.oh_times, &pooled),
        ) {
            (Ok(u), Ok(d)) => (Some(u.statistic), u.p_value, Some(d)),
            _ => (None, None, None),
        };
        let oh_norm = normalized(&t.oh_times, t.duration())?;
        let match_norm = normalized(&matches, t.duration())?;
        let mismatch_norm = normalized(&mismatches, t.duration())?;
        out.rows.push(TeamRow {
            team: t.team,
            values: vec![
                count(t.oh_times.len()),
                count(t.oh_tokens),
                count(matches.len()),
                count(mismatches.len()),
                ratio(matches.len(), mismatches.len()),
                median(&oh_norm),
                median(&match_norm),
                median(&mismatch_norm),
                u,
                p,
                delta,
                count(t.oh_utterances),
            ],
        });
        for (series, values) in [
            ("oh_norm", oh_norm),
            ("match_norm", match_norm),
            ("mismatch_norm", mismatch_norm),
        ] {
            out.distributions.push(Distribution {
                team: t.team,
                series: series.into(),
                values,
            });
        }
    }
    let teams = &analysis.teams;
    let delta = column(&out.rows, &H22_COLUMNS, "delta");
    out.summary = vec![
        spearman_vs_error("delta_vs_error", teams, &delta),
        kruskal_by_learning("delta_by_learning", teams, &delta),
    ];
    Ok(out)
}
