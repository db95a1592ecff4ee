//! Rank-based statistics: Spearman's rho, Mann-Whitney U, Cliff's delta and
//! the Kruskal-Wallis H test.
//!
//! Ties always receive average ranks. Neither the U test nor the H test
//! applies a continuity correction; both apply the usual tie correction to
//! the variance.

use std::fmt;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF, Normal, StudentsT};

use crate::error::{Error, Result};

/// Outcome of a test: the statistic (rho, U or H), its two-sided p-value
/// and the sample sizes involved.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub statistic: f64,
    pub p_value: Option<f64>,
    pub n: Vec<usize>,
}

impl TestResult {
    pub fn p(&self) -> f64 {
        self.p_value.unwrap_or(f64::NAN)
    }
}

/// Linearly interpolated quantile of already sorted data (`q` in `[0, 1]`).
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty(), "quantile of an empty sample");
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    Some(quantile(&sorted, 0.5))
}

pub fn mean(values: &[f64]) -> Option<f64> {
    (!values.is_empty()).then(|| values.iter().sum::<f64>() / values.len() as f64)
}

/// Sample standard deviation (n - 1 denominator).
pub fn std_dev(values: &[f64]) -> Option<f64> {
    if values.len() < 2 {
        return None;
    }
    let m = mean(values)?;
    let ss: f64 = values.iter().map(|v| (v - m).powi(2)).sum();
    Some((ss / (values.len() - 1) as f64).sqrt())
}

/// 1-based average ranks, plus the tie term sum(t^3 - t) over tie groups.
pub fn rank_average(values: &[f64]) -> (Vec<f64>, f64) {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut ties = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && values[order[j]] == values[order[i]] {
            j += 1;
        }
        // Positions i..j (0-based) share the mean of ranks i+1..=j.
        let rank = (i + j + 1) as f64 / 2.0;
        for &k in &order[i..j] {
            ranks[k] = rank;
        }
        let t = (j - i) as f64;
        ties += t * t * t - t;
        i = j;
    }
    (ranks, ties)
}

fn check_finite(name: &str, values: &[f64]) -> Result<()> {
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Stats(format!("{name} contains non-finite values")));
    }
    Ok(())
}

fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx).powi(2);
        syy += (b - my).powi(2);
    }
    (sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0)
}

fn spearman_rho(x: &[f64], y: &[f64]) -> Result<(f64, Vec<f64>, Vec<f64>)> {
    if x.len() != y.len() {
        return Err(Error::Stats(format!(
            "spearman needs paired samples, got {} and {}",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 3 {
        return Err(Error::Stats("spearman needs at least 3 pairs".into()));
    }
    check_finite("x", x)?;
    check_finite("y", y)?;
    let constant = |v: &[f64]| v.iter().all(|a| *a == v[0]);
    if constant(x) || constant(y) {
        return Err(Error::Stats("spearman is undefined for a constant sample".into()));
    }
    let (rx, _) = rank_average(x);
    let (ry, _) = rank_average(y);
    Ok((pearson(&rx, &ry), rx, ry))
}

/// Spearman's rank correlation with a two-sided p-value from the
/// t-approximation on n - 2 degrees of freedom.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<TestResult> {
    let (rho, _, _) = spearman_rho(x, y)?;
    let n = x.len();
    let df = (n - 2) as f64;
    let p = if 1.0 - rho * rho <= f64::EPSILON {
        0.0
    } else {
        let t = rho * (df / (1.0 - rho * rho)).sqrt();
        let dist = StudentsT::new(0.0, 1.0, df).map_err(|e| Error::Stats(e.to_string()))?;
        (2.0 * dist.sf(t.abs())).min(1.0)
    };
    Ok(TestResult {
        statistic: rho,
        p_value: Some(p),
        n: vec![n],
    })
}

/// Largest sample for which [`spearman_exact`] enumerates permutations.
pub const EXACT_SPEARMAN_MAX_N: usize = 10;

/// Spearman's rho with an exact two-sided permutation p-value: the share of
/// all orderings of `y`'s ranks whose |rho| reaches the observed one.
pub fn spearman_exact(x: &[f64], y: &[f64]) -> Result<TestResult> {
    let (rho, rx, mut ry) = spearman_rho(x, y)?;
    let n = x.len();
    if n > EXACT_SPEARMAN_MAX_N {
        return Err(Error::Stats(format!(
            "exact spearman is limited to {EXACT_SPEARMAN_MAX_N} pairs"
        )));
    }
    let target = rho.abs() - 1e-12;
    let (mut hits, mut total) = (0u64, 0u64);
    // Heap's algorithm over the rank vector of y.
    let mut c = vec![0usize; n];
    let mut visit = |ry: &[f64]| {
        total += 1;
        if pearson(&rx, ry).abs() >= target {
            hits += 1;
        }
    };
    visit(&ry);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                ry.swap(0, i);
            } else {
                ry.swap(c[i], i);
            }
            visit(&ry);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Ok(TestResult {
        statistic: rho,
        p_value: Some(hits as f64 / total as f64),
        n: vec![n],
    })
}

/// Mann-Whitney U test. The statistic is U for the first sample,
/// `R_x - n_x (n_x + 1) / 2`; the p-value is two-sided from the normal
/// approximation with tie-corrected variance.
pub fn mann_whitney_u(x: &[f64], y: &[f64]) -> Result<TestResult> {
    if x.is_empty() || y.is_empty() {
        return Err(Error::Stats("mann-whitney needs two non-empty samples".into()));
    }
    check_finite("x", x)?;
    check_finite("y", y)?;
    let (m, n) = (x.len() as f64, y.len() as f64);
    let pooled: Vec<f64> = x.iter().chain(y).copied().collect();
    let (ranks, ties) = rank_average(&pooled);
    let rank_sum: f64 = ranks[..x.len()].iter().sum();
    let u = rank_sum - m * (m + 1.0) / 2.0;

    let total = m + n;
    let variance = m * n / 12.0 * ((total + 1.0) - ties / (total * (total - 1.0)));
    let p = if variance <= 0.0 {
        1.0
    } else {
        let z = (u - m * n / 2.0) / variance.sqrt();
        let normal = Normal::new(0.0, 1.0).expect("standard normal");
        (2.0 * normal.sf(z.abs())).min(1.0)
    };
    Ok(TestResult {
        statistic: u,
        p_value: Some(p),
        n: vec![x.len(), y.len()],
    })
}

/// Cliff's delta: P(x > y) - P(x < y) over all pairs.
pub fn cliffs_delta(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.is_empty() || y.is_empty() {
        return Err(Error::Stats("cliff's delta needs two non-empty samples".into()));
    }
    check_finite("x", x)?;
    check_finite("y", y)?;
    let mut sorted = y.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut dominance: i64 = 0;
    for &a in x {
        let below = sorted.partition_point(|&b| b < a) as i64;
        let above = (sorted.len() - sorted.partition_point(|&b| b <= a)) as i64;
        dominance += below - above;
    }
    Ok(dominance as f64 / (x.len() * y.len()) as f64)
}

/// Kruskal-Wallis H test on pooled average ranks, tie corrected, with the
/// p-value from a chi-square on k - 1 degrees of freedom. When every
/// observation is tied the statistic is 0 and p is 1.
pub fn kruskal_wallis(groups: &[&[f64]]) -> Result<TestResult> {
    if groups.len() < 2 {
        return Err(Error::Stats("kruskal-wallis needs at least two groups".into()));
    }
    if groups.iter().any(|g| g.is_empty()) {
        return Err(Error::Stats("kruskal-wallis groups must be non-empty".into()));
    }
    let pooled: Vec<f64> = groups.iter().flat_map(|g| g.iter().copied()).collect();
    check_finite("groups", &pooled)?;
    let total = pooled.len() as f64;
    if pooled.len() < 3 {
        return Err(Error::Stats("kruskal-wallis needs at least three observations".into()));
    }
    let sizes: Vec<usize> = groups.iter().map(|g| g.len()).collect();
    let (ranks, ties) = rank_average(&pooled);

    let mut between = 0.0;
    let mut start = 0;
    for &len in &sizes {
        let r: f64 = ranks[start..start + len].iter().sum();
        between += r * r / len as f64;
        start += len;
    }
    let correction = 1.0 - ties / (total.powi(3) - total);
    if correction <= 0.0 {
        return Ok(TestResult {
            statistic: 0.0,
            p_value: Some(1.0),
            n: sizes,
        });
    }
    let h = ((12.0 / (total * (total + 1.0)) * between - 3.0 * (total + 1.0)) / correction).max(0.0);
    let chi2 = ChiSquared::new((groups.len() - 1) as f64).map_err(|e| Error::Stats(e.to_string()))?;
    Ok(TestResult {
        statistic: h,
        p_value: Some(chi2.sf(h).clamp(0.0, 1.0)),
        n: sizes,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeltaMagnitude {
    Negligible,
    Small,
    Medium,
    Large,
}

impl fmt::Display for DeltaMagnitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DeltaMagnitude::Negligible => "negligible",
            DeltaMagnitude::Small => "small",
            DeltaMagnitude::Medium => "medium",
            DeltaMagnitude::Large => "large",
        })
    }
}

/// Magnitude bands for |delta|: 0.147, 0.33 and 0.474.
pub fn interpret_delta(delta: f64) -> DeltaMagnitude {
    let d = delta.abs();
    if d < 0.147 {
        DeltaMagnitude::Negligible
    } else if d < 0.33 {
        DeltaMagnitude::Small
    } else if d < 0.474 {
        DeltaMagnitude::Medium
    } else {
        DeltaMagnitude::Large
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RhoStrength {
    VeryWeak,
    Weak,
    Moderate,
    Strong,
    VeryStrong,
}

impl fmt::Display for RhoStrength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RhoStrength::VeryWeak => "very weak",
            RhoStrength::Weak => "weak",
            RhoStrength::Moderate => "moderate",
            RhoStrength::Strong => "strong",
            RhoStrength::VeryStrong => "very strong",
        })
    }
}

/// Strength bands for |rho| at 0.20, 0.40, 0.60 and 0.80.
pub fn interpret_rho(rho: f64) -> RhoStrength {
    match rho.abs() {
        r if r < 0.2 => RhoStrength::VeryWeak,
        r if r < 0.4 => RhoStrength::Weak,
        r if r < 0.6 => RhoStrength::Moderate,
        r if r < 0.8 => RhoStrength::Strong,
        _ => RhoStrength::VeryStrong,
    }
}

/// Formats a p-value the way result tables print it: `< .05` below the
/// threshold, otherwise three decimals without the leading zero.
pub fn format_p(p: f64) -> String {
    if p.is_nan() {
        return "n/a".into();
    }
    if p < 0.05 {
        return "< .05".into();
    }
    let s = format!("{p:.3}");
    match s.strip_prefix('0') {
        Some(rest) => rest.to_string(),
        None => s,
    }
}
