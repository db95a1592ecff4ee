//! Brute-force reference implementations, written for clarity rather than
//! speed and sharing no code with the library beyond its data types.

use std::collections::{BTreeMap, BTreeSet};

use align_core::corpus::{ActionEvent, ActionObject, Network, Speaker, Utterance, Verb};
use align_core::instructions::{recognise_instructions, Instruction, Lexicon, MatcherConfig, Verdict};

// ---------------------------------------------------------------- routines

/// (expression, initiator, priming position, establishment position,
/// priming time, establishment time)
/// An expression with its (utterance, start) occurrences.
type Candidate<'a> = (&'a Vec<String>, &'a Vec<(usize, usize)>);

pub type RoutineRow = (Vec<String>, Speaker, usize, usize, f64, f64);

/// Every shared contiguous token sequence with at least one occurrence not
/// inside an occurrence of a longer routine in the same utterance.
pub fn routines(utterances: &[Utterance]) -> Vec<RoutineRow> {
    // expression -> occurrences (utterance, start)
    let mut occurrences: BTreeMap<Vec<String>, Vec<(usize, usize)>> = BTreeMap::new();
    for (ui, u) in utterances.iter().enumerate() {
        if u.speaker == Speaker::Robot {
            continue;
        }
        for s in 0..u.tokens.len() {
            for e in s + 1..=u.tokens.len() {
                occurrences.entry(u.tokens[s..e].to_vec()).or_default().push((ui, s));
            }
        }
    }
    let shared: Vec<Candidate> = occurrences
        .iter()
        .filter(|(_, occ)| {
            let speakers: BTreeSet<Speaker> = occ.iter().map(|&(u, _)| utterances[u].speaker).collect();
            speakers.contains(&Speaker::A) && speakers.contains(&Speaker::B)
        })
        .collect();
    let longest = shared.iter().map(|(e, _)| e.len()).max().unwrap_or(0);

    let mut accepted: Vec<Candidate> = Vec::new();
    for len in (1..=longest).rev() {
        let mut this_level = Vec::new();
        for &(expr, occ) in shared.iter().filter(|(e, _)| e.len() == len) {
            let contained = |&(u, s): &(usize, usize)| {
                accepted.iter().any(|(other, other_occ)| {
                    other.len() > len
                        && other_occ
                            .iter()
                            .any(|&(ou, os)| ou == u && os <= s && s + len <= os + other.len())
                })
            };
            if occ.iter().any(|o| !contained(o)) {
                this_level.push((expr, occ));
            }
        }
        accepted.extend(this_level);
    }

    accepted
        .into_iter()
        .map(|(expr, occ)| {
            let mut occ = occ.clone();
            occ.sort();
            let first = occ[0];
            let initiator = utterances[first.0].speaker;
            let estab = *occ
                .iter()
                .find(|&&(u, _)| utterances[u].speaker != initiator)
                .expect("shared");
            let pos = |(u, s): (usize, usize)| utterances[u].offset + s;
            (
                expr.clone(),
                initiator,
                pos(first),
                pos(estab),
                utterances[first.0].end,
                utterances[estab.0].end,
            )
        })
        .collect()
}

// ----------------------------------------------------------------- matcher

/// Verdict of the edit at `stream[k]`, recomputing the pending list from
/// the start of the stream.
fn verdict_at(
    k: usize,
    stream: &[ActionEvent],
    utterances: &[Utterance],
    network: &Network,
    lexicon: &Lexicon,
    config: &MatcherConfig,
) -> (Verdict, Option<Instruction>) {
    let mut pending: Vec<Instruction> = Vec::new();
    let mut period = (1, 1);
    for (i, a) in stream.iter().enumerate().take(k + 1) {
        if (a.turn, a.attempt) != period {
            pending = Vec::new();
            period = (a.turn, a.attempt);
        }
        match a.object {
            ActionObject::Utterance(u) => {
                if let Some(agent @ (Speaker::A | Speaker::B)) = a.subject {
                    for mut ins in recognise_instructions(&utterances[u].tokens, lexicon) {
                        ins.agent = Some(agent);
                        ins.source = Some(i);
                        pending.push(ins);
                    }
                }
            }
            ActionObject::Edge(edge) => {
                let actor = a.subject.expect("actor");
                let kind = a.verb.edit_kind().expect("edit");
                let ends = [network.token(edge.u).unwrap(), network.token(edge.v).unwrap()];
                let fits = |ins: &Instruction| {
                    ins.verb == kind
                        && ends.contains(&ins.u)
                        && ins.v.as_ref().is_none_or(|v| ends.contains(v))
                };
                let others: Vec<&Instruction> =
                    pending.iter().filter(|p| p.agent != Some(actor)).collect();
                let result = if others.is_empty() {
                    (Verdict::Nonmatch, None)
                } else {
                    let mut hit = None;
                    for p in &others {
                        if fits(p) {
                            hit = Some((*p).clone());
                        }
                    }
                    match hit {
                        Some(h) => (Verdict::Match, Some(h)),
                        None => (Verdict::Mismatch, Some(others[others.len() - 1].clone())),
                    }
                };
                if i == k {
                    return result;
                }
                if result.0 != Verdict::Nonmatch {
                    if config.clear_on_verdict {
                        pending.clear();
                    } else {
                        pending.retain(|p| !fits(p));
                    }
                }
            }
            ActionObject::Submission { .. } => {}
        }
    }
    unreachable!("index {k} is not an edit")
}

/// Verdicts of every edit in the stream, in order.
pub fn replay(
    stream: &[ActionEvent],
    utterances: &[Utterance],
    network: &Network,
    config: &MatcherConfig,
) -> Vec<(usize, Verdict, Option<Instruction>)> {
    let lexicon = Lexicon::from_network(network);
    stream
        .iter()
        .enumerate()
        .filter(|(_, a)| matches!(a.verb, Verb::Adds | Verb::Removes))
        .map(|(k, _)| {
            let (v, i) = verdict_at(k, stream, utterances, network, &lexicon, config);
            (k, v, i)
        })
        .collect()
}

// -------------------------------------------------------------- statistics

/// Pairwise U for the first sample: wins count 1, ties 1/2.
pub fn u_statistic(x: &[f64], y: &[f64]) -> f64 {
    let mut u = 0.0;
    for a in x {
        for b in y {
            if a > b {
                u += 1.0;
            } else if a == b {
                u += 0.5;
            }
        }
    }
    u
}

pub fn delta(x: &[f64], y: &[f64]) -> f64 {
    let mut d = 0i64;
    for a in x {
        for b in y {
            d += (a > b) as i64 - (a < b) as i64;
        }
    }
    d as f64 / (x.len() * y.len()) as f64
}

/// Average rank by counting: #(smaller) + (#(equal) + 1) / 2.
pub fn ranks(v: &[f64]) -> Vec<f64> {
    v.iter()
        .map(|a| {
            let below = v.iter().filter(|b| *b < a).count() as f64;
            let equal = v.iter().filter(|b| *b == a).count() as f64;
            below + (equal + 1.0) / 2.0
        })
        .collect()
}

fn tie_sum(v: &[f64]) -> f64 {
    let mut sorted = v.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut sum = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let j = sorted[i..].iter().take_while(|b| **b == sorted[i]).count();
        let t = j as f64;
        sum += t * t * t - t;
        i += j;
    }
    sum
}

/// Kruskal-Wallis H from its textbook definition; `None` when every value
/// is tied.
pub fn h_statistic(groups: &[Vec<f64>]) -> Option<f64> {
    let pooled: Vec<f64> = groups.iter().flatten().copied().collect();
    let n = pooled.len() as f64;
    let r = ranks(&pooled);
    let mut start = 0;
    let mut h = 0.0;
    let mean_rank = (n + 1.0) / 2.0;
    for g in groups {
        let rg: f64 = r[start..start + g.len()].iter().sum::<f64>() / g.len() as f64;
        h += g.len() as f64 * (rg - mean_rank).powi(2);
        start += g.len();
    }
    h *= 12.0 / (n * (n + 1.0));
    let c = 1.0 - tie_sum(&pooled) / (n * n * n - n);
    (c > 0.0).then(|| h / c)
}

pub fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    sxy / (sxx * syy).sqrt()
}

pub fn rho(x: &[f64], y: &[f64]) -> f64 {
    pearson(&ranks(x), &ranks(y))
}

/// Every way of choosing `k` indices out of `0..n`.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Every ordering of `0..n`.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

const EPS: f64 = 1e-9;

/// Two-sided permutation p of U: the share of relabellings of the pooled
/// sample whose |U - mn/2| is at least the observed one.
pub fn u_permutation_p(x: &[f64], y: &[f64]) -> f64 {
    let pooled: Vec<f64> = x.iter().chain(y).copied().collect();
    let centre = (x.len() * y.len()) as f64 / 2.0;
    let observed = (u_statistic(x, y) - centre).abs();
    let splits = combinations(pooled.len(), x.len());
    let hits = splits
        .iter()
        .filter(|chosen| {
            let (gx, gy): (Vec<_>, Vec<_>) = (0..pooled.len()).partition(|i| chosen.contains(i));
            let gx: Vec<f64> = gx.iter().map(|&i| pooled[i]).collect();
            let gy: Vec<f64> = gy.iter().map(|&i| pooled[i]).collect();
            (u_statistic(&gx, &gy) - centre).abs() >= observed - EPS
        })
        .count();
    hits as f64 / splits.len() as f64
}

/// Permutation p of H over all relabellings that keep the group sizes.
pub fn h_permutation_p(groups: &[Vec<f64>]) -> Option<f64> {
    let observed = h_statistic(groups)?;
    let pooled: Vec<f64> = groups.iter().flatten().copied().collect();
    let sizes: Vec<usize> = groups.iter().map(Vec::len).collect();
    let labellings = labellings(pooled.len(), &sizes);
    let hits = labellings
        .iter()
        .filter(|parts| {
            let relabelled: Vec<Vec<f64>> =
                parts.iter().map(|g| g.iter().map(|&i| pooled[i]).collect()).collect();
            h_statistic(&relabelled).unwrap_or(0.0) >= observed - EPS
        })
        .count();
    Some(hits as f64 / labellings.len() as f64)
}

/// Every way of dealing `0..n` into groups of the given sizes.
pub fn labellings(n: usize, sizes: &[usize]) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    partitions(&(0..n).collect::<Vec<_>>(), sizes, &mut Vec::new(), &mut out);
    out
}

fn partitions(items: &[usize], sizes: &[usize], acc: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
    let Some((&first, rest)) = sizes.split_first() else {
        out.push(acc.clone());
        return;
    };
    for chosen in combinations(items.len(), first) {
        let group: Vec<usize> = chosen.iter().map(|&i| items[i]).collect();
        let left: Vec<usize> = items.iter().copied().filter(|i| !group.contains(i)).collect();
        acc.push(group);
        partitions(&left, rest, acc, out);
        acc.pop();
    }
}

/// Two-sided permutation p of rho over every reordering of `y`.
pub fn rho_permutation_p(x: &[f64], y: &[f64]) -> f64 {
    let observed = rho(x, y).abs();
    let orders = permutations(y.len());
    let hits = orders
        .iter()
        .filter(|o| {
            let yp: Vec<f64> = o.iter().map(|&i| y[i]).collect();
            rho(x, &yp).abs() >= observed - EPS
        })
        .count();
    hits as f64 / orders.len() as f64
}
