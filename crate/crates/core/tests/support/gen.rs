//! Seeded generators for randomized dialogues and action streams.

use align_core::corpus::{
    build_action_stream, ActionEvent, Edge, EditEvent, EditKind, Network, Speaker, SubmitEvent,
    Utterance,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn utterance(team: u32, speaker: Speaker, start: f64, tokens: Vec<String>, offset: usize) -> Utterance {
    Utterance {
        team,
        speaker,
        start,
        end: start + 0.5,
        text: tokens.join(" "),
        tokens,
        offset,
    }
}

/// Up to `max_utts` utterances of up to `max_tokens` tokens drawn from the
/// first `vocab` letters, alternating speakers at random. A robot line is
/// slipped in now and then when `robot` is set.
pub fn micro_dialogue(rng: &mut StdRng, max_utts: usize, max_tokens: usize, vocab: usize, robot: bool) -> Vec<Utterance> {
    let words: Vec<String> = (0..vocab).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
    let n = rng.random_range(0..=max_utts);
    let mut offset = 0;
    (0..n)
        .map(|i| {
            let speaker = if robot && rng.random_bool(0.1) {
                Speaker::Robot
            } else if rng.random_bool(0.5) {
                Speaker::A
            } else {
                Speaker::B
            };
            let len = rng.random_range(1..=max_tokens);
            let tokens: Vec<String> = (0..len)
                .map(|_| words[rng.random_range(0..vocab)].clone())
                .collect();
            let u = utterance(1, speaker, i as f64 * 2.0, tokens, offset);
            offset += len;
            u
        })
        .collect()
}

const WORDS: [&str; 12] = [
    "add", "connect", "erase", "remove", "to", "mount", "uh", "okay", "go", "from", "cut", "there",
];

fn speaker(rng: &mut StdRng) -> Speaker {
    if rng.random_bool(0.5) {
        Speaker::A
    } else {
        Speaker::B
    }
}

/// A random team session of at most `max_events` utterances, edits and
/// submissions over the given network, with explicit edit actors.
pub fn session(rng: &mut StdRng, network: &Network, max_events: usize) -> (Vec<Utterance>, Vec<ActionEvent>) {
    let names: Vec<String> = network.nodes().iter().map(|n| n.name.to_lowercase()).take(5).collect();
    let edges: Vec<Edge> = network
        .edges()
        .iter()
        .map(|e| Edge::new(e.u, e.v))
        .filter(|e| {
            let t = |id| network.token(id).expect("node");
            names.contains(&t(e.u)) || names.contains(&t(e.v))
        })
        .collect();
    let optimal = network.optimal_cost().expect("connected");

    let mut utterances = Vec::new();
    let mut edits = Vec::new();
    let mut submits = Vec::new();
    let mut offset = 0;
    let n = rng.random_range(0..=max_events);
    for i in 0..n {
        let time = i as f64;
        match rng.random_range(0..10) {
            0..=4 => {
                let len = rng.random_range(1..=6);
                let tokens: Vec<String> = (0..len)
                    .map(|_| {
                        if rng.random_bool(0.45) {
                            names[rng.random_range(0..names.len())].clone()
                        } else {
                            WORDS[rng.random_range(0..WORDS.len())].to_string()
                        }
                    })
                    .collect();
                let who = if rng.random_bool(0.1) { Speaker::Robot } else { speaker(rng) };
                utterances.push(utterance(1, who, time, tokens, offset));
                offset += len;
            }
            5..=8 => edits.push(EditEvent {
                team: 1,
                time,
                kind: if rng.random_bool(0.7) { EditKind::Add } else { EditKind::Remove },
                edge: edges[rng.random_range(0..edges.len())],
                actor: Some(speaker(rng)),
            }),
            _ => submits.push(SubmitEvent {
                team: 1,
                time,
                cost: optimal + rng.random_range(0..10),
            }),
        }
    }
    let stream = build_action_stream(&utterances, &edits, &submits).expect("stream");
    (utterances, stream)
}

/// A sample of `len` values drawn from `0..levels`, so ties are frequent
/// when `levels` is small.
pub fn sample(rng: &mut StdRng, len: usize, levels: u32) -> Vec<f64> {
    (0..len).map(|_| f64::from(rng.random_range(0..levels))).collect()
}
