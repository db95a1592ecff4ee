//! Small scripted dialogues with edits, replaying the annotated excerpts.

use align_core::corpus::{
    build_action_stream, tokenize, ActionEvent, Edge, EditEvent, EditKind, Network, Speaker,
    SubmitEvent, Utterance,
};
use align_core::instructions::{match_instructions_to_actions, Annotated, MatcherConfig};

pub struct Script<'a> {
    network: &'a Network,
    team: u32,
    clock: f64,
    offset: usize,
    pub utterances: Vec<Utterance>,
    pub edits: Vec<EditEvent>,
    pub submits: Vec<SubmitEvent>,
}

impl<'a> Script<'a> {
    pub fn new(network: &'a Network, team: u32) -> Self {
        Script {
            network,
            team,
            clock: 0.0,
            offset: 0,
            utterances: Vec::new(),
            edits: Vec::new(),
            submits: Vec::new(),
        }
    }

    fn tick(&mut self) -> f64 {
        self.clock += 1.0;
        self.clock
    }

    pub fn say(mut self, speaker: Speaker, text: &str) -> Self {
        let start = self.tick();
        let tokens = tokenize(text);
        let n = tokens.len();
        self.utterances.push(Utterance {
            team: self.team,
            speaker,
            start,
            end: start + 0.5,
            text: text.to_string(),
            tokens,
            offset: self.offset,
        });
        self.offset += n;
        self
    }

    /// `edge` is written "Gallen-Davos".
    pub fn edit(mut self, actor: Speaker, kind: EditKind, edge: &str) -> Self {
        let time = self.tick();
        let (u, v) = edge.split_once('-').expect("edge as U-V");
        let edge = Edge::new(
            self.network.resolve(u).expect("node"),
            self.network.resolve(v).expect("node"),
        );
        self.edits.push(EditEvent {
            team: self.team,
            time,
            kind,
            edge,
            actor: Some(actor),
        });
        self
    }

    pub fn add(self, actor: Speaker, edge: &str) -> Self {
        self.edit(actor, EditKind::Add, edge)
    }

    pub fn remove(self, actor: Speaker, edge: &str) -> Self {
        self.edit(actor, EditKind::Remove, edge)
    }

    pub fn submit(mut self, cost: u64) -> Self {
        let time = self.tick();
        self.submits.push(SubmitEvent {
            team: self.team,
            time,
            cost,
        });
        self
    }

    pub fn stream(&self) -> Vec<ActionEvent> {
        build_action_stream(&self.utterances, &self.edits, &self.submits).expect("stream")
    }

    pub fn annotate(&self, config: &MatcherConfig) -> (Vec<ActionEvent>, Annotated) {
        let stream = self.stream();
        let annotated =
            match_instructions_to_actions(&stream, &self.utterances, self.network, config)
                .expect("annotation");
        (stream, annotated)
    }
}

use Speaker::{Robot as I, A, B};

/// Utterances 198 to 201 and the following edit.
pub fn team10(network: &Network) -> Script<'_> {
    Script::new(network, 10)
        .say(A, "Maybe we start from, Mount Zermatt ?")
        .say(B, "No lets do Mount Davos to, where do you wanna go?")
        .say(A, "... to Mount, St Gallen.")
        .say(B, "Okay.")
        .add(B, "Gallen-Davos")
}

/// Opening edits, the Basel and Zurich matches, and the Bern-Zermatt
/// mismatch. Elided stretches are bridged with a submission so that each
/// part starts with an empty pending list.
pub fn team17(network: &Network) -> Script<'_> {
    Script::new(network, 17)
        .say(I, "So you only build from something that is already connected.")
        .say(B, "Oh.")
        .say(A, "Oh okay.")
        .add(B, "Zermatt-Davos")
        .add(B, "Gallen-Davos")
        .add(A, "Zurich-Davos")
        .submit(40)
        .say(A, "Now go to Mount Basel.")
        .add(B, "Basel-Bern")
        .say(A, "Yeah, and then go to Mount Zurich.")
        .add(B, "Basel-Zurich")
        .say(A, "Yeah.")
        .say(A, "Oh no that costs more.")
        .say(A, "uh ...")
        .say(B, "We should erase it.")
        .submit(35)
        .say(A, "Then do Mount Bern to Mount Zermatt.")
        .say(A, "Maybe that's better.")
        .say(B, "You can't do that.")
        .say(A, "Oh.")
        .say(A, "Then do ...")
        .say(B, "Mount Bern to Mount Interlaken?")
        .say(A, "Yeah.")
        .say(A, "I think that's 4 though.")
        .add(B, "Interlaken-Bern")
        .say(A, "So don't do that.")
}

/// Utterance 10 to 61 and 450 to 454, with the elided Gallen instruction
/// and a submission standing in for the skipped middle of the session.
pub fn team20(network: &Network) -> Script<'_> {
    Script::new(network, 20)
        .say(B, "I'm just gonna ...")
        .add(A, "Luzern-Zermatt")
        .say(A, "Uh ...")
        .say(A, "Uh ...")
        .say(B, "Oh there.")
        .say(A, "Oh two three.")
        .say(B, "Oh that's what you've been doing this all time.")
        .add(A, "Zurich-Basel")
        .say(A, "and Mount Gallen")
        .say(B, "Oh I think we have to connect all of them.")
        .add(B, "Luzern-Interlaken")
        .add(B, "Luzern-Zurich")
        .say(A, "Oh.")
        .say(B, "Okay I did some")
        .say(A, "okay for me.")
        .add(A, "Luzern-Davos")
        .say(A, "Oh no.")
        .say(B, "I think we are doing terrible.")
        .submit(44)
        .say(A, "Oh.")
        .say(B, "3.")
        .say(B, "What?")
        .say(A, "Let me ...")
        .remove(A, "Luzern-Zermatt")
        .say(A, "There you go.")
}
