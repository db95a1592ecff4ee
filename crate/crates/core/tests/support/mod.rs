//! Shared fixtures and independent oracles for the integration tests.
#![allow(dead_code)]

pub mod configs;
pub mod excerpts;
pub mod gen;
pub mod oracle;

use std::path::PathBuf;

use align_core::corpus::Network;

pub fn sample_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/sample")
}

pub fn network() -> Network {
    Network::load(sample_dir().join("network.json")).expect("sample network")
}
