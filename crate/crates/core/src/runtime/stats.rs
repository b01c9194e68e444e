use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::sharing::PartyId;

/// Protocol phase label carried in every frame header.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Phase {
    Setup,
    Program,
    Sectable,
    Embed,
    Cosine,
    Topk,
    Insert,
    Detect,
    Debug,
}

impl Phase {
    pub const ALL: [Phase; 9] = [
        Phase::Setup,
        Phase::Program,
        Phase::Sectable,
        Phase::Embed,
        Phase::Cosine,
        Phase::Topk,
        Phase::Insert,
        Phase::Detect,
        Phase::Debug,
    ];

    pub fn tag(self) -> u16 {
        self as u16
    }

    pub fn from_tag(tag: u16) -> Result<Phase> {
        Phase::ALL
            .get(tag as usize)
            .copied()
            .ok_or_else(|| Error::Desync(format!("unknown phase tag {tag}")))
    }

    pub fn label(self) -> &'static str {
        match self {
            Phase::Setup => "Setup",
            Phase::Program => "Program",
            Phase::Sectable => "Sectable",
            Phase::Embed => "Embed",
            Phase::Cosine => "Cosine",
            Phase::Topk => "Topk",
            Phase::Insert => "Insert",
            Phase::Detect => "Detect",
            Phase::Debug => "Debug",
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseCounters {
    pub messages: u64,
    pub bytes: u64,
    pub rounds: u64,
}

/// Per-phase send counters for one party.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommStats {
    pub party: PartyId,
    pub phases: BTreeMap<Phase, PhaseCounters>,
}

impl CommStats {
    pub fn new(party: PartyId) -> Self {
        CommStats {
            party,
            phases: BTreeMap::new(),
        }
    }

    pub fn get(&self, phase: Phase) -> PhaseCounters {
        self.phases.get(&phase).copied().unwrap_or_default()
    }

    pub fn total_bytes(&self) -> u64 {
        self.phases.values().map(|c| c.bytes).sum()
    }

    pub(crate) fn entry(&mut self, phase: Phase) -> &mut PhaseCounters {
        self.phases.entry(phase).or_default()
    }
}

/// Simulated network time and measured compute time per phase.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PhaseTimings {
    pub sim_ns: BTreeMap<Phase, u64>,
    pub wall_ns: BTreeMap<Phase, u64>,
}

impl PhaseTimings {
    pub fn sim_seconds(&self, phase: Phase) -> f64 {
        self.sim_ns.get(&phase).copied().unwrap_or(0) as f64 * 1e-9
    }

    pub fn wall_seconds(&self, phase: Phase) -> f64 {
        self.wall_ns.get(&phase).copied().unwrap_or(0) as f64 * 1e-9
    }
}

/// `{phase: {party: {messages, bytes, rounds}}}`
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CommReport(pub BTreeMap<String, BTreeMap<String, PhaseCounters>>);

impl CommReport {
    pub fn from_stats<'a>(stats: impl IntoIterator<Item = &'a CommStats>) -> Self {
        let mut map: BTreeMap<String, BTreeMap<String, PhaseCounters>> = BTreeMap::new();
        for s in stats {
            for (phase, c) in &s.phases {
                map.entry(phase.label().to_string())
                    .or_default()
                    .insert(s.party.to_string(), *c);
            }
        }
        CommReport(map)
    }

    pub fn phase_bytes(&self, phase: Phase) -> u64 {
        self.0
            .get(phase.label())
            .map(|m| m.values().map(|c| c.bytes).sum())
            .unwrap_or(0)
    }

    pub fn phase_messages(&self, phase: Phase) -> u64 {
        self.0
            .get(phase.label())
            .map(|m| m.values().map(|c| c.messages).sum())
            .unwrap_or(0)
    }

    pub fn phase_rounds(&self, phase: Phase) -> u64 {
        self.0
            .get(phase.label())
            .and_then(|m| m.values().map(|c| c.rounds).max())
            .unwrap_or(0)
    }
}
