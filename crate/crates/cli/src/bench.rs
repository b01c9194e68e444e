//! Per-phase cost of insertion and detection under simulated networks.

use std::collections::BTreeMap;

use privmark_core::pipeline::{self, Context, SpliceInserter, WatermarkParams};
use privmark_core::runtime::{run_session, NetworkProfile, Phase, SessionConfig};
use privmark_core::sectable::build_sectable;
use privmark_core::sharing::PartyId;
use privmark_core::toy::ToyWorld;
use privmark_core::{Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

pub const PHASES: [Phase; 5] = [Phase::Embed, Phase::Cosine, Phase::Topk, Phase::Insert, Phase::Detect];

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BenchSetup {
    pub vocab: usize,
    pub dim: usize,
    pub words: usize,
    pub repetitions: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BenchRow {
    pub phase: String,
    /// profile name → seconds (simulated network time plus compute)
    pub seconds: BTreeMap<String, f64>,
    pub comm_mb: f64,
    pub bytes: u64,
    pub messages: u64,
    pub rounds: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BenchReport {
    pub setup: BenchSetup,
    pub profiles: Vec<NetworkProfile>,
    pub rows: Vec<BenchRow>,
}

struct Sample {
    sim: BTreeMap<Phase, f64>,
    wall: BTreeMap<Phase, f64>,
    comm: privmark_core::runtime::CommReport,
}

fn one_run(world: &ToyWorld, text: &str, session: &SessionConfig) -> Result<Sample> {
    let params = WatermarkParams::default();
    let out = run_session(session, |p| {
        let me = p.id();
        let table = build_sectable(
            p,
            (me == PartyId::P1).then_some(&world.vocab),
            (me == PartyId::P2).then_some(&world.set),
        )?;
        let emb = pipeline::setup(p, (me == PartyId::P2).then_some(&world.model))?;
        let ctx = Context {
            embedder: &emb,
            tokenizer: world.model.tokenizer(),
            params: &params,
        };
        let ins = pipeline::mark_insert(p, ctx, &table, (me == PartyId::P1).then_some(text), &SpliceInserter)?;
        let (t, w) = match &ins {
            Some(o) => (Some(o.text.as_str()), Some(&o.record.watermark_words[..])),
            None => (None, None),
        };
        pipeline::detect(p, ctx, t, w, false)?;
        p.set_phase(Phase::Program);
        Ok(())
    })?;
    Ok(Sample {
        sim: PHASES.iter().map(|&ph| (ph, out.sim_seconds(ph))).collect(),
        wall: PHASES.iter().map(|&ph| (ph, out.wall_seconds(ph))).collect(),
        comm: out.comm(),
    })
}

/// Compute time is profile-independent (shaping is virtual), so it is
/// averaged over all runs and added to each profile's network time.
pub fn run(setup: BenchSetup, profiles: Vec<NetworkProfile>, phases: &[Phase], base: &SessionConfig) -> Result<BenchReport> {
    if setup.repetitions == 0 {
        return Err(Error::Config("repetitions must be at least 1".into()));
    }
    let world = ToyWorld::generate(setup.seed, setup.vocab, setup.vocab, setup.dim, 2 * setup.vocab)?;
    let mut rng = ChaCha12Rng::seed_from_u64(setup.seed ^ 0x7465_7874);
    let text = world.text(&mut rng, setup.words);

    let mut sim: BTreeMap<(String, Phase), f64> = BTreeMap::new();
    let mut wall: BTreeMap<Phase, f64> = BTreeMap::new();
    let mut comm = None;
    let runs = (profiles.len() * setup.repetitions) as f64;
    for prof in &profiles {
        for _ in 0..setup.repetitions {
            let mut cfg = base.clone();
            cfg.profile = Some(prof.clone());
            let s = one_run(&world, &text, &cfg)?;
            for &ph in phases {
                *sim.entry((prof.name.clone(), ph)).or_default() += s.sim[&ph] / setup.repetitions as f64;
                *wall.entry(ph).or_default() += s.wall[&ph] / runs;
            }
            match &comm {
                None => comm = Some(s.comm),
                Some(c) if *c != s.comm => return Err(Error::Consistency("traffic differs between runs".into())),
                _ => {}
            }
        }
    }
    let comm = comm.unwrap();
    let rows = phases
        .iter()
        .map(|&ph| BenchRow {
            phase: ph.label().to_string(),
            seconds: profiles
                .iter()
                .map(|p| (p.name.clone(), sim[&(p.name.clone(), ph)] + wall[&ph]))
                .collect(),
            comm_mb: comm.phase_bytes(ph) as f64 / 1e6,
            bytes: comm.phase_bytes(ph),
            messages: comm.phase_messages(ph),
            rounds: comm.phase_rounds(ph),
        })
        .collect();
    Ok(BenchReport { setup, profiles, rows })
}

impl BenchReport {
    pub fn to_table(&self) -> String {
        let mut head = format!("{:<8}", "Phase");
        for p in &self.profiles {
            head.push_str(&format!(" {:>14}", format!("{} (s)", p.name)));
        }
        head.push_str(&format!(" {:>11} {:>8}\n", "Comm (MB)", "Rounds"));
        let mut s = head;
        for r in &self.rows {
            s.push_str(&format!("{:<8}", r.phase));
            for p in &self.profiles {
                s.push_str(&format!(" {:>14.6}", r.seconds[&p.name]));
            }
            s.push_str(&format!(" {:>11.6} {:>8}\n", r.comm_mb, r.rounds));
        }
        s
    }
}

pub fn parse_phases(list: &str) -> Result<Vec<Phase>> {
    list.split(',')
        .map(|s| {
            let s = s.trim();
            PHASES
                .iter()
                .copied()
                .find(|p| p.label().eq_ignore_ascii_case(s))
                .ok_or_else(|| Error::Config(format!("unknown phase {s:?}")))
        })
        .collect()
}
