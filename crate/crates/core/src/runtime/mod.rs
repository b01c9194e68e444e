//! Party runtime: session setup, framed messaging, accounting and the
//! three-party session driver.
//!
//! Each party runs the same program on its own thread (or process) and talks
//! to the other two only through its [`Transport`]. Every message is counted
//! in [`CommStats`] under the current [`Phase`]; rounds are the longest chain
//! of send→recv dependencies within a phase (a Lamport depth that restarts at
//! each phase change).

pub mod frame;
pub mod profile;
pub mod stats;
pub mod tcp;
pub mod transport;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::net::SocketAddr;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::fixed::{FixedPoint, DEFAULT_FRAC_BITS};
use crate::ring::Ring;
use crate::sharing::{PartyId, PrfKey, ZeroShareContext};

pub use frame::Frame;
pub use profile::NetworkProfile;
pub use stats::{CommReport, CommStats, Phase, PhaseCounters, PhaseTimings};
pub use tcp::TcpTransport;
pub use transport::{shape, Envelope, MemoryTransport, Transport};

/// Parameters every party must agree on; checked in the setup handshake.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SessionConfig {
    pub ring_bits: u32,
    pub frac_bits: u32,
    pub seed: u64,
    pub session_id: u64,
    pub profile: Option<NetworkProfile>,
    pub timeout_ms: u64,
    /// Keep a copy of every sent payload (tests and audits only).
    pub record_frames: bool,
    /// Cross-check replicated components after each protocol step. Reveals
    /// share components to neighbours, so it is for tests only.
    pub debug_verify: bool,
}

impl Default for SessionConfig {
    fn default() -> Self {
        SessionConfig {
            ring_bits: 64,
            frac_bits: DEFAULT_FRAC_BITS,
            seed: 0,
            session_id: 1,
            profile: None,
            timeout_ms: 60_000,
            record_frames: false,
            debug_verify: false,
        }
    }
}

impl SessionConfig {
    pub fn with_seed(seed: u64) -> Self {
        SessionConfig {
            seed,
            session_id: seed ^ 0x5052_4956_4d41_524b,
            ..Default::default()
        }
    }

    pub fn ring(&self) -> Result<Ring> {
        Ring::new(self.ring_bits)
    }

    pub fn fixed(&self) -> Result<FixedPoint> {
        FixedPoint::new(self.ring()?, self.frac_bits)
    }

    pub fn timeout(&self) -> Duration {
        Duration::from_millis(self.timeout_ms)
    }
}

/// What a sent payload contains, for transcript audits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FrameKind {
    /// Masked share components.
    Share,
    /// Values that are public by protocol design (sizes, handshake fields).
    Public,
    /// Fresh key material or seed contributions.
    Key,
    /// Debug consistency checks.
    Debug,
}

#[derive(Clone, Debug)]
pub struct RecordedFrame {
    pub from: PartyId,
    pub to: PartyId,
    pub phase: Phase,
    pub kind: FrameKind,
    pub payload: Vec<u8>,
}

/// SHA-256 over every frame a party sent, in order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranscriptDigest {
    pub frames: u64,
    pub bytes: u64,
    pub sha256: String,
}

struct PhaseClock {
    phase: Phase,
    depth: u32,
    max_sent_depth: u32,
    start_sim_ns: u64,
    start_wall: Instant,
}

/// One party's protocol context.
pub struct Party {
    id: PartyId,
    ring: Ring,
    fixed: FixedPoint,
    session_id: u64,
    transport: Box<dyn Transport>,
    zero: ZeroShareContext,
    rng: ChaCha12Rng,
    stats: CommStats,
    timings: PhaseTimings,
    clock: PhaseClock,
    sim_ns: u64,
    seq_out: [u64; 3],
    seq_in: [u64; 3],
    transcript: Sha256,
    transcript_frames: u64,
    transcript_bytes: u64,
    record_frames: bool,
    recorded: Vec<RecordedFrame>,
    debug_verify: bool,
}

impl Party {
    /// Handshake parameters with both peers and establish the pairwise PRF keys.
    pub fn setup(id: PartyId, config: &SessionConfig, transport: Box<dyn Transport>) -> Result<Party> {
        let ring = config.ring()?;
        let fixed = config.fixed()?;
        let mut rng = ChaCha12Rng::seed_from_u64(
            config.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (id.index() as u64 + 1),
        );
        let mut party = Party {
            id,
            ring,
            fixed,
            session_id: config.session_id,
            transport,
            zero: ZeroShareContext::new([0; 16], [0; 16]),
            rng: ChaCha12Rng::seed_from_u64(0),
            stats: CommStats::new(id),
            timings: PhaseTimings::default(),
            clock: PhaseClock {
                phase: Phase::Setup,
                depth: 0,
                max_sent_depth: 0,
                start_sim_ns: 0,
                start_wall: Instant::now(),
            },
            sim_ns: 0,
            seq_out: [0; 3],
            seq_in: [0; 3],
            transcript: Sha256::new(),
            transcript_frames: 0,
            transcript_bytes: 0,
            record_frames: config.record_frames,
            recorded: Vec::new(),
            debug_verify: config.debug_verify,
        };

        let mut hello = Vec::with_capacity(16);
        hello.extend_from_slice(&config.session_id.to_le_bytes());
        hello.extend_from_slice(&config.ring_bits.to_le_bytes());
        hello.extend_from_slice(&config.frac_bits.to_le_bytes());
        for peer in [id.next(), id.prev()] {
            party.send_bytes(peer, hello.clone(), FrameKind::Public)?;
        }
        for peer in [id.next(), id.prev()] {
            let env = party.transport.recv(peer)?;
            let theirs = env.frame.payload.clone();
            if env.frame.session != config.session_id || theirs != hello {
                return Err(Error::Config(format!(
                    "{id} and {peer} disagree on session parameters"
                )));
            }
            party.accept(peer, env)?;
        }

        let mut key_next: PrfKey = [0; 16];
        rng.fill_bytes(&mut key_next);
        party.send_bytes(id.next(), key_next.to_vec(), FrameKind::Key)?;
        let key_prev: PrfKey = party
            .recv_bytes(id.prev())?
            .try_into()
            .map_err(|_| Error::Desync("malformed key frame".into()))?;
        party.zero = ZeroShareContext::new(key_prev, key_next);
        party.rng = rng;
        party.set_phase(Phase::Program);
        Ok(party)
    }

    pub fn id(&self) -> PartyId {
        self.id
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn fixed(&self) -> FixedPoint {
        self.fixed
    }

    pub fn frac_bits(&self) -> u32 {
        self.fixed.frac_bits
    }

    pub fn session_id(&self) -> u64 {
        self.session_id
    }

    /// Private randomness of this party.
    pub fn rng(&mut self) -> &mut ChaCha12Rng {
        &mut self.rng
    }

    pub fn zero_shares(&mut self, n: usize) -> Vec<u64> {
        self.zero.next_zero_shares(self.ring, n)
    }

    pub fn bool_zero_shares(&mut self, n: usize) -> Vec<u64> {
        self.zero.next_bool_zero_shares(self.ring, n)
    }

    /// Randomness shared with the previous party.
    pub fn prf_with_prev(&mut self, n: usize) -> Vec<u64> {
        self.zero.draw_with_prev(self.ring, n)
    }

    /// Randomness shared with the next party.
    pub fn prf_with_next(&mut self, n: usize) -> Vec<u64> {
        self.zero.draw_with_next(self.ring, n)
    }

    pub fn prf_counters(&self) -> (u64, u64) {
        self.zero.counters()
    }

    pub fn debug_verify_enabled(&self) -> bool {
        self.debug_verify
    }

    pub fn phase(&self) -> Phase {
        self.clock.phase
    }

    /// Close the current phase and start accounting under `phase`.
    pub fn set_phase(&mut self, phase: Phase) {
        self.close_phase();
        self.clock = PhaseClock {
            phase,
            depth: 0,
            max_sent_depth: 0,
            start_sim_ns: self.sim_ns,
            start_wall: Instant::now(),
        };
    }

    fn close_phase(&mut self) {
        let c = &self.clock;
        let rounds = c.depth.max(c.max_sent_depth) as u64;
        let sim = self.sim_ns - c.start_sim_ns;
        let wall = c.start_wall.elapsed().as_nanos() as u64;
        let phase = c.phase;
        if rounds > 0 || self.stats.phases.contains_key(&phase) {
            self.stats.entry(phase).rounds += rounds;
        }
        *self.timings.sim_ns.entry(phase).or_default() += sim;
        *self.timings.wall_ns.entry(phase).or_default() += wall;
    }

    /// Simulated clock in nanoseconds.
    pub fn sim_time_ns(&self) -> u64 {
        self.sim_ns
    }

    pub fn send_bytes(&mut self, to: PartyId, payload: Vec<u8>, kind: FrameKind) -> Result<()> {
        self.send_frame(to, payload, kind, true)
    }

    fn send_frame(&mut self, to: PartyId, payload: Vec<u8>, kind: FrameKind, account: bool) -> Result<()> {
        if to == self.id {
            return Err(Error::Transport(format!("{} cannot send to itself", self.id)));
        }
        let phase = if account { self.clock.phase } else { Phase::Debug };
        let frame = Frame {
            session: self.session_id,
            phase: phase.tag(),
            seq: self.seq_out[to.index()],
            payload,
        };
        self.seq_out[to.index()] += 1;

        let len = frame.payload.len() as u64;
        if account {
            let c = self.stats.entry(phase);
            c.messages += 1;
            c.bytes += len;
        }
        let bytes = frame.encode();
        self.transcript.update(&bytes);
        self.transcript_frames += 1;
        self.transcript_bytes += bytes.len() as u64;
        if self.record_frames {
            self.recorded.push(RecordedFrame {
                from: self.id,
                to,
                phase,
                kind,
                payload: frame.payload.clone(),
            });
        }
        let depth = self.clock.depth + 1;
        if account {
            self.clock.max_sent_depth = self.clock.max_sent_depth.max(depth);
        }
        self.transport.send(
            to,
            Envelope {
                frame,
                depth,
                time_ns: self.sim_ns,
            },
        )
    }

    pub fn recv_bytes(&mut self, from: PartyId) -> Result<Vec<u8>> {
        self.recv_frame(from, true)
    }

    fn recv_frame(&mut self, from: PartyId, account: bool) -> Result<Vec<u8>> {
        let env = self.transport.recv(from)?;
        let expected_phase = if account { self.clock.phase } else { Phase::Debug };
        if env.frame.phase != expected_phase.tag() {
            return Err(Error::Desync(format!(
                "{} in phase {} got a frame tagged {} from {from}",
                self.id,
                expected_phase,
                Phase::from_tag(env.frame.phase).map(|p| p.label()).unwrap_or("?")
            )));
        }
        let payload = env.frame.payload.clone();
        if account {
            self.accept(from, env)?;
        } else {
            self.check_header(from, &env)?;
            self.sim_ns = self.sim_ns.max(env.time_ns);
        }
        Ok(payload)
    }

    fn check_header(&mut self, from: PartyId, env: &Envelope) -> Result<()> {
        if env.frame.session != self.session_id {
            return Err(Error::Desync(format!(
                "frame from {from} belongs to session {:#x}",
                env.frame.session
            )));
        }
        let want = self.seq_in[from.index()];
        if env.frame.seq != want {
            return Err(Error::Desync(format!(
                "frame sequence gap from {from}: expected {want}, got {}",
                env.frame.seq
            )));
        }
        self.seq_in[from.index()] += 1;
        Ok(())
    }

    fn accept(&mut self, from: PartyId, env: Envelope) -> Result<()> {
        self.check_header(from, &env)?;
        self.clock.depth = self.clock.depth.max(env.depth);
        self.sim_ns = self.sim_ns.max(env.time_ns);
        Ok(())
    }

    pub fn send_elems(&mut self, to: PartyId, elems: &[u64]) -> Result<()> {
        let mut payload = Vec::new();
        self.ring.encode_elems(elems, &mut payload);
        self.send_bytes(to, payload, FrameKind::Share)
    }

    pub fn send_public(&mut self, to: PartyId, elems: &[u64]) -> Result<()> {
        let mut payload = Vec::new();
        self.ring.encode_elems(elems, &mut payload);
        self.send_bytes(to, payload, FrameKind::Public)
    }

    /// Receive exactly `n` ring elements.
    pub fn recv_elems(&mut self, from: PartyId, n: usize) -> Result<Vec<u64>> {
        let payload = self.recv_bytes(from)?;
        let elems = self.ring.decode_elems(&payload)?;
        if elems.len() != n {
            return Err(Error::Desync(format!(
                "{} expected {n} elements from {from}, got {}",
                self.id,
                elems.len()
            )));
        }
        Ok(elems)
    }

    /// Send to the previous party and receive the same number of elements
    /// from the next one: the resharing step of multiplication.
    pub fn reshare(&mut self, mine: &[u64]) -> Result<Vec<u64>> {
        self.send_elems(self.id.prev(), mine)?;
        self.recv_elems(self.id.next(), mine.len())
    }

    /// Exchange PRF counters with both neighbours; a mismatch means the
    /// correlated randomness is out of lockstep.
    pub fn check_sync(&mut self) -> Result<()> {
        let (with_prev, with_next) = self.zero.counters();
        self.send_frame(self.id.next(), with_next.to_le_bytes().to_vec(), FrameKind::Debug, false)?;
        self.send_frame(self.id.prev(), with_prev.to_le_bytes().to_vec(), FrameKind::Debug, false)?;
        let theirs_prev = self.recv_frame(self.id.prev(), false)?;
        let theirs_next = self.recv_frame(self.id.next(), false)?;
        let read = |b: Vec<u8>| -> Result<u64> {
            Ok(u64::from_le_bytes(
                b.try_into().map_err(|_| Error::Desync("malformed counter".into()))?,
            ))
        };
        let (p, n) = (read(theirs_prev)?, read(theirs_next)?);
        if p != with_prev || n != with_next {
            return Err(Error::Desync(format!(
                "{} PRF counters ({with_prev}, {with_next}) vs neighbours ({p}, {n})",
                self.id
            )));
        }
        Ok(())
    }

    /// Debug verifier: send my second component to next, who compares it
    /// with its first component. No-op unless enabled in the session config.
    pub fn verify_replication(&mut self, first: &[u64], second: &[u64]) -> Result<()> {
        if !self.debug_verify {
            return Ok(());
        }
        let mut payload = Vec::new();
        self.ring.encode_elems(second, &mut payload);
        self.send_frame(self.id.next(), payload, FrameKind::Debug, false)?;
        let theirs = self.ring.decode_elems(&self.recv_frame(self.id.prev(), false)?)?;
        if theirs != first {
            return Err(Error::Consistency(format!(
                "{}'s first component disagrees with {}'s second",
                self.id,
                self.id.prev()
            )));
        }
        Ok(())
    }

    pub fn stats(&self) -> &CommStats {
        &self.stats
    }

    pub fn timings(&self) -> &PhaseTimings {
        &self.timings
    }

    pub fn recorded_frames(&self) -> &[RecordedFrame] {
        &self.recorded
    }

    /// Close the open phase and hand back accounting.
    pub fn finish(mut self) -> PartyReport {
        self.close_phase();
        PartyReport {
            party: self.id,
            stats: self.stats,
            timings: self.timings,
            transcript: TranscriptDigest {
                frames: self.transcript_frames,
                bytes: self.transcript_bytes,
                sha256: hex::encode(self.transcript.finalize()),
            },
            frames: self.recorded,
        }
    }
}

#[derive(Clone, Debug)]
pub struct PartyReport {
    pub party: PartyId,
    pub stats: CommStats,
    pub timings: PhaseTimings,
    pub transcript: TranscriptDigest,
    pub frames: Vec<RecordedFrame>,
}

/// Outputs and accounting of a three-party session.
#[derive(Debug)]
pub struct SessionOutput<T> {
    pub outputs: [T; 3],
    pub reports: [PartyReport; 3],
}

impl<T> SessionOutput<T> {
    pub fn comm(&self) -> CommReport {
        CommReport::from_stats(self.reports.iter().map(|r| &r.stats))
    }

    /// Simulated seconds of a phase: the slowest party.
    pub fn sim_seconds(&self, phase: Phase) -> f64 {
        self.reports
            .iter()
            .map(|r| r.timings.sim_seconds(phase))
            .fold(0.0, f64::max)
    }

    pub fn wall_seconds(&self, phase: Phase) -> f64 {
        self.reports
            .iter()
            .map(|r| r.timings.wall_seconds(phase))
            .fold(0.0, f64::max)
    }

    pub fn output(&self, p: PartyId) -> &T {
        &self.outputs[p.index()]
    }
}

/// Where the three parties of an in-process session talk.
#[derive(Clone, Debug)]
pub enum Topology {
    InMemory,
    /// Loopback or LAN endpoints, one listener per party.
    Tcp([SocketAddr; 3]),
}

/// Run `program` at all three parties over in-memory channels shaped by the
/// config's network profile.
pub fn run_session<T, F>(config: &SessionConfig, program: F) -> Result<SessionOutput<T>>
where
    T: Send,
    F: Fn(&mut Party) -> Result<T> + Sync,
{
    run_session_on(config, &Topology::InMemory, program)
}

pub fn run_session_on<T, F>(config: &SessionConfig, topology: &Topology, program: F) -> Result<SessionOutput<T>>
where
    T: Send,
    F: Fn(&mut Party) -> Result<T> + Sync,
{
    if let Some(p) = &config.profile {
        p.validate()?;
    }
    let mut transports: Vec<Option<Box<dyn Transport>>> = match topology {
        Topology::InMemory => MemoryTransport::mesh(config.timeout())
            .into_iter()
            .map(|t| {
                let t = match &config.profile {
                    Some(p) => t.shaped(p.clone()),
                    None => t,
                };
                Some(Box::new(t) as Box<dyn Transport>)
            })
            .collect(),
        Topology::Tcp(_) => vec![None, None, None],
    };

    let program = &program;
    let results: Vec<Result<(T, PartyReport)>> = std::thread::scope(|scope| {
        let handles: Vec<_> = PartyId::ALL
            .into_iter()
            .map(|id| {
                let transport = transports[id.index()].take();
                scope.spawn(move || -> Result<(T, PartyReport)> {
                    let transport = match (transport, topology) {
                        (Some(t), _) => t,
                        (None, Topology::Tcp(addrs)) => Box::new(TcpTransport::establish(
                            id,
                            addrs[id.index()],
                            addrs,
                            config.timeout(),
                        )?) as Box<dyn Transport>,
                        (None, Topology::InMemory) => unreachable!(),
                    };
                    let mut party = Party::setup(id, config, transport)?;
                    let out = program(&mut party)?;
                    Ok((out, party.finish()))
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| {
                h.join()
                    .unwrap_or_else(|_| Err(Error::Transport("party thread panicked".into())))
            })
            .collect()
    });

    if results.iter().any(|r| r.is_err()) {
        // A failing party drops its channels, so its peers report transport
        // errors; surface the originating error instead.
        let mut errs: Vec<Error> = results.into_iter().filter_map(|r| r.err()).collect();
        let pos = errs
            .iter()
            .position(|e| !matches!(e, Error::Transport(_) | Error::Timeout(_)))
            .unwrap_or(0);
        return Err(errs.swap_remove(pos));
    }
    let mut outs = Vec::with_capacity(3);
    let mut reports = Vec::with_capacity(3);
    for r in results {
        let (o, rep) = r?;
        outs.push(o);
        reports.push(rep);
    }
    let outputs: [T; 3] = outs.try_into().map_err(|_| Error::Transport("lost output".into()))?;
    let reports: [PartyReport; 3] = reports
        .try_into()
        .map_err(|_| Error::Transport("lost report".into()))?;
    Ok(SessionOutput { outputs, reports })
}

/// Run one party of a session over an established transport.
pub fn run_party<T, F>(id: PartyId, config: &SessionConfig, transport: Box<dyn Transport>, program: F) -> Result<(T, PartyReport)>
where
    F: FnOnce(&mut Party) -> Result<T>,
{
    let mut party = Party::setup(id, config, transport)?;
    let out = program(&mut party)?;
    Ok((out, party.finish()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn echo(p: &mut Party) -> Result<u64> {
        let me = p.id().index() as u64 + 100;
        p.send_elems(p.id().next(), &[me])?;
        Ok(p.recv_elems(p.id().prev(), 1)?[0])
    }

    #[test]
    fn echo_accounting() {
        let out = run_session(&SessionConfig::with_seed(1), echo).unwrap();
        assert_eq!(out.outputs, [102, 100, 101]);
        for r in &out.reports {
            let c = r.stats.get(Phase::Program);
            assert_eq!((c.messages, c.bytes, c.rounds), (1, 8, 1));
        }
    }

    #[test]
    fn latency_accumulates_over_rounds() {
        let cfg = SessionConfig {
            profile: Some(NetworkProfile::new("slow", f64::INFINITY, 0.010).unwrap()),
            ..SessionConfig::with_seed(2)
        };
        let out = run_session(&cfg, |p| {
            for _ in 0..3 {
                echo(p)?;
            }
            Ok(())
        })
        .unwrap();
        assert!(out.sim_seconds(Phase::Program) >= 0.030 - 1e-12);
        assert_eq!(out.comm().phase_rounds(Phase::Program), 3);
    }

    #[test]
    fn ideal_profile_matches_unshaped() {
        let run = |profile| {
            let cfg = SessionConfig {
                profile,
                ..SessionConfig::with_seed(3)
            };
            run_session(&cfg, echo).unwrap().sim_seconds(Phase::Program)
        };
        assert_eq!(run(None), run(Some(NetworkProfile::ideal())));
    }

    #[test]
    fn shaped_channel_keeps_fifo() {
        let cfg = SessionConfig {
            profile: Some(NetworkProfile::wan()),
            ..SessionConfig::with_seed(4)
        };
        let out = run_session(&cfg, |p| {
            if p.id() == PartyId::P1 {
                p.send_elems(PartyId::P2, &vec![1; 100_000])?;
                p.send_elems(PartyId::P2, &[2])?;
            }
            if p.id() == PartyId::P2 {
                let a = p.recv_elems(PartyId::P1, 100_000)?;
                let b = p.recv_elems(PartyId::P1, 1)?;
                return Ok((a[0], b[0], p.sim_time_ns()));
            }
            Ok((0, 0, 0))
        })
        .unwrap();
        let (a, b, t) = out.outputs[1];
        assert_eq!((a, b), (1, 2));
        // 800 kB at 400 Mbps = 16 ms of transmission plus 10 ms latency
        assert!(t >= 26_000_000, "{t}");
    }

    #[test]
    fn mismatched_parameters_are_rejected() {
        let mesh = MemoryTransport::mesh(Duration::from_secs(5));
        let results: Vec<Result<Party>> = std::thread::scope(|s| {
            let hs: Vec<_> = mesh
                .into_iter()
                .enumerate()
                .map(|(i, t)| {
                    s.spawn(move || {
                        let cfg = SessionConfig {
                            frac_bits: if i == 2 { 16 } else { 18 },
                            ..SessionConfig::with_seed(5)
                        };
                        Party::setup(PartyId::from_index(i), &cfg, Box::new(t))
                    })
                })
                .collect();
            hs.into_iter().map(|h| h.join().unwrap()).collect()
        });
        assert!(results.iter().any(|r| matches!(r, Err(Error::Config(_)))));
    }

    #[test]
    fn determinism_of_transcripts() {
        let run = || {
            let out = run_session(&SessionConfig::with_seed(6), |p| {
                let z = p.zero_shares(4);
                p.reshare(&z)
            })
            .unwrap();
            let comm = out.comm();
            (out.outputs, out.reports.map(|r| r.transcript), comm)
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn counters_stay_in_lockstep() {
        run_session(&SessionConfig::with_seed(7), |p| {
            p.zero_shares(10);
            p.check_sync()
        })
        .unwrap();
        let err = run_session(&SessionConfig::with_seed(7), |p| {
            if p.id() == PartyId::P2 {
                p.prf_with_next(1);
            }
            p.check_sync()
        })
        .unwrap_err();
        assert!(matches!(err, Error::Desync(_)), "{err}");
    }

    #[test]
    fn wrong_length_is_desync() {
        let err = run_session(&SessionConfig::with_seed(8), |p| {
            p.send_elems(p.id().next(), &[1, 2])?;
            p.recv_elems(p.id().prev(), 3)
        })
        .unwrap_err();
        assert!(matches!(err, Error::Desync(_)));
    }

    #[test]
    fn tcp_loopback_echo() {
        let addrs: [SocketAddr; 3] = std::array::from_fn(|_| {
            let l = std::net::TcpListener::bind("127.0.0.1:0").unwrap();
            l.local_addr().unwrap()
        });
        let cfg = SessionConfig::with_seed(9);
        let out = run_session_on(&cfg, &Topology::Tcp(addrs), echo).unwrap();
        assert_eq!(out.outputs, [102, 100, 101]);
        let mem = run_session(&cfg, echo).unwrap();
        assert_eq!(out.comm(), mem.comm());
        assert_eq!(
            out.reports.clone().map(|r| r.transcript),
            mem.reports.clone().map(|r| r.transcript)
        );
    }
}
