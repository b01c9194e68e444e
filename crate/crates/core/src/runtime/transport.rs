use crossbeam_channel::{bounded, Receiver, RecvTimeoutError, Sender};
use std::time::Duration;

use super::frame::Frame;
use super::profile::NetworkProfile;
use crate::error::{Error, Result};
use crate::sharing::PartyId;

/// Per-channel queue depth of the in-memory transport.
const QUEUE_DEPTH: usize = 4096;

/// A frame plus the accounting metadata that travels with it: the sender's
/// phase-local dependency depth and the simulated time. `time_ns` is the
/// departure time when handed to `send` and the arrival time out of `recv`.
#[derive(Clone, Debug)]
pub struct Envelope {
    pub frame: Frame,
    pub depth: u32,
    pub time_ns: u64,
}

/// Duplex channels from one party to each of the other two.
/// Per-channel FIFO, message boundaries preserved, blocking `recv`.
pub trait Transport: Send {
    fn send(&mut self, to: PartyId, env: Envelope) -> Result<()>;
    fn recv(&mut self, from: PartyId) -> Result<Envelope>;
}

struct Link {
    tx: Sender<Envelope>,
    busy_until_ns: u64,
}

/// In-process transport built from bounded crossbeam queues, optionally
/// shaped by a [`NetworkProfile`].
pub struct MemoryTransport {
    me: PartyId,
    out: [Option<Link>; 3],
    inbox: [Option<Receiver<Envelope>>; 3],
    profile: Option<NetworkProfile>,
    timeout: Duration,
}

impl MemoryTransport {
    /// Fully connected in-memory mesh for P1, P2, P3.
    pub fn mesh(timeout: Duration) -> [MemoryTransport; 3] {
        let mut out: [[Option<Link>; 3]; 3] = Default::default();
        let mut inbox: [[Option<Receiver<Envelope>>; 3]; 3] = Default::default();
        for from in 0..3 {
            for to in 0..3 {
                if from != to {
                    let (tx, rx) = bounded(QUEUE_DEPTH);
                    out[from][to] = Some(Link { tx, busy_until_ns: 0 });
                    inbox[to][from] = Some(rx);
                }
            }
        }
        let mut out = out.into_iter();
        let mut inbox = inbox.into_iter();
        PartyId::ALL.map(|me| MemoryTransport {
            me,
            out: out.next().unwrap(),
            inbox: inbox.next().unwrap(),
            profile: None,
            timeout,
        })
    }

    /// Delay every outgoing message by latency + payload_bits / bandwidth,
    /// queued behind earlier messages on the same channel.
    pub fn shaped(mut self, profile: NetworkProfile) -> Self {
        self.profile = Some(profile);
        self
    }

    pub fn profile(&self) -> Option<&NetworkProfile> {
        self.profile.as_ref()
    }
}

/// Shape an in-memory transport with a network profile.
pub fn shape(profile: NetworkProfile, transport: MemoryTransport) -> MemoryTransport {
    transport.shaped(profile)
}

impl Transport for MemoryTransport {
    fn send(&mut self, to: PartyId, mut env: Envelope) -> Result<()> {
        let link = self.out[to.index()]
            .as_mut()
            .ok_or_else(|| Error::Transport(format!("{} has no channel to {to}", self.me)))?;
        if let Some(p) = &self.profile {
            let start = env.time_ns.max(link.busy_until_ns);
            let tx_done = start + p.transmit_ns(env.frame.payload.len());
            link.busy_until_ns = tx_done;
            env.time_ns = tx_done + p.latency_ns();
        }
        link.tx
            .send(env)
            .map_err(|_| Error::Transport(format!("{to} hung up")))
    }

    fn recv(&mut self, from: PartyId) -> Result<Envelope> {
        let rx = self.inbox[from.index()]
            .as_ref()
            .ok_or_else(|| Error::Transport(format!("{} has no channel from {from}", self.me)))?;
        rx.recv_timeout(self.timeout).map_err(|e| match e {
            RecvTimeoutError::Timeout => Error::Timeout(format!("message from {from}")),
            RecvTimeoutError::Disconnected => Error::Transport(format!("{from} hung up")),
        })
    }
}
