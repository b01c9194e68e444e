//! TCP transport: one long-lived duplex connection per party pair.
//!
//! The higher-numbered party dials the lower-numbered one and announces its
//! id with a single byte. Each frame on the wire is followed by a 4-byte
//! little-endian depth trailer used for round accounting. Background threads
//! move frames between sockets and FIFO queues so that simultaneous large
//! sends cannot deadlock. There is no reconnection: any socket error surfaces
//! as a transport error. Dropping the transport flushes queued frames.

use crossbeam_channel::{unbounded, Receiver, RecvTimeoutError, Sender};
use std::io::{BufReader, BufWriter, Read, Write};
use std::net::{SocketAddr, TcpListener, TcpStream};
use std::thread;
use std::time::{Duration, Instant};

use super::frame::Frame;
use super::transport::{Envelope, Transport};
use crate::error::{Error, Result};
use crate::sharing::PartyId;

type Incoming = std::result::Result<Envelope, String>;

struct Peer {
    tx: Option<Sender<Envelope>>,
    rx: Receiver<Incoming>,
    writer: Option<thread::JoinHandle<()>>,
}

impl Drop for Peer {
    fn drop(&mut self) {
        self.tx.take();
        if let Some(w) = self.writer.take() {
            let _ = w.join();
        }
    }
}

pub struct TcpTransport {
    me: PartyId,
    peers: [Option<Peer>; 3],
    timeout: Duration,
}

impl TcpTransport {
    /// Bind `listen`, dial lower-numbered peers and accept higher-numbered ones.
    pub fn establish(
        me: PartyId,
        listen: SocketAddr,
        peers: &[SocketAddr; 3],
        timeout: Duration,
    ) -> Result<Self> {
        let listener = TcpListener::bind(listen)
            .map_err(|e| Error::Transport(format!("{me} cannot listen on {listen}: {e}")))?;
        Self::establish_with(me, listener, peers, timeout)
    }

    pub fn establish_with(
        me: PartyId,
        listener: TcpListener,
        peers: &[SocketAddr; 3],
        timeout: Duration,
    ) -> Result<Self> {
        let deadline = Instant::now() + timeout;
        let mut streams: [Option<TcpStream>; 3] = Default::default();

        for lower in (0..me.index()).map(PartyId::from_index) {
            let mut s = dial(peers[lower.index()], deadline)
                .map_err(|e| Error::Transport(format!("{me} cannot reach {lower}: {e}")))?;
            s.write_all(&[me.index() as u8])?;
            streams[lower.index()] = Some(s);
        }

        listener.set_nonblocking(true)?;
        let expected = 2 - me.index();
        let mut accepted = 0;
        while accepted < expected {
            match listener.accept() {
                Ok((mut s, _)) => {
                    s.set_nonblocking(false)?;
                    s.set_read_timeout(Some(timeout))?;
                    let mut id = [0u8; 1];
                    s.read_exact(&mut id)
                        .map_err(|e| Error::Transport(format!("handshake read failed: {e}")))?;
                    let who = id[0] as usize;
                    if who <= me.index() || who > 2 || streams[who].is_some() {
                        return Err(Error::Transport(format!("unexpected peer id {who}")));
                    }
                    streams[who] = Some(s);
                    accepted += 1;
                }
                Err(e) if e.kind() == std::io::ErrorKind::WouldBlock => {
                    if Instant::now() > deadline {
                        return Err(Error::Transport(format!(
                            "{me} timed out waiting for {} peer connection(s)",
                            expected - accepted
                        )));
                    }
                    thread::sleep(Duration::from_millis(5));
                }
                Err(e) => return Err(Error::Transport(e.to_string())),
            }
        }

        let mut out: [Option<Peer>; 3] = Default::default();
        for (i, s) in streams.into_iter().enumerate() {
            if let Some(s) = s {
                s.set_read_timeout(None)?;
                s.set_nodelay(true)?;
                out[i] = Some(spawn_peer(s)?);
            }
        }
        Ok(TcpTransport {
            me,
            peers: out,
            timeout,
        })
    }
}

fn dial(addr: SocketAddr, deadline: Instant) -> std::io::Result<TcpStream> {
    loop {
        let remaining = deadline.saturating_duration_since(Instant::now());
        match TcpStream::connect_timeout(&addr, remaining.max(Duration::from_millis(50))) {
            Ok(s) => return Ok(s),
            Err(e) => {
                if Instant::now() >= deadline {
                    return Err(e);
                }
                thread::sleep(Duration::from_millis(20));
            }
        }
    }
}

fn spawn_peer(stream: TcpStream) -> Result<Peer> {
    let (out_tx, out_rx) = unbounded::<Envelope>();
    let (in_tx, in_rx) = unbounded::<Incoming>();

    let mut writer = BufWriter::new(stream.try_clone()?);
    let handle = thread::spawn(move || {
        for env in out_rx {
            let ok = env
                .frame
                .write_to(&mut writer)
                .and_then(|_| writer.write_all(&env.depth.to_le_bytes()))
                .and_then(|_| writer.flush());
            if ok.is_err() {
                break;
            }
        }
        let _ = writer.get_ref().shutdown(std::net::Shutdown::Write);
    });

    let mut reader = BufReader::new(stream);
    thread::spawn(move || loop {
        let msg = Frame::read_from(&mut reader).and_then(|frame| {
            let mut depth = [0u8; 4];
            reader.read_exact(&mut depth)?;
            Ok(Envelope {
                frame,
                depth: u32::from_le_bytes(depth),
                time_ns: 0,
            })
        });
        let stop = msg.is_err();
        if in_tx.send(msg.map_err(|e| e.to_string())).is_err() || stop {
            break;
        }
    });

    Ok(Peer {
        tx: Some(out_tx),
        rx: in_rx,
        writer: Some(handle),
    })
}

impl Transport for TcpTransport {
    fn send(&mut self, to: PartyId, env: Envelope) -> Result<()> {
        let peer = self.peers[to.index()]
            .as_ref()
            .ok_or_else(|| Error::Transport(format!("{} has no connection to {to}", self.me)))?;
        peer.tx
            .as_ref()
            .expect("sender lives until drop")
            .send(env)
            .map_err(|_| Error::Transport(format!("connection to {to} closed")))
    }

    fn recv(&mut self, from: PartyId) -> Result<Envelope> {
        let peer = self.peers[from.index()]
            .as_ref()
            .ok_or_else(|| Error::Transport(format!("{} has no connection from {from}", self.me)))?;
        match peer.rx.recv_timeout(self.timeout) {
            Ok(Ok(env)) => Ok(env),
            Ok(Err(e)) => Err(Error::Transport(format!("connection from {from}: {e}"))),
            Err(RecvTimeoutError::Timeout) => Err(Error::Timeout(format!("message from {from}"))),
            Err(RecvTimeoutError::Disconnected) => {
                Err(Error::Transport(format!("connection from {from} closed")))
            }
        }
    }
}
