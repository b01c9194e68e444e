//! Vocabulary and embedding-set loading, and the secret-shared word table.
//!
//! P1 holds the vocabulary, P2 the embedding set. The three parties derive a
//! permutation of the embedding rows from a jointly sampled seed; word i is
//! bound to row perm[i], and P2 deals those rows (normalized) in word order.
//! Only P1 keeps the word/index maps.

use rand::seq::SliceRandom;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::fixed::FixedPoint;
use crate::ring::Ring;
use crate::runtime::{Frame, FrameKind, Party, Phase};
use crate::sharing::{announce, deal_matrix, PartyId, SecretMatrix, SecretVector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vocabulary {
    words: Vec<String>,
    index: HashMap<String, usize>,
}

impl Vocabulary {
    pub fn from_words<I, S>(words: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut out = Vocabulary {
            words: Vec::new(),
            index: HashMap::new(),
        };
        for w in words {
            let w = w.as_ref().trim().to_lowercase();
            if w.is_empty() {
                continue;
            }
            if out.index.contains_key(&w) {
                return Err(Error::DuplicateWord(w));
            }
            out.index.insert(w.clone(), out.words.len());
            out.words.push(w);
        }
        Ok(out)
    }

    /// One word per line; blank lines are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        Self::from_words(text.lines())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn word(&self, idx: usize) -> Option<&str> {
        self.words.get(idx).map(String::as_str)
    }

    pub fn index_of(&self, word: &str) -> Option<usize> {
        self.index.get(word).copied()
    }
}

pub fn load_vocabulary(path: impl AsRef<Path>) -> Result<Vocabulary> {
    Vocabulary::load(path)
}

const BINARY_MAGIC: &[u8; 8] = b"PMEMBF64";

/// N×d real matrix with L2-normalized rows.
#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddingSet {
    n: usize,
    d: usize,
    data: Vec<f64>,
}

/// Scale a row to unit L2 norm; `None` for a zero row.
pub fn normalize(row: &[f64]) -> Option<Vec<f64>> {
    let norm = row.iter().map(|v| v * v).sum::<f64>().sqrt();
    (norm > 0.0).then(|| row.iter().map(|v| v / norm).collect())
}

impl EmbeddingSet {
    /// Validate and normalize the rows.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let d = rows.first().map(|r| r.len()).unwrap_or(0);
        let mut data = Vec::with_capacity(rows.len() * d);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != d {
                return Err(Error::Format(format!("row {i} has {} values, expected {d}", r.len())));
            }
            if r.iter().any(|v| !v.is_finite()) {
                return Err(Error::Format(format!("row {i} has a non-finite value")));
            }
            data.extend(normalize(r).ok_or(Error::ZeroRow(i))?);
        }
        Ok(EmbeddingSet { n: rows.len(), d, data })
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Format("empty embedding file".into()))?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::Format(format!("bad header {header:?}"))))
            .collect::<Result<_>>()?;
        let [n, d] = dims[..] else {
            return Err(Error::Format(format!("header must be \"N d\", got {header:?}")));
        };
        let mut rows = Vec::with_capacity(n);
        for (i, line) in lines.enumerate() {
            let row: Vec<f64> = line
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| Error::Format(format!("row {i}: bad number {t:?}"))))
                .collect::<Result<_>>()?;
            if row.len() != d {
                return Err(Error::Format(format!("row {i} has {} values, expected {d}", row.len())));
            }
            rows.push(row);
        }
        if rows.len() != n {
            return Err(Error::Format(format!("header announces {n} rows, found {}", rows.len())));
        }
        Self::from_rows(rows)
    }

    /// 8-byte magic, N and d as u32 LE, then N·d f64 LE.
    pub fn parse_binary(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < 16 || &bytes[..8] != BINARY_MAGIC {
            return Err(Error::Format("missing binary embedding header".into()));
        }
        let n = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
        let d = u32::from_le_bytes(bytes[12..16].try_into().unwrap()) as usize;
        let body = &bytes[16..];
        if body.len() != n * d * 8 {
            return Err(Error::Format(format!(
                "binary body of {} bytes for {n}x{d}",
                body.len()
            )));
        }
        let vals: Vec<f64> = body
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        Self::from_rows(vals.chunks(d.max(1)).take(n).map(<[f64]>::to_vec).collect())
    }

    /// Text or binary, detected by the magic.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let bytes = std::fs::read(path).map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
        if bytes.starts_with(BINARY_MAGIC) {
            Self::parse_binary(&bytes)
        } else {
            let text = String::from_utf8(bytes)
                .map_err(|_| Error::Format(format!("{}: not UTF-8", path.display())))?;
            Self::parse_text(&text)
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.n, self.d);
        for i in 0..self.n {
            let row: Vec<String> = self.row(i).iter().map(|v| format!("{v}")).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn to_binary(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(16 + self.data.len() * 8);
        out.extend_from_slice(BINARY_MAGIC);
        out.extend_from_slice(&(self.n as u32).to_le_bytes());
        out.extend_from_slice(&(self.d as u32).to_le_bytes());
        for v in &self.data {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.d..(i + 1) * self.d]
    }
}

pub fn load_embeddings(path: impl AsRef<Path>) -> Result<EmbeddingSet> {
    EmbeddingSet::load(path)
}

/// Permutation of 0..n drawn from a 128-bit seed.
pub fn permutation(seed: [u8; 16], n: usize) -> Vec<usize> {
    let mut full = [0u8; 32];
    full[..16].copy_from_slice(&seed);
    full[16..].copy_from_slice(b"privmark-sectbl\0");
    let mut rng = ChaCha12Rng::from_seed(full);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng);
    perm
}

/// P1's word/index maps.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexMap {
    pub words: Vec<String>,
}

impl IndexMap {
    pub fn vocabulary(&self) -> Result<Vocabulary> {
        Vocabulary::from_words(&self.words)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, serde_json::to_vec_pretty(self)?)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let bytes = std::fs::read(path).map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
        serde_json::from_slice(&bytes).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
    }
}

/// One party's view of the secret word table.
#[derive(Clone, Debug)]
pub struct SecTable {
    /// M×d fixed-point shares; row i belongs to word i.
    pub table: SecretMatrix,
    /// Embedding row chosen for each word (known to all three parties).
    pub rows: Vec<usize>,
    /// Present at P1 only.
    pub vocab: Option<Vocabulary>,
}

impl SecTable {
    pub fn m(&self) -> usize {
        self.table.rows
    }

    pub fn d(&self) -> usize {
        self.table.cols
    }

    pub fn owner(&self) -> PartyId {
        self.table.owner()
    }

    pub fn index_map(&self) -> Option<IndexMap> {
        self.vocab.as_ref().map(|v| IndexMap {
            words: v.words().to_vec(),
        })
    }

    /// Frame-compatible share file: a header frame (ring bits, f, party, M,
    /// d as u64 LE) followed by one frame per share component.
    pub fn write_shares<W: Write>(&self, w: &mut W, ring: Ring, session: u64) -> Result<()> {
        let header: Vec<u8> = [
            ring.bits() as u64,
            self.table.frac_bits() as u64,
            self.owner().index() as u64,
            self.m() as u64,
            self.d() as u64,
        ]
        .iter()
        .flat_map(|v| v.to_le_bytes())
        .chain(self.rows.iter().flat_map(|&r| (r as u64).to_le_bytes()))
        .collect();
        let mut frames = vec![header];
        for comp in [&self.table.data.first, &self.table.data.second] {
            let mut payload = Vec::new();
            ring.encode_elems(comp, &mut payload);
            frames.push(payload);
        }
        for (seq, payload) in frames.into_iter().enumerate() {
            Frame {
                session,
                phase: Phase::Sectable.tag(),
                seq: seq as u64,
                payload,
            }
            .write_to(w)?;
        }
        Ok(())
    }

    pub fn save_shares(&self, path: impl AsRef<Path>, ring: Ring, session: u64) -> Result<()> {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        self.write_shares(&mut f, ring, session)?;
        f.flush()?;
        Ok(())
    }

    pub fn read_shares<R: Read>(r: &mut R, vocab: Option<Vocabulary>) -> Result<(SecTable, Ring)> {
        let bad = |m: &str| Error::Format(format!("share file: {m}"));
        let header = Frame::read_from(r).map_err(|e| bad(&e.to_string()))?;
        if header.payload.len() < 40 || header.payload.len() % 8 != 0 {
            return Err(bad("truncated header"));
        }
        let h: Vec<u64> = header
            .payload
            .chunks_exact(8)
            .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        let ring = Ring::new(h[0] as u32).map_err(|_| bad("ring width"))?;
        let (f, party, m, d) = (h[1] as u32, h[2] as usize, h[3] as usize, h[4] as usize);
        if party > 2 || h.len() != 5 + m {
            return Err(bad("header fields"));
        }
        let rows: Vec<usize> = h[5..].iter().map(|&v| v as usize).collect();
        let mut comps = Vec::new();
        for _ in 0..2 {
            let fr = Frame::read_from(r).map_err(|e| bad(&e.to_string()))?;
            if fr.session != header.session {
                return Err(bad("frames from different sessions"));
            }
            let c = ring.decode_elems(&fr.payload).map_err(|_| bad("component payload"))?;
            if c.len() != m * d {
                return Err(bad("component length"));
            }
            comps.push(c);
        }
        let owner = PartyId::from_index(party);
        if let Some(v) = &vocab {
            if v.len() != m {
                return Err(bad("index map does not match the table"));
            }
        }
        let second = comps.pop().unwrap();
        let first = comps.pop().unwrap();
        let data = SecretVector {
            owner,
            first,
            second,
            frac_bits: f,
        };
        Ok((
            SecTable {
                table: SecretMatrix::new(m, d, data)?,
                rows,
                vocab,
            },
            ring,
        ))
    }

    pub fn load_shares(path: impl AsRef<Path>, vocab: Option<Vocabulary>) -> Result<(SecTable, Ring)> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
        Self::read_shares(&mut std::io::BufReader::new(file), vocab)
    }
}

/// Jointly sample a 128-bit seed: each party sends a random contribution to
/// both others and everyone XORs the three.
pub fn joint_seed(p: &mut Party) -> Result<[u8; 16]> {
    let mut mine = [0u8; 16];
    p.rng().fill_bytes(&mut mine);
    let me = p.id();
    p.send_bytes(me.next(), mine.to_vec(), FrameKind::Key)?;
    p.send_bytes(me.prev(), mine.to_vec(), FrameKind::Key)?;
    let mut seed = mine;
    for peer in [me.next(), me.prev()] {
        let theirs = p.recv_bytes(peer)?;
        if theirs.len() != 16 {
            return Err(Error::Desync(format!("seed contribution of {} bytes", theirs.len())));
        }
        for (s, t) in seed.iter_mut().zip(theirs) {
            *s ^= t;
        }
    }
    Ok(seed)
}

/// Build the table. P1 passes the vocabulary, P2 the embedding set.
pub fn build_sectable(
    p: &mut Party,
    vocab: Option<&Vocabulary>,
    embeddings: Option<&EmbeddingSet>,
) -> Result<SecTable> {
    p.set_phase(Phase::Sectable);
    let me = p.id();
    let m = announce(p, PartyId::P1, vocab.map(|v| [v.len() as u64]).as_ref().map(|a| &a[..]))?;
    let nd = announce(
        p,
        PartyId::P2,
        embeddings.map(|e| [e.len() as u64, e.dim() as u64]).as_ref().map(|a| &a[..]),
    )?;
    let (m, n, d) = match (&m[..], &nd[..]) {
        ([m], [n, d]) => (*m as usize, *n as usize, *d as usize),
        _ => return Err(Error::Desync("malformed size announcement".into())),
    };
    if m > n {
        return Err(Error::Size(format!("vocabulary of {m} words but only {n} embeddings")));
    }
    let seed = joint_seed(p)?;
    let rows: Vec<usize> = permutation(seed, n).into_iter().take(m).collect();

    let fx: FixedPoint = p.fixed();
    let plain = match (me, embeddings) {
        (PartyId::P2, Some(e)) => {
            let mut raw = Vec::with_capacity(m * d);
            for &r in &rows {
                raw.extend(fx.encode_all(e.row(r))?);
            }
            Some(raw)
        }
        (PartyId::P2, None) => return Err(Error::Config("P2 needs the embedding set".into())),
        _ => None,
    };
    let table = deal_matrix(p, PartyId::P2, plain.as_deref(), m, d, fx.frac_bits)?;
    Ok(SecTable {
        table,
        rows,
        vocab: if me == PartyId::P1 { vocab.cloned() } else { None },
    })
}
