//! Desk-scale text embedder: a token table whose text embedding is the mean
//! of the token rows, and a normalized copy of the same rows for single
//! words.
//!
//! The token list is public. P2 owns the vectors and deals both tables;
//! P1 turns its text into secret-shared count (or one-hot) weights, so token
//! ids never leave P1. Id 0 is reserved for unknown tokens and embeds to the
//! zero vector.

use std::collections::HashMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::kernels::Bilinear;
use crate::ops::{product, product_trunc};
use crate::runtime::Party;
use crate::sectable::normalize;
use crate::sharing::{announce, deal, deal_matrix, PartyId, SecretMatrix, SecretVector};

fn is_punct(c: char) -> bool {
    c.is_ascii_punctuation()
        || matches!(
            c,
            '\u{2018}' | '\u{2019}' | '\u{201C}' | '\u{201D}' | '\u{2013}' | '\u{2014}' | '\u{2026}' | '\u{00AB}' | '\u{00BB}'
        )
}

/// Lowercase, split on whitespace, strip leading and trailing punctuation.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split_whitespace()
        .map(|t| t.trim_matches(is_punct).to_lowercase())
        .filter(|t| !t.is_empty())
        .collect()
}

/// Distinct tokens in first-occurrence order.
pub fn unique_tokens(text: &str) -> Vec<String> {
    let mut seen = std::collections::HashSet::new();
    tokenize(text).into_iter().filter(|t| seen.insert(t.clone())).collect()
}

/// Public token list; id 0 is the unknown token.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tokenizer {
    tokens: Vec<String>,
    ids: HashMap<String, usize>,
}

impl Tokenizer {
    pub fn new<I, S>(tokens: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut t = Tokenizer {
            tokens: vec![String::new()],
            ids: HashMap::new(),
        };
        for tok in tokens {
            let tok: String = tok.into();
            if tok.is_empty() || tokenize(&tok) != [tok.clone()] {
                return Err(Error::Format(format!("{tok:?} is not a normalized token")));
            }
            if t.ids.insert(tok.clone(), t.tokens.len()).is_some() {
                return Err(Error::DuplicateWord(tok));
            }
            t.tokens.push(tok);
        }
        Ok(t)
    }

    /// Rows of the token tables, including the unknown row.
    pub fn rows(&self) -> usize {
        self.tokens.len()
    }

    pub fn id(&self, token: &str) -> usize {
        self.ids.get(token).copied().unwrap_or(0)
    }

    pub fn token(&self, id: usize) -> Option<&str> {
        (id > 0).then(|| self.tokens.get(id).map(String::as_str)).flatten()
    }

    pub fn ids(&self, text: &str) -> Vec<usize> {
        tokenize(text).iter().map(|t| self.id(t)).collect()
    }

    pub fn contains(&self, token: &str) -> bool {
        self.ids.contains_key(token)
    }

    /// Occurrence count of every token id in `text`.
    pub fn counts(&self, text: &str) -> Vec<u64> {
        let mut c = vec![0u64; self.rows()];
        for id in self.ids(text) {
            c[id] += 1;
        }
        c
    }
}

/// Plaintext embedder parameters held by P2.
#[derive(Clone, Debug, PartialEq)]
pub struct EmbedderModel {
    tokenizer: Tokenizer,
    dim: usize,
    /// rows() × dim, row 0 zero
    vectors: Vec<f64>,
}

impl EmbedderModel {
    pub fn new(tokens: Vec<String>, vectors: Vec<Vec<f64>>) -> Result<Self> {
        if tokens.len() != vectors.len() {
            return Err(Error::Format(format!("{} tokens but {} vectors", tokens.len(), vectors.len())));
        }
        let dim = vectors.first().map(|v| v.len()).unwrap_or(0);
        let tokenizer = Tokenizer::new(tokens)?;
        let mut flat = vec![0.0; dim];
        for (i, v) in vectors.iter().enumerate() {
            if v.len() != dim || v.iter().any(|x| !x.is_finite()) {
                return Err(Error::Format(format!("vector {i} is malformed")));
            }
            flat.extend_from_slice(v);
        }
        Ok(EmbedderModel {
            tokenizer,
            dim,
            vectors: flat,
        })
    }

    /// Header "T d", then one line per token: the token and d reals.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Format("empty embedder file".into()))?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::Format(format!("bad header {header:?}"))))
            .collect::<Result<_>>()?;
        let [t, d] = dims[..] else {
            return Err(Error::Format(format!("header must be \"T d\", got {header:?}")));
        };
        let mut tokens = Vec::with_capacity(t);
        let mut vectors = Vec::with_capacity(t);
        for line in lines {
            let mut parts = line.split_whitespace();
            let tok = parts.next().unwrap().to_string();
            let v: Vec<f64> = parts
                .map(|x| x.parse().map_err(|_| Error::Format(format!("{tok}: bad number {x:?}"))))
                .collect::<Result<_>>()?;
            if v.len() != d {
                return Err(Error::Format(format!("{tok}: {} values, expected {d}", v.len())));
            }
            tokens.push(tok);
            vectors.push(v);
        }
        if tokens.len() != t {
            return Err(Error::Format(format!("header announces {t} tokens, found {}", tokens.len())));
        }
        Self::new(tokens, vectors)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.tokenizer.rows() - 1, self.dim);
        for id in 1..self.tokenizer.rows() {
            s.push_str(self.tokenizer.token(id).unwrap());
            for v in self.row(id) {
                s.push(' ');
                s.push_str(&format!("{v}"));
            }
            s.push('\n');
        }
        s
    }

    pub fn tokenizer(&self) -> &Tokenizer {
        &self.tokenizer
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, id: usize) -> &[f64] {
        &self.vectors[id * self.dim..(id + 1) * self.dim]
    }

    /// Unit-norm copy of a row (zero stays zero).
    pub fn word_row(&self, id: usize) -> Vec<f64> {
        normalize(self.row(id)).unwrap_or_else(|| vec![0.0; self.dim])
    }
}

/// Secret-shared embedder tables, one copy per party.
#[derive(Clone, Debug)]
pub struct EmbedderParams {
    /// rows × d token vectors at scale f
    pub token: SecretMatrix,
    /// rows × d unit-norm token vectors at scale f
    pub word: SecretMatrix,
}

impl EmbedderParams {
    pub fn dim(&self) -> usize {
        self.token.cols
    }

    pub fn rows(&self) -> usize {
        self.token.rows
    }
}

/// P2 deals both tables; the shape is announced first.
pub fn deal_embedder(p: &mut Party, model: Option<&EmbedderModel>) -> Result<EmbedderParams> {
    let shape = model.map(|m| [m.tokenizer.rows() as u64, m.dim as u64]);
    let shape = announce(p, PartyId::P2, shape.as_ref().map(|s| &s[..]))?;
    let [rows, d] = shape[..] else {
        return Err(Error::Desync("malformed embedder shape".into()));
    };
    let (rows, d) = (rows as usize, d as usize);
    let fx = p.fixed();
    let (token_raw, word_raw) = match (p.id(), model) {
        (PartyId::P2, Some(m)) => {
            let mut t = Vec::with_capacity(rows * d);
            let mut w = Vec::with_capacity(rows * d);
            for id in 0..rows {
                t.extend(fx.encode_all(m.row(id))?);
                w.extend(fx.encode_all(&m.word_row(id))?);
            }
            (Some(t), Some(w))
        }
        (PartyId::P2, None) => return Err(Error::Config("P2 needs the embedder model".into())),
        _ => (None, None),
    };
    let token = deal_matrix(p, PartyId::P2, token_raw.as_deref(), rows, d, fx.frac_bits)?;
    let word = deal_matrix(p, PartyId::P2, word_raw.as_deref(), rows, d, fx.frac_bits)?;
    Ok(EmbedderParams { token, word })
}

fn text_counts(tok: &Tokenizer, text: Option<&str>) -> Result<Option<Vec<u64>>> {
    match text {
        Some(t) => {
            let c = tok.counts(t);
            if c.iter().all(|&v| v == 0) {
                return Err(Error::EmptyText);
            }
            Ok(Some(c))
        }
        None => Ok(None),
    }
}

/// ⟨e_t⟩ = (1/n)·Σ token rows of t, scale f, one truncation.
pub fn secure_embed_text(
    p: &mut Party,
    params: &EmbedderParams,
    tok: &Tokenizer,
    text: Option<&str>,
) -> Result<SecretVector> {
    let rows = params.rows();
    let fx = p.fixed();
    let weights = match text_counts(tok, text)? {
        Some(c) => {
            let n: u64 = c.iter().sum();
            Some(
                c.iter()
                    .map(|&k| fx.encode(k as f64 / n as f64))
                    .collect::<Result<Vec<u64>>>()?,
            )
        }
        None => None,
    };
    let w = deal(p, PartyId::P1, weights.as_deref(), rows, fx.frac_bits)?;
    product_trunc(
        p,
        Bilinear::MatMul {
            m: 1,
            k: rows,
            n: params.dim(),
        },
        &w,
        &params.token.data,
        fx.frac_bits,
    )
}

/// n·⟨e_t⟩: the count-weighted token sum at scale f, without truncation.
/// Positively proportional to the mean, so it ranks identically.
pub fn secure_embed_text_sum(
    p: &mut Party,
    params: &EmbedderParams,
    tok: &Tokenizer,
    text: Option<&str>,
) -> Result<SecretVector> {
    let rows = params.rows();
    let counts = text_counts(tok, text)?;
    let w = deal(p, PartyId::P1, counts.as_deref(), rows, 0)?;
    product(
        p,
        Bilinear::MatMul {
            m: 1,
            k: rows,
            n: params.dim(),
        },
        &w,
        &params.token.data,
    )
}

/// Word-mode embeddings: row i is the mean of the unit-norm rows of word i's
/// tokens. P1 announces the word count and whether any word spans several
/// tokens; if none does, the weights are one-hot at scale 0 and the product
/// needs no truncation.
pub fn secure_embed_words(
    p: &mut Party,
    params: &EmbedderParams,
    tok: &Tokenizer,
    words: Option<&[String]>,
) -> Result<SecretMatrix> {
    let rows = params.rows();
    let d = params.dim();
    let fx = p.fixed();
    let ids: Option<Vec<Vec<usize>>> = match words {
        Some(ws) => Some(
            ws.iter()
                .map(|w| {
                    let ids = tok.ids(w);
                    if ids.is_empty() {
                        Err(Error::EmptyText)
                    } else {
                        Ok(ids)
                    }
                })
                .collect::<Result<_>>()?,
        ),
        None => None,
    };
    let header = ids
        .as_ref()
        .map(|ids| [ids.len() as u64, ids.iter().any(|t| t.len() > 1) as u64]);
    let header = announce(p, PartyId::P1, header.as_ref().map(|h| &h[..]))?;
    let [count, multi] = header[..] else {
        return Err(Error::Desync("malformed word header".into()));
    };
    let (count, multi) = (count as usize, multi != 0);
    let shape = Bilinear::MatMul { m: count, k: rows, n: d };
    if count == 0 {
        return SecretMatrix::new(0, d, SecretVector::zeros(p.id(), 0, fx.frac_bits));
    }
    let weights = ids
        .map(|ids| -> Result<Vec<u64>> {
            let mut w = vec![0u64; count * rows];
            for (i, t) in ids.iter().enumerate() {
                for &id in t {
                    if multi {
                        let c = t.iter().filter(|&&x| x == id).count();
                        w[i * rows + id] = fx.encode(c as f64 / t.len() as f64)?;
                    } else {
                        w[i * rows + id] = 1;
                    }
                }
            }
            Ok(w)
        })
        .transpose()?;
    let scale = if multi { fx.frac_bits } else { 0 };
    let w = deal(p, PartyId::P1, weights.as_deref(), count * rows, scale)?;
    let data = if multi {
        product_trunc(p, shape, &w, &params.word.data, fx.frac_bits)?
    } else {
        product(p, shape, &w, &params.word.data)?
    };
    SecretMatrix::new(count, d, data)
}
