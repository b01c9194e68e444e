//! Watermark insertion and detection over the three-party runtime.
//!
//! Insertion ranks the word table against the text embedding, keeps the 3k
//! best candidates, re-ranks them with their word embeddings and rewrites
//! the text with the k finalists. Detection counts watermark words that have
//! a close enough word in the suspect text and compares the count with a
//! public threshold; only the decision bit is revealed.
//!
//! Scores stay at scale 2f (ring dot products of two scale-f operands, no
//! truncation) and the text embedding is the count-weighted token sum, a
//! positive multiple of the mean, so every ranking and threshold test is
//! exact and reproducible by the plaintext oracle in [`crate::plain`].

pub mod inserter;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::embedder::{deal_embedder, secure_embed_text_sum, secure_embed_words, tokenize, unique_tokens, EmbedderModel, EmbedderParams, Tokenizer};
use crate::error::{Error, Result};
use crate::ops::{and, b2a, less_than_public, matmul_ring, matmul_t_ring, msb, not, secure_topk};
use crate::runtime::{Party, Phase};
use crate::sectable::SecTable;
use crate::sharing::{announce, reveal_bits_to, reveal_to, BoolVector, PartyId, SecretMatrix, SecretVector};

pub use inserter::{build_prompt, HttpInserter, InsertRequest, Inserter, SpliceInserter};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct WatermarkParams {
    /// insertion ratio r
    pub ratio: f64,
    /// word similarity threshold
    pub theta_sim: f64,
    /// presence-score threshold
    pub theta_det: f64,
}

impl Default for WatermarkParams {
    fn default() -> Self {
        WatermarkParams {
            ratio: 0.12,
            theta_sim: 0.85,
            theta_det: 0.45,
        }
    }
}

impl WatermarkParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("ratio", self.ratio), ("theta_sim", self.theta_sim), ("theta_det", self.theta_det)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::Config(format!("{name} must lie in (0, 1), got {v}")));
            }
        }
        Ok(())
    }

    /// Closest num/den to θ_det with den ≤ 1000 (smallest den on ties).
    pub fn det_ratio(&self) -> (u64, u64) {
        let mut best = (0u64, 1u64, f64::INFINITY);
        for den in 1..=1000u64 {
            let num = (self.theta_det * den as f64).round() as u64;
            let err = (self.theta_det - num as f64 / den as f64).abs();
            if err < best.2 - 1e-15 {
                best = (num, den, err);
            }
        }
        (best.0, best.1)
    }

    /// Decision rule: c / |L| > θ_det, cross-multiplied.
    pub fn decide(&self, matched: u64, listed: u64) -> bool {
        let (num, den) = self.det_ratio();
        den * matched > num * listed
    }
}

/// (k, 3k) for a text of n words: k = max(1, floor(r·n)).
pub fn derive_counts(n: usize, params: &WatermarkParams) -> (usize, usize) {
    let k = ((params.ratio * n as f64).floor() as usize).max(1);
    (k, 3 * k)
}

/// k′ capped by the table size; errors if even k cannot be served.
pub fn capped_counts(n: usize, m: usize, params: &WatermarkParams) -> Result<(usize, usize)> {
    let (k, kp) = derive_counts(n, params);
    if k > m {
        return Err(Error::Size(format!("{k} watermark words requested from {m} table entries")));
    }
    Ok((k, kp.min(m)))
}

pub fn sha256_hex(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// Persisted at P1 after insertion.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WatermarkRecord {
    pub id: String,
    pub watermark_words: Vec<String>,
    pub params: WatermarkParams,
    pub text_sha256: String,
}

impl WatermarkRecord {
    pub fn save(&self, path: impl AsRef<std::path::Path>) -> Result<()> {
        std::fs::write(path, serde_json::to_vec_pretty(self)?)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<std::path::Path>) -> Result<Self> {
        let path = path.as_ref();
        let bytes = std::fs::read(path).map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
        serde_json::from_slice(&bytes).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
    }
}

/// Everything the protocols read besides the private inputs.
#[derive(Clone, Copy)]
pub struct Context<'a> {
    pub embedder: &'a EmbedderParams,
    pub tokenizer: &'a Tokenizer,
    pub params: &'a WatermarkParams,
}

/// Setup phase: P2 deals the embedder tables.
pub fn setup(p: &mut Party, model: Option<&EmbedderModel>) -> Result<EmbedderParams> {
    p.set_phase(Phase::Setup);
    deal_embedder(p, model)
}

/// The selection revealed to P1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Selection {
    /// table rows of the k′ candidates, best first
    pub candidates: Vec<usize>,
    /// positions within `candidates` of the k finalists, best first
    pub filtered: Vec<usize>,
    pub words: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct InsertOutput {
    pub text: String,
    pub record: WatermarkRecord,
    pub selection: Selection,
}

fn to_index(v: u64, bound: usize) -> Result<usize> {
    if (v as usize) < bound {
        Ok(v as usize)
    } else {
        Err(Error::Consistency(format!("revealed index {v} outside 0..{bound}")))
    }
}

/// Select the watermark words. P1 passes the text; only P1 gets `Some`.
pub fn select_words(p: &mut Party, ctx: Context, table: &SecTable, text: Option<&str>) -> Result<Option<Selection>> {
    let me = p.id();
    p.set_phase(Phase::Embed);
    let m = table.m();
    let n_words = text.map(|t| tokenize(t).len());
    if n_words == Some(0) {
        return Err(Error::EmptyText);
    }
    let n = announce(p, PartyId::P1, n_words.map(|n| [n as u64]).as_ref().map(|a| &a[..]))?;
    let [n] = n[..] else {
        return Err(Error::Desync("malformed word count".into()));
    };
    let (k, kp) = capped_counts(n as usize, m, ctx.params)?;
    let e = secure_embed_text_sum(p, ctx.embedder, ctx.tokenizer, text)?;

    p.set_phase(Phase::Cosine);
    let sims = matmul_ring(p, &table.table, &e)?;

    p.set_phase(Phase::Topk);
    let cand = secure_topk(p, &sims, kp)?;

    p.set_phase(Phase::Insert);
    let cand_idx = reveal_to(p, PartyId::P1, &cand.indices)?;
    let cand_words: Option<Vec<String>> = match (&cand_idx, &table.vocab) {
        (Some(idx), Some(v)) => Some(
            idx.iter()
                .map(|&i| Ok(v.word(to_index(i, m)?).unwrap().to_string()))
                .collect::<Result<_>>()?,
        ),
        (Some(_), None) => return Err(Error::Config("P1 has no index map".into())),
        _ => None,
    };
    let e_cand = secure_embed_words(p, ctx.embedder, ctx.tokenizer, cand_words.as_deref())?;
    let sims_f = matmul_ring(p, &e_cand, &e)?;
    let fin = secure_topk(p, &sims_f, k)?;
    let fin_idx = reveal_to(p, PartyId::P1, &fin.indices)?;

    if me != PartyId::P1 {
        return Ok(None);
    }
    let candidates: Vec<usize> = cand_idx.unwrap().iter().map(|&i| i as usize).collect();
    let filtered: Vec<usize> = fin_idx
        .unwrap()
        .iter()
        .map(|&i| to_index(i, kp))
        .collect::<Result<_>>()?;
    let cw = cand_words.unwrap();
    let words = filtered.iter().map(|&i| cw[i].clone()).collect();
    Ok(Some(Selection {
        candidates,
        filtered,
        words,
    }))
}

/// Full insertion: selection, then the rewrite at P1.
pub fn mark_insert(
    p: &mut Party,
    ctx: Context,
    table: &SecTable,
    text: Option<&str>,
    inserter: &dyn Inserter,
) -> Result<Option<InsertOutput>> {
    let session = p.session_id();
    let Some(selection) = select_words(p, ctx, table, text)? else {
        return Ok(None);
    };
    let text = text.unwrap();
    let prompt = build_prompt(&selection.words, text);
    let out = inserter.rewrite(&InsertRequest {
        prompt: &prompt,
        text,
        words: &selection.words,
    })?;
    let record = WatermarkRecord {
        id: format!("{session:016x}"),
        watermark_words: selection.words.clone(),
        params: ctx.params.clone(),
        text_sha256: sha256_hex(&out),
    };
    Ok(Some(InsertOutput {
        text: out,
        record,
        selection,
    }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetectionResult {
    pub detected: bool,
    /// matched watermark words, revealed only in verbose mode
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matched: Option<u64>,
    pub watermark_len: usize,
}

/// AND over the `width` bits of each row of a row-major bit matrix.
fn and_rows(p: &mut Party, bits: &BoolVector, rows: usize, mut width: usize) -> Result<BoolVector> {
    let mut cur = bits.clone();
    while width > 1 {
        let half = width / 2;
        let mut li = Vec::with_capacity(rows * half);
        let mut ri = Vec::with_capacity(rows * half);
        for r in 0..rows {
            for j in 0..half {
                li.push(r * width + 2 * j);
                ri.push(r * width + 2 * j + 1);
            }
        }
        let paired = and(p, &cur.gather(&li), &cur.gather(&ri))?;
        let new_width = width - half;
        let mut idx = Vec::with_capacity(rows * new_width);
        let joined = if width % 2 == 1 {
            let odd: Vec<usize> = (0..rows).map(|r| r * width + width - 1).collect();
            let tail = cur.gather(&odd);
            for r in 0..rows {
                idx.extend((0..half).map(|j| r * half + j));
                idx.push(rows * half + r);
            }
            BoolVector::concat(&paired, &tail).gather(&idx)
        } else {
            paired
        };
        cur = joined;
        width = new_width;
    }
    Ok(cur)
}

/// Detection. P1 passes the suspect text and the watermark words.
pub fn detect(
    p: &mut Party,
    ctx: Context,
    text: Option<&str>,
    watermark: Option<&[String]>,
    verbose: bool,
) -> Result<Option<DetectionResult>> {
    p.set_phase(Phase::Detect);
    let ring = p.ring();
    let fx = p.fixed();
    let cand: Option<Vec<String>> = text.map(unique_tokens);
    if p.id() == PartyId::P1
        && (cand.as_ref().is_some_and(|c| c.is_empty()) || watermark.is_some_and(|w| w.is_empty()))
    {
        return Err(Error::EmptyText);
    }
    let e_wm = secure_embed_words(p, ctx.embedder, ctx.tokenizer, watermark)?;
    let e_cand = secure_embed_words(p, ctx.embedder, ctx.tokenizer, cand.as_deref())?;
    let (l, c) = (e_wm.rows, e_cand.rows);
    if l == 0 || c == 0 {
        return Err(Error::EmptyText);
    }
    let sims: SecretMatrix = matmul_t_ring(p, &e_wm, &e_cand)?;
    let theta = fx.encode_at(ctx.params.theta_sim, 2 * fx.frac_bits)?;
    let below = less_than_public(p, &sims.data, &vec![theta; l * c])?;
    let none = and_rows(p, &below, l, c)?;
    let hits = b2a(p, &not(&none))?;
    let matched: SecretVector = hits.sum(ring);

    let (num, den) = ctx.params.det_ratio();
    // num·|L| − den·c < 0  ⇔  c/|L| > θ_det
    let diff = matched
        .scalar_mul(ring.neg(den), ring)
        .add_public(&[ring.mul(num, l as u64)], ring)?;
    let bit = msb(p, &diff)?;
    let detected = reveal_bits_to(p, PartyId::P1, &bit)?;
    let count = if verbose {
        reveal_to(p, PartyId::P1, &matched)?
    } else {
        None
    };
    Ok(detected.map(|b| DetectionResult {
        detected: b[0] & 1 == 1,
        matched: count.map(|c| c[0]),
        watermark_len: l,
    }))
}
