//! Single-machine reference for the watermark protocols.
//!
//! The fixed-point functions use the same ring integers as the secure
//! versions, so selections and decisions must agree exactly. The `float_*`
//! helpers are the real-valued counterparts used for tolerance checks.

use crate::embedder::{unique_tokens, EmbedderModel};
use crate::error::{Error, Result};
use crate::fixed::{truncate_raw, FixedPoint};
use crate::pipeline::{capped_counts, DetectionResult, Selection, WatermarkParams};
use crate::sectable::{EmbeddingSet, Vocabulary};

/// Count-weighted token sum of the text at scale f.
pub fn embed_text_sum(model: &EmbedderModel, fx: FixedPoint, text: &str) -> Result<Vec<u64>> {
    let ring = fx.ring;
    let counts = model.tokenizer().counts(text);
    if counts.iter().all(|&c| c == 0) {
        return Err(Error::EmptyText);
    }
    let mut e = vec![0u64; model.dim()];
    for (id, &c) in counts.iter().enumerate() {
        if c == 0 {
            continue;
        }
        for (acc, raw) in e.iter_mut().zip(fx.encode_all(model.row(id))?) {
            *acc = ring.add(*acc, ring.mul(c, raw));
        }
    }
    Ok(e)
}

/// Word-mode embedding at scale f. Multi-token words take the mean with a
/// deterministic shift, which the secure side only matches to ±1 LSB.
pub fn embed_word(model: &EmbedderModel, fx: FixedPoint, word: &str) -> Result<Vec<u64>> {
    let ring = fx.ring;
    let ids = model.tokenizer().ids(word);
    match ids.len() {
        0 => Err(Error::EmptyText),
        1 => fx.encode_all(&model.word_row(ids[0])),
        n => {
            let mut e = vec![0u64; model.dim()];
            let mut seen = Vec::new();
            for &id in &ids {
                if seen.contains(&id) {
                    continue;
                }
                seen.push(id);
                let c = ids.iter().filter(|&&x| x == id).count();
                let w = fx.encode(c as f64 / n as f64)?;
                for (acc, raw) in e.iter_mut().zip(fx.encode_all(&model.word_row(id))?) {
                    *acc = ring.add(*acc, ring.mul(w, raw));
                }
            }
            Ok(e.into_iter().map(|v| truncate_raw(ring, v, fx.frac_bits)).collect())
        }
    }
}

/// Ring inner product.
pub fn dot(fx: FixedPoint, a: &[u64], b: &[u64]) -> u64 {
    let ring = fx.ring;
    a.iter().zip(b).fold(0, |acc, (&x, &y)| ring.add(acc, ring.mul(x, y)))
}

/// Positions of the k largest signed scores, ties to the smaller index.
pub fn topk(fx: FixedPoint, scores: &[u64], k: usize) -> Result<Vec<usize>> {
    if k > scores.len() {
        return Err(Error::TopK { k, n: scores.len() });
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(fx.ring.to_signed(scores[i])), i));
    order.truncate(k);
    Ok(order)
}

/// Encoded table rows in word order, as the secure table reconstructs.
pub fn table_rows(fx: FixedPoint, set: &EmbeddingSet, rows: &[usize]) -> Result<Vec<Vec<u64>>> {
    rows.iter().map(|&r| fx.encode_all(set.row(r))).collect()
}

/// The selection the secure insertion reveals to P1.
pub fn select_words(
    model: &EmbedderModel,
    fx: FixedPoint,
    vocab: &Vocabulary,
    table: &[Vec<u64>],
    text: &str,
    params: &WatermarkParams,
) -> Result<Selection> {
    let n = crate::embedder::tokenize(text).len();
    if n == 0 {
        return Err(Error::EmptyText);
    }
    let (k, kp) = capped_counts(n, table.len(), params)?;
    let e = embed_text_sum(model, fx, text)?;
    let sims: Vec<u64> = table.iter().map(|row| dot(fx, row, &e)).collect();
    let candidates = topk(fx, &sims, kp)?;
    let words: Vec<String> = candidates
        .iter()
        .map(|&i| vocab.word(i).map(str::to_string).ok_or_else(|| Error::Size(format!("word {i} missing"))))
        .collect::<Result<_>>()?;
    let filt_sims: Vec<u64> = words
        .iter()
        .map(|w| Ok(dot(fx, &embed_word(model, fx, w)?, &e)))
        .collect::<Result<_>>()?;
    let filtered = topk(fx, &filt_sims, k)?;
    let chosen = filtered.iter().map(|&i| words[i].clone()).collect();
    Ok(Selection {
        candidates,
        filtered,
        words: chosen,
    })
}

/// Matched watermark words: those with some text word at or above θ_sim.
pub fn matched_count(model: &EmbedderModel, fx: FixedPoint, text: &str, watermark: &[String], params: &WatermarkParams) -> Result<u64> {
    let cand = unique_tokens(text);
    if cand.is_empty() || watermark.is_empty() {
        return Err(Error::EmptyText);
    }
    let theta = fx.encode_at(params.theta_sim, 2 * fx.frac_bits)?;
    let theta = fx.ring.to_signed(theta);
    let cand: Vec<Vec<u64>> = cand.iter().map(|w| embed_word(model, fx, w)).collect::<Result<_>>()?;
    let mut c = 0;
    for w in watermark {
        let ew = embed_word(model, fx, w)?;
        if cand.iter().any(|ec| fx.ring.to_signed(dot(fx, &ew, ec)) >= theta) {
            c += 1;
        }
    }
    Ok(c)
}

pub fn detect(
    model: &EmbedderModel,
    fx: FixedPoint,
    text: &str,
    watermark: &[String],
    params: &WatermarkParams,
    verbose: bool,
) -> Result<DetectionResult> {
    let c = matched_count(model, fx, text, watermark, params)?;
    Ok(DetectionResult {
        detected: params.decide(c, watermark.len() as u64),
        matched: verbose.then_some(c),
        watermark_len: watermark.len(),
    })
}

pub fn float_dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn float_cosine(a: &[f64], b: &[f64]) -> f64 {
    float_dot(a, b) / (float_dot(a, a).sqrt() * float_dot(b, b).sqrt())
}

/// Mean of the token rows of the text.
pub fn float_embed_text(model: &EmbedderModel, text: &str) -> Vec<f64> {
    let ids = model.tokenizer().ids(text);
    let mut e = vec![0.0; model.dim()];
    for &id in &ids {
        for (acc, v) in e.iter_mut().zip(model.row(id)) {
            *acc += v;
        }
    }
    let n = ids.len().max(1) as f64;
    e.iter().map(|v| v / n).collect()
}
