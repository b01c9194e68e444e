//! Desk-scale model generators.
//!
//! Two embedders: uniformly random token rows, and a hashed character
//! trigram model where words sharing spelling share direction. Document
//! embedding sets are normalized means of random token subsets.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use sha2::{Digest, Sha256};

use crate::embedder::EmbedderModel;
use crate::error::Result;
use crate::sectable::{EmbeddingSet, Vocabulary};

const ONSETS: &[&str] = &[
    "b", "br", "c", "ch", "d", "dr", "f", "fl", "g", "gr", "h", "j", "k", "l", "m", "n", "p", "pl", "qu", "r", "s",
    "sh", "st", "t", "th", "tr", "v", "w", "z",
];
const VOWELS: &[&str] = &["a", "e", "i", "o", "u", "ai", "ea", "io", "ou"];
const CODAS: &[&str] = &["", "", "n", "r", "s", "l", "m", "nd", "st", "x"];

/// `count` distinct pronounceable pseudo-words.
pub fn synthetic_words(rng: &mut impl Rng, count: usize) -> Vec<String> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let syllables = rng.gen_range(2..=4);
        let mut w = String::new();
        for _ in 0..syllables {
            w.push_str(ONSETS.choose(rng).unwrap());
            w.push_str(VOWELS.choose(rng).unwrap());
        }
        w.push_str(CODAS.choose(rng).unwrap());
        if seen.insert(w.clone()) {
            out.push(w);
        }
    }
    out
}

/// Uniform rows in [−1, 1)^d.
pub fn random_embedder(rng: &mut impl Rng, tokens: Vec<String>, dim: usize) -> Result<EmbedderModel> {
    let vectors = tokens
        .iter()
        .map(|_| (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect())
        .collect();
    EmbedderModel::new(tokens, vectors)
}

fn gram_vector(gram: &str, dim: usize, seed: u64) -> Vec<f64> {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update(gram.as_bytes());
    let mut rng = ChaCha12Rng::from_seed(h.finalize().into());
    (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

/// Sum of hashed vectors of the boundary-marked trigrams of the word plus
/// one vector for the whole word.
pub fn trigram_vector(word: &str, dim: usize, seed: u64) -> Vec<f64> {
    let marked: Vec<char> = format!("<{word}>").chars().collect();
    let mut v = gram_vector(&format!("#{word}"), dim, seed);
    for win in marked.windows(3) {
        let g: String = win.iter().collect();
        for (a, b) in v.iter_mut().zip(gram_vector(&g, dim, seed)) {
            *a += b;
        }
    }
    v
}

pub fn trigram_embedder(tokens: Vec<String>, dim: usize, seed: u64) -> Result<EmbedderModel> {
    let vectors = tokens.iter().map(|t| trigram_vector(t, dim, seed)).collect();
    EmbedderModel::new(tokens, vectors)
}

/// One-hot rows: distinct words are orthogonal.
pub fn orthogonal_embedder(tokens: Vec<String>) -> Result<EmbedderModel> {
    let n = tokens.len();
    let vectors = (0..n)
        .map(|i| {
            let mut v = vec![0.0; n];
            v[i] = 1.0;
            v
        })
        .collect();
    EmbedderModel::new(tokens, vectors)
}

/// `n` normalized means of `subset` random token rows each.
pub fn document_embeddings(rng: &mut impl Rng, model: &EmbedderModel, n: usize, subset: usize) -> Result<EmbeddingSet> {
    let rows = model.tokenizer().rows();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let mut v = vec![0.0; model.dim()];
        for _ in 0..subset {
            let id = rng.gen_range(1..rows);
            for (a, b) in v.iter_mut().zip(model.row(id)) {
                *a += b;
            }
        }
        if v.iter().any(|x| *x != 0.0) {
            out.push(v);
        }
    }
    EmbeddingSet::from_rows(out)
}

/// Sentences of 5 to 14 words drawn from `words`, `n` words in total.
pub fn random_text(rng: &mut impl Rng, words: &[String], n: usize) -> String {
    let mut out = String::new();
    let mut left = n;
    while left > 0 {
        let len = rng.gen_range(5..=14).min(left);
        for i in 0..len {
            let w = words.choose(rng).unwrap();
            if i == 0 {
                if !out.is_empty() {
                    out.push(' ');
                }
                let mut c = w.chars();
                let first = c.next().unwrap().to_uppercase();
                out.extend(first);
                out.push_str(c.as_str());
            } else {
                out.push(' ');
                out.push_str(w);
            }
        }
        out.push('.');
        left -= len;
    }
    out
}

/// A complete random instance: embedder over vocabulary and filler tokens,
/// the vocabulary, and a document embedding set.
#[derive(Clone, Debug)]
pub struct ToyWorld {
    pub model: EmbedderModel,
    pub vocab: Vocabulary,
    pub set: EmbeddingSet,
    /// every token the embedder knows, for text generation
    pub words: Vec<String>,
}

impl ToyWorld {
    pub fn generate(seed: u64, vocab: usize, filler: usize, dim: usize, docs: usize) -> Result<ToyWorld> {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let words = synthetic_words(&mut rng, vocab + filler);
        let model = random_embedder(&mut rng, words.clone(), dim)?;
        let mut v = words.clone();
        v.shuffle(&mut rng);
        v.truncate(vocab);
        let vocab = Vocabulary::from_words(v)?;
        let set = document_embeddings(&mut rng, &model, docs.max(vocab.len()), 8)?;
        Ok(ToyWorld {
            model,
            vocab,
            set,
            words,
        })
    }

    pub fn text(&self, rng: &mut impl Rng, n: usize) -> String {
        random_text(rng, &self.words, n)
    }
}
