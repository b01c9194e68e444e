//! Rewriters that put the selected words into the text.

use serde::{Deserialize, Serialize};
use std::time::Duration;

use crate::error::{Error, Result};

/// What P1 hands to the rewriter after the final words are revealed.
#[derive(Clone, Debug)]
pub struct InsertRequest<'a> {
    pub prompt: &'a str,
    pub text: &'a str,
    pub words: &'a [String],
}

pub trait Inserter: Send + Sync {
    fn rewrite(&self, req: &InsertRequest) -> Result<String>;
}

pub fn build_prompt(words: &[String], text: &str) -> String {
    format!("Insert words: {} into the text: {}", words.join(", "), text)
}

/// Deterministic default: splices ", and <word>" before the terminator of
/// evenly spaced sentences. Existing text is never removed.
#[derive(Clone, Copy, Debug, Default)]
pub struct SpliceInserter;

/// Byte ranges of sentences as (start, terminator position or end).
fn sentences(text: &str) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut start = 0;
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if matches!(c, '.' | '!' | '?') {
            let mut j = i;
            while j + 1 < chars.len() && matches!(chars[j + 1].1, '.' | '!' | '?') {
                j += 1;
            }
            let at_break = j + 1 == chars.len() || chars[j + 1].1.is_whitespace();
            if at_break {
                if text[start..pos].trim().is_empty() {
                    i = j + 1;
                    continue;
                }
                out.push((start, pos));
                start = if j + 1 < chars.len() { chars[j + 1].0 } else { text.len() };
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    if !text[start..].trim().is_empty() {
        let end = start + text[start..].trim_end().len();
        out.push((start, end));
    }
    out
}

impl SpliceInserter {
    pub fn splice(text: &str, words: &[String]) -> String {
        if words.is_empty() {
            return text.to_string();
        }
        let sents = sentences(text);
        if sents.is_empty() {
            let tail: Vec<String> = words.iter().map(|w| format!("and {w}")).collect();
            return format!("{}{}.", text, tail.join(", "));
        }
        let s = sents.len();
        let mut slots: Vec<Vec<&str>> = vec![Vec::new(); s];
        for (i, w) in words.iter().enumerate() {
            slots[(2 * i + 1) * s / (2 * words.len())].push(w);
        }
        let mut out = String::with_capacity(text.len() + words.len() * 16);
        let mut last = 0;
        for ((_, at), ws) in sents.iter().zip(&slots) {
            if ws.is_empty() {
                continue;
            }
            out.push_str(&text[last..*at]);
            for w in ws {
                out.push_str(", and ");
                out.push_str(w);
            }
            last = *at;
        }
        out.push_str(&text[last..]);
        out
    }
}

impl Inserter for SpliceInserter {
    fn rewrite(&self, req: &InsertRequest) -> Result<String> {
        Ok(Self::splice(req.text, req.words))
    }
}

#[derive(Serialize)]
struct HttpRequest<'a> {
    prompt: &'a str,
    text: &'a str,
}

#[derive(Deserialize)]
struct HttpResponse {
    text: String,
}

/// External generator reached over HTTP: POST {prompt, text}, reply {text}.
#[derive(Clone, Debug)]
pub struct HttpInserter {
    pub url: String,
    pub timeout: Duration,
}

impl HttpInserter {
    pub fn new(url: impl Into<String>, timeout: Duration) -> Self {
        HttpInserter {
            url: url.into(),
            timeout,
        }
    }
}

impl Inserter for HttpInserter {
    fn rewrite(&self, req: &InsertRequest) -> Result<String> {
        let agent: ureq::Agent = ureq::Agent::config_builder()
            .timeout_global(Some(self.timeout))
            .build()
            .into();
        let mut resp = agent
            .post(&self.url)
            .send_json(HttpRequest {
                prompt: req.prompt,
                text: req.text,
            })
            .map_err(|e| Error::Inserter(format!("{}: {e}", self.url)))?;
        let body: HttpResponse = resp
            .body_mut()
            .read_json()
            .map_err(|e| Error::Inserter(format!("bad reply from {}: {e}", self.url)))?;
        Ok(body.text)
    }
}
