//! Attack corpora and detection-rate evaluation.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::embedder::{tokenize, unique_tokens, EmbedderModel};
use crate::error::{Error, Result};
use crate::pipeline::{self, Context, WatermarkParams};
use crate::plain;
use crate::runtime::{run_session, CommReport, SessionConfig};
use crate::sharing::PartyId;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorpusRecord {
    pub id: u64,
    pub word_count: usize,
    pub watermark_count: usize,
    pub watermark_words: Vec<String>,
    pub candidate_text: String,
    pub removing_attack: String,
    pub paraphrase_attack: String,
    pub domain: String,
}

impl CorpusRecord {
    /// Loose shape checks: counts agree with the lists and texts.
    pub fn check(&self) -> Result<()> {
        if self.watermark_count != self.watermark_words.len() {
            return Err(Error::Format(format!(
                "record {}: watermark_count {} but {} words",
                self.id,
                self.watermark_count,
                self.watermark_words.len()
            )));
        }
        let n = tokenize(&self.candidate_text).len();
        if n.abs_diff(self.word_count) > 2 {
            return Err(Error::Format(format!(
                "record {}: word_count {} but {n} tokens",
                self.id, self.word_count
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default)]
pub struct Corpus {
    pub records: Vec<CorpusRecord>,
    /// malformed entries that were skipped
    pub skipped: Vec<String>,
}

impl Corpus {
    /// A JSON array of records; malformed entries are skipped and counted.
    pub fn parse(text: &str) -> Result<Corpus> {
        let items: Vec<serde_json::Value> =
            serde_json::from_str(text).map_err(|e| Error::Format(format!("corpus: {e}")))?;
        let mut c = Corpus::default();
        for (i, v) in items.into_iter().enumerate() {
            match serde_json::from_value::<CorpusRecord>(v) {
                Ok(r) => match r.check() {
                    Ok(()) => c.records.push(r),
                    Err(e) => c.skipped.push(e.to_string()),
                },
                Err(e) => c.skipped.push(format!("entry {i}: {e}")),
            }
        }
        Ok(c)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Corpus> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EvalMode {
    Mpc,
    Plaintext,
}

impl std::str::FromStr for EvalMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mpc" => Ok(EvalMode::Mpc),
            "plaintext" => Ok(EvalMode::Plaintext),
            o => Err(Error::Config(format!("unknown mode {o:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scenario {
    Original,
    Paraphrase,
    Removal,
    Unrelated,
}

impl Scenario {
    pub const ALL: [Scenario; 4] = [Scenario::Original, Scenario::Paraphrase, Scenario::Removal, Scenario::Unrelated];

    pub fn label(self) -> &'static str {
        match self {
            Scenario::Original => "Original (true positive)",
            Scenario::Paraphrase => "Paraphrase attack",
            Scenario::Removal => "Removal attack",
            Scenario::Unrelated => "Unrelated text (false positive)",
        }
    }
}

/// One detection to run: a record's word list against some text.
#[derive(Clone, Debug)]
pub struct Job {
    pub record: u64,
    pub scenario: Scenario,
    pub text: String,
    pub words: Vec<String>,
}

/// A text rewritten by this system's inserter and the words it received.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Inserted {
    pub text: String,
    pub words: Vec<String>,
}

/// Original, paraphrase and removal jobs per record, then the record's words
/// against every other-domain candidate text. `originals`, aligned with the
/// records, replaces the original text and word list.
pub fn jobs(records: &[CorpusRecord], originals: Option<&[Inserted]>) -> Vec<Job> {
    let mut out = Vec::new();
    for (i, r) in records.iter().enumerate() {
        let (text, words) = match originals {
            Some(o) => (o[i].text.clone(), o[i].words.clone()),
            None => (r.candidate_text.clone(), r.watermark_words.clone()),
        };
        out.push(Job {
            record: r.id,
            scenario: Scenario::Original,
            text,
            words,
        });
        for (scenario, text) in [
            (Scenario::Paraphrase, &r.paraphrase_attack),
            (Scenario::Removal, &r.removing_attack),
        ] {
            out.push(Job {
                record: r.id,
                scenario,
                text: text.clone(),
                words: r.watermark_words.clone(),
            });
        }
        for other in records.iter().filter(|o| o.domain != r.domain) {
            out.push(Job {
                record: r.id,
                scenario: Scenario::Unrelated,
                text: other.candidate_text.clone(),
                words: r.watermark_words.clone(),
            });
        }
    }
    out
}

/// Jobs the detector cannot take (empty text or word list).
fn runnable(job: &Job) -> bool {
    !job.words.is_empty() && !unique_tokens(&job.text).is_empty() && job.words.iter().all(|w| !tokenize(w).is_empty())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateRow {
    pub scenario: Scenario,
    pub label: String,
    pub detected: usize,
    pub total: usize,
    pub percent: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecordDecisions {
    pub id: u64,
    pub original: Option<bool>,
    pub paraphrase: Option<bool>,
    pub removal: Option<bool>,
    pub unrelated: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub mode: EvalMode,
    /// "corpus" (word lists as given) or "self-consistency" (original row
    /// over this system's insertions)
    pub source: String,
    pub records: usize,
    pub skipped_records: usize,
    pub skipped_jobs: usize,
    pub rows: Vec<RateRow>,
    pub decisions: Vec<RecordDecisions>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub comm: Option<CommReport>,
}

impl EvalReport {
    pub fn row(&self, s: Scenario) -> &RateRow {
        self.rows.iter().find(|r| r.scenario == s).unwrap()
    }

    /// Per-record decision vector, comparable across modes.
    pub fn decision_vector(&self) -> Vec<Option<bool>> {
        self.decisions
            .iter()
            .flat_map(|d| {
                [d.original, d.paraphrase, d.removal]
                    .into_iter()
                    .chain(d.unrelated.iter().map(|&b| Some(b)))
            })
            .collect()
    }

    pub fn to_table(&self) -> String {
        let mut s = format!("{:<34} {:>10} {:>9}\n", "Scenario", "Detected", "Rate");
        for r in &self.rows {
            let pct = r.percent.map(|p| format!("{p:.1}%")).unwrap_or_else(|| "n/a".into());
            s.push_str(&format!("{:<34} {:>10} {:>9}\n", r.label, format!("{}/{}", r.detected, r.total), pct));
        }
        s
    }
}

fn run_jobs_mpc(jobs: &[Job], model: &EmbedderModel, params: &WatermarkParams, cfg: &SessionConfig) -> Result<(Vec<bool>, CommReport)> {
    let count = jobs.len();
    let out = run_session(cfg, |p| {
        let me = p.id();
        let emb = pipeline::setup(p, (me == PartyId::P2).then_some(model))?;
        let ctx = Context {
            embedder: &emb,
            tokenizer: model.tokenizer(),
            params,
        };
        let mut decisions = Vec::with_capacity(count);
        for job in jobs {
            let (text, words) = if me == PartyId::P1 {
                (Some(job.text.as_str()), Some(&job.words[..]))
            } else {
                (None, None)
            };
            if let Some(r) = pipeline::detect(p, ctx, text, words, false)? {
                decisions.push(r.detected);
            }
        }
        Ok(decisions)
    })?;
    let comm = out.comm();
    let [d, _, _] = out.outputs;
    Ok((d, comm))
}

/// Detection rates over a corpus. Without `originals` the word lists are
/// taken as given; with them the original row checks the inserted texts.
pub fn evaluate(
    corpus: &Corpus,
    model: &EmbedderModel,
    params: &WatermarkParams,
    mode: EvalMode,
    cfg: &SessionConfig,
    originals: Option<&[Inserted]>,
) -> Result<EvalReport> {
    if originals.is_some_and(|o| o.len() != corpus.records.len()) {
        return Err(Error::Shape("one inserted text per record expected".into()));
    }
    let all = jobs(&corpus.records, originals);
    let (ok, bad): (Vec<Job>, Vec<Job>) = all.into_iter().partition(runnable);
    let (decided, comm) = match mode {
        EvalMode::Plaintext => {
            let fx = cfg.fixed()?;
            let d = ok
                .iter()
                .map(|j| Ok(plain::detect(model, fx, &j.text, &j.words, params, false)?.detected))
                .collect::<Result<Vec<bool>>>()?;
            (d, None)
        }
        EvalMode::Mpc => {
            let (d, c) = run_jobs_mpc(&ok, model, params, cfg)?;
            (d, Some(c))
        }
    };

    let mut per: BTreeMap<u64, RecordDecisions> = corpus
        .records
        .iter()
        .map(|r| {
            (
                r.id,
                RecordDecisions {
                    id: r.id,
                    original: None,
                    paraphrase: None,
                    removal: None,
                    unrelated: Vec::new(),
                },
            )
        })
        .collect();
    let mut tally: BTreeMap<Scenario, (usize, usize)> = Scenario::ALL.iter().map(|&s| (s, (0, 0))).collect();
    for (job, &det) in ok.iter().zip(&decided) {
        let d = per.get_mut(&job.record).unwrap();
        match job.scenario {
            Scenario::Original => d.original = Some(det),
            Scenario::Paraphrase => d.paraphrase = Some(det),
            Scenario::Removal => d.removal = Some(det),
            Scenario::Unrelated => d.unrelated.push(det),
        }
        let t = tally.get_mut(&job.scenario).unwrap();
        t.0 += det as usize;
        t.1 += 1;
    }
    let rows = Scenario::ALL
        .iter()
        .map(|&s| {
            let (detected, total) = tally[&s];
            RateRow {
                scenario: s,
                label: s.label().to_string(),
                detected,
                total,
                percent: (total > 0).then(|| 100.0 * detected as f64 / total as f64),
            }
        })
        .collect();
    Ok(EvalReport {
        mode,
        source: if originals.is_some() { "self-consistency" } else { "corpus" }.into(),
        records: corpus.records.len(),
        skipped_records: corpus.skipped.len(),
        skipped_jobs: bad.len(),
        rows,
        decisions: per.into_values().collect(),
        comm,
    })
}
