//! `privmark` command-line front end.
//!
//! Every command except `party` runs the three parties in one process over
//! in-memory channels; `party` runs a single node over TCP.

pub mod bench;
pub mod config;
pub mod table;

use std::ffi::OsString;
use std::io::Read;
use std::path::{Path, PathBuf};

use anyhow::Context as _;
use clap::{Parser, Subcommand};
use privmark_core::corpus::{evaluate, Corpus, EvalMode, EvalReport, Inserted};
use privmark_core::embedder::{tokenize, unique_tokens, EmbedderModel};
use privmark_core::pipeline::{self, Context, DetectionResult, WatermarkRecord};
use privmark_core::plain;
use privmark_core::runtime::{
    run_party, run_session, CommReport, NetworkProfile, PartyReport, Phase, SessionConfig, TcpTransport,
};
use privmark_core::sectable::{build_sectable, load_embeddings, load_vocabulary, EmbeddingSet, SecTable, Vocabulary};
use privmark_core::sharing::PartyId;
use privmark_core::toy;
use privmark_core::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::Serialize;

use config::{Config, PartyJob};

#[derive(Parser, Debug)]
#[command(name = "privmark", version, about = "Private text watermarking over three-party computation")]
pub struct Cli {
    /// JSON config file
    #[arg(long, global = true, env = "PRIVMARK_CONFIG")]
    pub config: Option<PathBuf>,
    /// localhost | lan | wan | custom (custom keeps session.profile)
    #[arg(long, global = true)]
    pub profile: Option<String>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// mpc | plaintext
    #[arg(long, global = true, default_value = "mpc")]
    pub mode: String,
    /// reveal the matched-word count to P1
    #[arg(long, global = true)]
    pub verbose_count: bool,
    /// also write the JSON report here
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run one party node over TCP for a single session
    Party {
        #[arg(long)]
        party: Option<String>,
    },
    /// Table construction
    Sectable {
        #[command(subcommand)]
        action: SectableCmd,
    },
    /// Select watermark words for a text and rewrite it
    Insert {
        /// text file, or - for stdin
        #[arg(long)]
        text: PathBuf,
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long, default_value = "record.json")]
        record: PathBuf,
    },
    /// Check a text for a saved word list; exit 0 detected, 1 not detected
    Detect {
        #[arg(long)]
        text: PathBuf,
        #[arg(long, conflicts_with = "words")]
        record: Option<PathBuf>,
        /// comma-separated word list instead of a record
        #[arg(long)]
        words: Option<String>,
    },
    /// Per-phase time and traffic under network profiles
    Bench {
        #[arg(long, default_value = "embed,cosine,topk,insert,detect")]
        phases: String,
        #[arg(long, default_value_t = 1)]
        repetitions: usize,
        #[arg(long, default_value_t = 100)]
        vocab_size: usize,
        #[arg(long, default_value_t = 64)]
        dim: usize,
        #[arg(long, default_value_t = 100)]
        words: usize,
    },
    /// Detection rates over an attack corpus
    Eval {
        #[arg(long)]
        corpus: Option<PathBuf>,
        /// insert into each candidate text first and check the result
        #[arg(long)]
        self_insert: bool,
        #[arg(long)]
        table: Option<PathBuf>,
    },
    /// Generate desk-scale embedder, vocabulary, embeddings and config
    GenToy {
        #[arg(long)]
        dir: PathBuf,
        /// derive tokens and vocabulary from this corpus
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[arg(long, default_value_t = 64)]
        dim: usize,
        #[arg(long, default_value_t = 500)]
        vocab_size: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum SectableCmd {
    /// Build the table in memory and write the share files
    Build {
        #[arg(long)]
        vocab: Option<PathBuf>,
        #[arg(long)]
        embeddings: Option<PathBuf>,
        #[arg(long)]
        table: Option<PathBuf>,
    },
}

/// Parse and run; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            e.downcast_ref::<Error>().map(Error::exit_code).unwrap_or(2)
        }
    }
}

fn dispatch(cli: Cli) -> anyhow::Result<i32> {
    let mut cfg = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    if let Some(s) = cli.seed {
        cfg.apply_seed(s);
    }
    if let Some(p) = &cli.profile {
        cfg.apply_profile(p)?;
    }
    let mode: EvalMode = cli.mode.parse()?;
    let out = cli.out.as_deref();
    match cli.command {
        Command::Party { party } => {
            if party.is_some() {
                cfg.party = party;
            }
            cmd_party(&cfg, out)
        }
        Command::Sectable {
            action: SectableCmd::Build { vocab, embeddings, table },
        } => {
            override_path(&mut cfg.vocabulary, vocab);
            override_path(&mut cfg.embeddings, embeddings);
            override_path(&mut cfg.table, table);
            cmd_sectable_build(&cfg, out)
        }
        Command::Insert { text, table, record } => {
            override_path(&mut cfg.table, table);
            cmd_insert(&cfg, mode, &text, &record, out)
        }
        Command::Detect { text, record, words } => cmd_detect(&cfg, mode, &text, record.as_deref(), words.as_deref(), cli.verbose_count, out),
        Command::Bench {
            phases,
            repetitions,
            vocab_size,
            dim,
            words,
        } => {
            let profiles = match &cli.profile {
                Some(_) => vec![cfg.session.profile.clone().unwrap()],
                None => vec![NetworkProfile::localhost(), NetworkProfile::lan(), NetworkProfile::wan()],
            };
            let setup = bench::BenchSetup {
                vocab: vocab_size,
                dim,
                words,
                repetitions,
                seed: cfg.session.seed,
            };
            let phases = bench::parse_phases(&phases)?;
            let report = bench::run(setup, profiles, &phases, &cfg.session)?;
            print!("{}", report.to_table());
            println!();
            emit(&report, out)?;
            Ok(0)
        }
        Command::Eval { corpus, self_insert, table } => {
            override_path(&mut cfg.corpus, corpus);
            override_path(&mut cfg.table, table);
            cmd_eval(&cfg, mode, self_insert, out)
        }
        Command::GenToy { dir, corpus, dim, vocab_size } => cmd_gen_toy(&cfg, &dir, corpus.as_deref(), dim, vocab_size),
    }
}

fn override_path(slot: &mut Option<PathBuf>, flag: Option<PathBuf>) {
    if flag.is_some() {
        *slot = flag;
    }
}

fn emit<T: Serialize>(value: &T, out: Option<&Path>) -> anyhow::Result<()> {
    let json = serde_json::to_string_pretty(value)?;
    println!("{json}");
    if let Some(p) = out {
        std::fs::write(p, format!("{json}\n")).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(())
}

fn read_text(path: &Path) -> privmark_core::Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
}

fn load_model(cfg: &Config) -> privmark_core::Result<EmbedderModel> {
    EmbedderModel::load(cfg.require("embedder", &cfg.embedder)?)
}

/// Transcript digests and traffic of a session, in a stable form.
#[derive(Serialize)]
struct SessionSummary {
    session_id: String,
    comm: CommReport,
    transcripts: Vec<String>,
}

fn summary(cfg: &SessionConfig, comm: CommReport, reports: &[PartyReport]) -> SessionSummary {
    SessionSummary {
        session_id: format!("{:016x}", cfg.session_id),
        comm,
        transcripts: reports.iter().map(|r| r.transcript.sha256.clone()).collect(),
    }
}

fn cmd_sectable_build(cfg: &Config, out: Option<&Path>) -> anyhow::Result<i32> {
    let vocab = load_vocabulary(cfg.require("vocabulary", &cfg.vocabulary)?)?;
    let set = load_embeddings(cfg.require("embeddings", &cfg.embeddings)?)?;
    let dir = cfg.require("table", &cfg.table)?;
    let ring = cfg.session.ring()?;
    let res = run_session(&cfg.session, |p| {
        let me = p.id();
        build_sectable(p, (me == PartyId::P1).then_some(&vocab), (me == PartyId::P2).then_some(&set))
    })?;
    for t in &res.outputs {
        table::save(dir, t, ring, cfg.session.session_id)?;
    }
    #[derive(Serialize)]
    struct Built<'a> {
        m: usize,
        d: usize,
        table: String,
        #[serde(flatten)]
        session: &'a SessionSummary,
    }
    let s = summary(&cfg.session, res.comm(), &res.reports);
    emit(
        &Built {
            m: res.outputs[0].m(),
            d: res.outputs[0].d(),
            table: dir.display().to_string(),
            session: &s,
        },
        out,
    )?;
    Ok(0)
}

#[derive(Serialize)]
struct InsertReport {
    text: String,
    record: String,
    watermark_words: Vec<String>,
    candidates: Vec<usize>,
    filtered: Vec<usize>,
    #[serde(flatten)]
    session: Option<SessionSummary>,
}

/// Inputs each in-process party reads from disk.
struct Tables([SecTable; 3]);

fn load_tables(cfg: &Config) -> privmark_core::Result<Tables> {
    let dir = cfg.require("table", &cfg.table)?;
    let fx = cfg.session.fixed()?;
    Ok(Tables([
        table::load(dir, PartyId::P1, fx)?,
        table::load(dir, PartyId::P2, fx)?,
        table::load(dir, PartyId::P3, fx)?,
    ]))
}

fn cmd_insert(cfg: &Config, mode: EvalMode, text_path: &Path, record_path: &Path, out: Option<&Path>) -> anyhow::Result<i32> {
    let text = read_text(text_path)?;
    let model = load_model(cfg)?;
    let tables = load_tables(cfg)?;
    let inserter = cfg.inserter();
    let (ins, session) = match mode {
        EvalMode::Mpc => {
            let res = run_session(&cfg.session, |p| {
                let me = p.id();
                let emb = pipeline::setup(p, (me == PartyId::P2).then_some(&model))?;
                let ctx = Context {
                    embedder: &emb,
                    tokenizer: model.tokenizer(),
                    params: &cfg.params,
                };
                let r = pipeline::mark_insert(p, ctx, &tables.0[me.index()], (me == PartyId::P1).then_some(text.as_str()), inserter.as_ref())?;
                p.set_phase(Phase::Program);
                Ok(r)
            })?;
            let s = summary(&cfg.session, res.comm(), &res.reports);
            let [r, _, _] = res.outputs;
            (r.unwrap(), Some(s))
        }
        EvalMode::Plaintext => {
            let set = load_embeddings(cfg.require("embeddings", &cfg.embeddings)?)?;
            let fx = cfg.session.fixed()?;
            let t1 = &tables.0[0];
            let rows = plain::table_rows(fx, &set, &t1.rows)?;
            let sel = plain::select_words(&model, fx, t1.vocab.as_ref().unwrap(), &rows, &text, &cfg.params)?;
            let prompt = pipeline::build_prompt(&sel.words, &text);
            let t = inserter.rewrite(&pipeline::InsertRequest {
                prompt: &prompt,
                text: &text,
                words: &sel.words,
            })?;
            let record = WatermarkRecord {
                id: format!("{:016x}", cfg.session.session_id),
                watermark_words: sel.words.clone(),
                params: cfg.params.clone(),
                text_sha256: pipeline::sha256_hex(&t),
            };
            (
                pipeline::InsertOutput {
                    text: t,
                    record,
                    selection: sel,
                },
                None,
            )
        }
    };
    ins.record.save(record_path)?;
    emit(
        &InsertReport {
            text: ins.text,
            record: record_path.display().to_string(),
            watermark_words: ins.selection.words,
            candidates: ins.selection.candidates,
            filtered: ins.selection.filtered,
            session,
        },
        out,
    )?;
    Ok(0)
}

#[derive(Serialize)]
struct DetectReport {
    detected: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    c: Option<u64>,
    watermark_len: usize,
    #[serde(flatten)]
    session: Option<SessionSummary>,
}

fn detect_words(record: Option<&Path>, words: Option<&str>) -> privmark_core::Result<Vec<String>> {
    match (record, words) {
        (Some(r), _) => Ok(WatermarkRecord::load(r)?.watermark_words),
        (None, Some(w)) => Ok(w.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()),
        (None, None) => Err(Error::Config("detect needs --record or --words".into())),
    }
}

fn cmd_detect(
    cfg: &Config,
    mode: EvalMode,
    text_path: &Path,
    record: Option<&Path>,
    words: Option<&str>,
    verbose: bool,
    out: Option<&Path>,
) -> anyhow::Result<i32> {
    let text = read_text(text_path)?;
    let words = detect_words(record, words)?;
    let model = load_model(cfg)?;
    if words.is_empty() || unique_tokens(&text).is_empty() {
        return Err(Error::EmptyText.into());
    }
    let (r, session): (DetectionResult, _) = match mode {
        EvalMode::Mpc => {
            let res = run_session(&cfg.session, |p| {
                let me = p.id();
                let emb = pipeline::setup(p, (me == PartyId::P2).then_some(&model))?;
                let ctx = Context {
                    embedder: &emb,
                    tokenizer: model.tokenizer(),
                    params: &cfg.params,
                };
                let is1 = me == PartyId::P1;
                let r = pipeline::detect(p, ctx, is1.then_some(text.as_str()), is1.then_some(&words[..]), verbose)?;
                p.set_phase(Phase::Program);
                Ok(r)
            })?;
            let s = summary(&cfg.session, res.comm(), &res.reports);
            let [r, _, _] = res.outputs;
            (r.unwrap(), Some(s))
        }
        EvalMode::Plaintext => (
            plain::detect(&model, cfg.session.fixed()?, &text, &words, &cfg.params, verbose)?,
            None,
        ),
    };
    emit(
        &DetectReport {
            detected: r.detected,
            c: r.matched,
            watermark_len: r.watermark_len,
            session,
        },
        out,
    )?;
    Ok(if r.detected { 0 } else { 1 })
}

/// Insert into every candidate text with this system's inserter.
fn self_insert(cfg: &Config, mode: EvalMode, corpus: &Corpus, model: &EmbedderModel) -> privmark_core::Result<Vec<Inserted>> {
    let tables = load_tables(cfg)?;
    let inserter = cfg.inserter();
    match mode {
        EvalMode::Mpc => {
            let res = run_session(&cfg.session, |p| {
                let me = p.id();
                let emb = pipeline::setup(p, (me == PartyId::P2).then_some(model))?;
                let ctx = Context {
                    embedder: &emb,
                    tokenizer: model.tokenizer(),
                    params: &cfg.params,
                };
                let mut done = Vec::new();
                for r in &corpus.records {
                    let t = (me == PartyId::P1).then_some(r.candidate_text.as_str());
                    if let Some(o) = pipeline::mark_insert(p, ctx, &tables.0[me.index()], t, inserter.as_ref())? {
                        done.push(Inserted {
                            text: o.text,
                            words: o.record.watermark_words,
                        });
                    }
                }
                Ok(done)
            })?;
            let [d, _, _] = res.outputs;
            Ok(d)
        }
        EvalMode::Plaintext => {
            let set = load_embeddings(cfg.require("embeddings", &cfg.embeddings)?)?;
            let fx = cfg.session.fixed()?;
            let t1 = &tables.0[0];
            let rows = plain::table_rows(fx, &set, &t1.rows)?;
            corpus
                .records
                .iter()
                .map(|r| {
                    let sel = plain::select_words(model, fx, t1.vocab.as_ref().unwrap(), &rows, &r.candidate_text, &cfg.params)?;
                    let prompt = pipeline::build_prompt(&sel.words, &r.candidate_text);
                    let text = inserter.rewrite(&pipeline::InsertRequest {
                        prompt: &prompt,
                        text: &r.candidate_text,
                        words: &sel.words,
                    })?;
                    Ok(Inserted { text, words: sel.words })
                })
                .collect()
        }
    }
}

pub fn eval_report(cfg: &Config, mode: EvalMode, self_ins: bool) -> privmark_core::Result<EvalReport> {
    let corpus = Corpus::load(cfg.require("corpus", &cfg.corpus)?)?;
    let model = load_model(cfg)?;
    let originals = if self_ins && !corpus.records.is_empty() {
        Some(self_insert(cfg, mode, &corpus, &model)?)
    } else {
        None
    };
    let mut r = evaluate(&corpus, &model, &cfg.params, mode, &cfg.session, originals.as_deref())?;
    if self_ins {
        r.source = "self-consistency".into();
    }
    Ok(r)
}

fn cmd_eval(cfg: &Config, mode: EvalMode, self_ins: bool, out: Option<&Path>) -> anyhow::Result<i32> {
    let r = eval_report(cfg, mode, self_ins)?;
    eprint!("{}", r.to_table());
    emit(&r, out)?;
    if r.records == 0 {
        eprintln!("error: corpus has no usable records");
        return Ok(2);
    }
    Ok(0)
}

fn cmd_party(cfg: &Config, out: Option<&Path>) -> anyhow::Result<i32> {
    let me = cfg.party_id()?;
    let peers = cfg.peers()?;
    let job = cfg
        .job
        .clone()
        .ok_or_else(|| Error::Config("config has no job for the party".into()))?;
    let ring = cfg.session.ring()?;
    // load inputs before connecting so that file errors do not stall peers
    let model = match (&job, me) {
        (PartyJob::Insert { .. } | PartyJob::Detect { .. }, PartyId::P2) => Some(load_model(cfg)?),
        _ => None,
    };
    let tok_model = match &job {
        PartyJob::Insert { .. } | PartyJob::Detect { .. } => Some(load_model(cfg)?),
        _ => None,
    };
    let vocab: Option<Vocabulary> = match (&job, me) {
        (PartyJob::SectableBuild, PartyId::P1) => Some(load_vocabulary(cfg.require("vocabulary", &cfg.vocabulary)?)?),
        _ => None,
    };
    let set: Option<EmbeddingSet> = match (&job, me) {
        (PartyJob::SectableBuild, PartyId::P2) => Some(load_embeddings(cfg.require("embeddings", &cfg.embeddings)?)?),
        _ => None,
    };
    let table = match &job {
        PartyJob::Insert { .. } => Some(table::load(cfg.require("table", &cfg.table)?, me, cfg.session.fixed()?)?),
        _ => None,
    };
    let p1_text = match (&job, me) {
        (PartyJob::Insert { text, .. } | PartyJob::Detect { text, .. }, PartyId::P1) => Some(read_text(text)?),
        _ => None,
    };
    let p1_words = match (&job, me) {
        (PartyJob::Detect { record, .. }, PartyId::P1) => Some(WatermarkRecord::load(record)?.watermark_words),
        _ => None,
    };
    let inserter = cfg.inserter();

    let transport = TcpTransport::establish(me, peers[me.index()], &peers, cfg.session.timeout())?;
    let (value, report) = run_party(me, &cfg.session, Box::new(transport), |p| -> privmark_core::Result<serde_json::Value> {
        match &job {
            PartyJob::Echo => {
                let v = me.index() as u64 + 1;
                p.send_elems(me.next(), &[v])?;
                let got = p.recv_elems(me.prev(), 1)?;
                Ok(serde_json::json!({ "sent": v, "received": got[0] }))
            }
            PartyJob::SectableBuild => {
                let t = build_sectable(p, vocab.as_ref(), set.as_ref())?;
                table::save(cfg.require("table", &cfg.table)?, &t, ring, cfg.session.session_id)?;
                Ok(serde_json::json!({ "m": t.m(), "d": t.d() }))
            }
            PartyJob::Insert { record, .. } => {
                let tm = tok_model.as_ref().unwrap();
                let emb = pipeline::setup(p, model.as_ref())?;
                let ctx = Context {
                    embedder: &emb,
                    tokenizer: tm.tokenizer(),
                    params: &cfg.params,
                };
                match pipeline::mark_insert(p, ctx, table.as_ref().unwrap(), p1_text.as_deref(), inserter.as_ref())? {
                    Some(o) => {
                        o.record.save(record)?;
                        Ok(serde_json::json!({ "text": o.text, "record": record.display().to_string() }))
                    }
                    None => Ok(serde_json::Value::Null),
                }
            }
            PartyJob::Detect { .. } => {
                let tm = tok_model.as_ref().unwrap();
                let emb = pipeline::setup(p, model.as_ref())?;
                let ctx = Context {
                    embedder: &emb,
                    tokenizer: tm.tokenizer(),
                    params: &cfg.params,
                };
                match pipeline::detect(p, ctx, p1_text.as_deref(), p1_words.as_deref(), false)? {
                    Some(d) => Ok(serde_json::to_value(d)?),
                    None => Ok(serde_json::Value::Null),
                }
            }
        }
    })?;
    emit(
        &serde_json::json!({
            "party": me.to_string(),
            "result": value,
            "comm": report.stats,
            "transcript": report.transcript.sha256,
        }),
        out,
    )?;
    Ok(0)
}

/// `target` relative to `dir` when it lies inside it, else absolute.
fn relative_to(dir: &Path, target: &Path) -> PathBuf {
    let abs = std::fs::canonicalize(target).unwrap_or_else(|_| target.to_path_buf());
    match std::fs::canonicalize(dir) {
        Ok(d) => abs.strip_prefix(&d).map(Path::to_path_buf).unwrap_or(abs),
        Err(_) => abs,
    }
}

fn cmd_gen_toy(cfg: &Config, dir: &Path, corpus: Option<&Path>, dim: usize, vocab_size: usize) -> anyhow::Result<i32> {
    std::fs::create_dir_all(dir)?;
    let seed = cfg.session.seed;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let (model, vocab, set) = match corpus {
        Some(c) => {
            let corpus = Corpus::load(c)?;
            let mut tokens = std::collections::BTreeSet::new();
            let mut words = std::collections::BTreeSet::new();
            for r in &corpus.records {
                for t in [&r.candidate_text, &r.removing_attack, &r.paraphrase_attack] {
                    tokens.extend(tokenize(t));
                }
                for w in &r.watermark_words {
                    tokens.extend(tokenize(w));
                    words.extend(tokenize(w));
                }
                words.extend(tokenize(&r.candidate_text).into_iter().filter(|t| t.chars().count() >= 7));
            }
            let model = toy::trigram_embedder(tokens.into_iter().collect(), dim, seed)?;
            let vocab = Vocabulary::from_words(words)?;
            let n = vocab.len() + vocab.len() / 4;
            let set = toy::document_embeddings(&mut rng, &model, n, 8)?;
            (model, vocab, set)
        }
        None => {
            let w = toy::ToyWorld::generate(seed, vocab_size, vocab_size, dim, 2 * vocab_size)?;
            (w.model, w.vocab, w.set)
        }
    };
    std::fs::write(dir.join("embedder.txt"), model.to_text())?;
    std::fs::write(dir.join("vocabulary.txt"), vocab.words().join("\n") + "\n")?;
    std::fs::write(dir.join("embeddings.txt"), set.to_text())?;
    let cfg_out = Config {
        session: cfg.session.clone(),
        params: cfg.params.clone(),
        embedder: Some("embedder.txt".into()),
        vocabulary: Some("vocabulary.txt".into()),
        embeddings: Some("embeddings.txt".into()),
        table: Some("table".into()),
        corpus: corpus.map(|c| relative_to(dir, c)),
        ..Config::default()
    };
    std::fs::write(dir.join("config.json"), serde_json::to_string_pretty(&cfg_out)? + "\n")?;
    println!(
        "{}",
        serde_json::to_string_pretty(&serde_json::json!({
            "dir": dir.display().to_string(),
            "tokens": model.tokenizer().rows() - 1,
            "vocabulary": vocab.len(),
            "embeddings": set.len(),
            "dim": dim,
        }))?
    );
    Ok(0)
}
