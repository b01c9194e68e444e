use std::net::TcpListener;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use serde_json::{json, Value};
use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_privmark"));
    c.env_remove("PRIVMARK_CONFIG");
    c
}

fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap_or(-1)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Shipped data with a fresh table in a temp dir.
struct Shipped {
    dir: TempDir,
    config: PathBuf,
}

fn shipped() -> Shipped {
    let dir = TempDir::new().unwrap();
    let mut cfg: Value = serde_json::from_str(&std::fs::read_to_string(data_dir().join("config.json")).unwrap()).unwrap();
    for key in ["embedder", "vocabulary", "embeddings", "corpus"] {
        let p = data_dir().join(cfg[key].as_str().unwrap());
        cfg[key] = json!(p.canonicalize().unwrap());
    }
    cfg["table"] = json!(dir.path().join("table"));
    let config = dir.path().join("config.json");
    std::fs::write(&config, serde_json::to_vec_pretty(&cfg).unwrap()).unwrap();
    let o = run(&["--config", s(&config), "sectable", "build"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    Shipped { dir, config }
}

fn first_record_text() -> String {
    let corpus: Value = serde_json::from_str(&std::fs::read_to_string(data_dir().join("corpus.json")).unwrap()).unwrap();
    corpus[0]["candidate_text"].as_str().unwrap().to_string()
}

#[test]
fn insert_then_detect_succeeds() {
    let sh = shipped();
    let text = sh.dir.path().join("in.txt");
    std::fs::write(&text, first_record_text()).unwrap();
    let record = sh.dir.path().join("record.json");
    let o = run(&["--config", s(&sh.config), "insert", "--text", s(&text), "--record", s(&record)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let rep: Value = serde_json::from_slice(&o.stdout).unwrap();
    let marked = sh.dir.path().join("marked.txt");
    std::fs::write(&marked, rep["text"].as_str().unwrap()).unwrap();
    let words = rep["watermark_words"].as_array().unwrap();
    assert!(!words.is_empty());
    assert_eq!(rep["filtered"].as_array().unwrap().len(), words.len());

    let o = run(&[
        "--config",
        s(&sh.config),
        "--verbose-count",
        "detect",
        "--text",
        s(&marked),
        "--record",
        s(&record),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let det: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(det["detected"], json!(true));
    assert_eq!(det["c"].as_u64().unwrap() as usize, words.len());
}

fn orthogonal_config(dir: &Path) -> PathBuf {
    let n = 30;
    let mut emb = format!("{n} {n}\n");
    for i in 0..n {
        let row: Vec<String> = (0..n).map(|j| if i == j { "1".into() } else { "0".into() }).collect();
        emb.push_str(&format!("w{i} {}\n", row.join(" ")));
    }
    std::fs::write(dir.join("embedder.txt"), emb).unwrap();
    std::fs::write(dir.join("text.txt"), "w0 w1 w2 w3 w4 w5 w6 w7 w8 w9").unwrap();
    let config = dir.join("config.json");
    std::fs::write(&config, r#"{"embedder": "embedder.txt"}"#).unwrap();
    config
}

#[test]
fn detect_exit_codes() {
    let dir = TempDir::new().unwrap();
    let config = orthogonal_config(dir.path());
    let text = dir.path().join("text.txt");
    let o = run(&["--config", s(&config), "detect", "--text", s(&text), "--words", "w20,w21,w22,w23"]);
    assert_eq!(code(&o), 1, "{}", String::from_utf8_lossy(&o.stderr));
    let o = run(&["--config", s(&config), "detect", "--text", s(&text), "--words", "w1,w2,w22"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let o = run(&["--config", s(&config), "--mode", "plaintext", "detect", "--text", s(&text), "--words", "w1,w2,w22"]);
    assert_eq!(code(&o), 0);
    let o = run(&["--config", s(&config), "detect", "--text", s(&text), "--words", ","]);
    assert_eq!(code(&o), 2);
}

#[test]
fn missing_table_is_an_error() {
    let dir = TempDir::new().unwrap();
    let text = dir.path().join("in.txt");
    std::fs::write(&text, "some words here").unwrap();
    let config = data_dir().join("config.json");
    let o = run(&[
        "--config",
        s(&config),
        "insert",
        "--text",
        s(&text),
        "--table",
        s(&dir.path().join("nowhere")),
        "--record",
        s(&dir.path().join("r.json")),
    ]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
}

#[test]
fn mismatched_fraction_bits_are_rejected() {
    let sh = shipped();
    let mut cfg: Value = serde_json::from_str(&std::fs::read_to_string(&sh.config).unwrap()).unwrap();
    cfg["session"]["frac_bits"] = json!(16);
    let other = sh.dir.path().join("f16.json");
    std::fs::write(&other, serde_json::to_vec(&cfg).unwrap()).unwrap();
    let text = sh.dir.path().join("in.txt");
    std::fs::write(&text, first_record_text()).unwrap();
    let o = run(&["--config", s(&other), "insert", "--text", s(&text), "--record", s(&sh.dir.path().join("r.json"))]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("fraction bits"));
}

#[test]
fn empty_corpus_fails() {
    let sh = shipped();
    let empty = sh.dir.path().join("empty.json");
    std::fs::write(&empty, "[]").unwrap();
    let o = run(&["--config", s(&sh.config), "eval", "--corpus", s(&empty)]);
    assert_ne!(code(&o), 0);
}

#[test]
fn bad_arguments_exit_2() {
    assert_eq!(code(&run(&["insert"])), 2);
    assert_eq!(code(&run(&["--mode", "quantum", "detect", "--text", "x", "--words", "a"])), 2);
    assert_eq!(code(&run(&["--help"])), 0);
}

pub fn bench_json(stdout: &[u8]) -> Value {
    let text = String::from_utf8_lossy(stdout);
    let start = text.find("\n\n{").expect("table then JSON");
    serde_json::from_str(&text[start + 2..]).unwrap()
}

#[test]
fn bench_rows_and_traffic() {
    let o = run(&["--seed", "3", "bench", "--vocab-size", "100", "--dim", "64", "--words", "100"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let table = String::from_utf8_lossy(&o.stdout);
    for h in ["Phase", "localhost (s)", "lan (s)", "wan (s)", "Comm (MB)"] {
        assert!(table.contains(h), "{h}");
    }
    let rep = bench_json(&o.stdout);
    let rows = rep["rows"].as_array().unwrap();
    let names: Vec<&str> = rows.iter().map(|r| r["phase"].as_str().unwrap()).collect();
    assert_eq!(names, ["Embed", "Cosine", "Topk", "Insert", "Detect"]);
    assert_eq!(rows[1]["bytes"], json!(2400));
    for r in rows {
        let t = &r["seconds"];
        let (l, n, w) = (t["localhost"].as_f64().unwrap(), t["lan"].as_f64().unwrap(), t["wan"].as_f64().unwrap());
        assert!(l <= n && n <= w, "{r}");
    }
}

#[test]
fn seeded_insert_is_reproducible() {
    let sh = shipped();
    let text = sh.dir.path().join("in.txt");
    std::fs::write(&text, first_record_text()).unwrap();
    let record = sh.dir.path().join("r.json");
    let mut outs = Vec::new();
    for _ in 0..2 {
        let o = run(&["--config", s(&sh.config), "--seed", "99", "insert", "--text", s(&text), "--record", s(&record)]);
        assert_eq!(code(&o), 0);
        outs.push((o.stdout, std::fs::read(&record).unwrap()));
    }
    assert_eq!(outs[0], outs[1]);
    let o = run(&["--config", s(&sh.config), "--seed", "100", "insert", "--text", s(&text), "--record", s(&record)]);
    assert_ne!(o.stdout, outs[0].0);
}

fn free_ports() -> [String; 3] {
    let l: Vec<TcpListener> = (0..3).map(|_| TcpListener::bind("127.0.0.1:0").unwrap()).collect();
    let a: Vec<String> = l.iter().map(|x| x.local_addr().unwrap().to_string()).collect();
    [a[0].clone(), a[1].clone(), a[2].clone()]
}

fn party_configs(dir: &Path, job: Value, extra: &Value) -> Vec<PathBuf> {
    let peers = free_ports();
    (1..=3)
        .map(|i| {
            let mut cfg = json!({
                "session": { "seed": 5, "session_id": 77, "timeout_ms": 20000 },
                "peers": peers,
                "party": format!("P{i}"),
                "job": job,
            });
            for (k, v) in extra.as_object().unwrap() {
                cfg[k] = v.clone();
            }
            let p = dir.join(format!("p{i}.json"));
            std::fs::write(&p, serde_json::to_vec_pretty(&cfg).unwrap()).unwrap();
            p
        })
        .collect()
}

fn run_parties(configs: &[PathBuf]) -> Vec<Output> {
    let children: Vec<_> = configs
        .iter()
        .map(|c| {
            bin()
                .args(["--config", s(c), "party"])
                .stdout(Stdio::piped())
                .stderr(Stdio::piped())
                .spawn()
                .unwrap()
        })
        .collect();
    children.into_iter().map(|c| c.wait_with_output().unwrap()).collect()
}

#[test]
fn three_processes_over_loopback() {
    let dir = TempDir::new().unwrap();
    let outs = run_parties(&party_configs(dir.path(), json!({"kind": "echo"}), &json!({})));
    for (i, o) in outs.iter().enumerate() {
        assert_eq!(code(o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        let v: Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(v["result"]["received"], json!((i + 2) % 3 + 1));
    }

    let d = data_dir().canonicalize().unwrap();
    let extra = json!({
        "vocabulary": d.join("vocabulary.txt"),
        "embeddings": d.join("embeddings.txt"),
        "table": dir.path().join("table"),
    });
    let outs = run_parties(&party_configs(dir.path(), json!({"kind": "sectable-build"}), &extra));
    let errs: Vec<_> = outs.iter().map(|o| String::from_utf8_lossy(&o.stderr).to_string()).collect();
    for o in &outs {
        assert_eq!(code(o), 0, "{errs:?}");
    }
    for i in 1..=3 {
        assert!(dir.path().join(format!("table/party{i}.shares")).exists());
    }
    assert!(dir.path().join("table/index.json").exists());

    let text = dir.path().join("in.txt");
    std::fs::write(&text, first_record_text()).unwrap();
    let record = dir.path().join("record.json");
    let mut extra = extra;
    extra["embedder"] = json!(d.join("embedder.txt"));
    let outs = run_parties(&party_configs(
        dir.path(),
        json!({"kind": "insert", "text": text, "record": record}),
        &extra,
    ));
    for o in &outs {
        assert_eq!(code(o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    }
    let p1: Value = serde_json::from_slice(&outs[0].stdout).unwrap();
    let marked = dir.path().join("marked.txt");
    std::fs::write(&marked, p1["result"]["text"].as_str().unwrap()).unwrap();
    let transcripts: Vec<String> = outs
        .iter()
        .map(|o| serde_json::from_slice::<Value>(&o.stdout).unwrap()["transcript"].as_str().unwrap().to_string())
        .collect();
    assert!(transcripts.iter().all(|t| t.len() == 64));

    let outs = run_parties(&party_configs(
        dir.path(),
        json!({"kind": "detect", "text": marked, "record": record}),
        &extra,
    ));
    for o in &outs {
        assert_eq!(code(o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    }
    let p1: Value = serde_json::from_slice(&outs[0].stdout).unwrap();
    assert_eq!(p1["result"]["detected"], json!(true));
    let p2: Value = serde_json::from_slice(&outs[1].stdout).unwrap();
    assert_eq!(p2["result"], Value::Null);
}

#[test]
fn unreachable_peers_exit_3() {
    let dir = TempDir::new().unwrap();
    let cfgs = party_configs(dir.path(), json!({"kind": "echo"}), &json!({}));
    let mut cfg: Value = serde_json::from_str(&std::fs::read_to_string(&cfgs[0]).unwrap()).unwrap();
    cfg["session"]["timeout_ms"] = json!(1500);
    std::fs::write(&cfgs[0], serde_json::to_vec(&cfg).unwrap()).unwrap();
    let o = bin().args(["--config", s(&cfgs[0]), "party"]).output().unwrap();
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
}
