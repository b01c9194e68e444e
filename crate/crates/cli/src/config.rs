use std::net::SocketAddr;
use std::path::{Path, PathBuf};

use privmark_core::pipeline::{HttpInserter, Inserter, SpliceInserter, WatermarkParams};
use privmark_core::runtime::{NetworkProfile, SessionConfig};
use privmark_core::sharing::PartyId;
use privmark_core::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub session: SessionConfig,
    pub params: WatermarkParams,
    pub embedder: Option<PathBuf>,
    pub vocabulary: Option<PathBuf>,
    pub embeddings: Option<PathBuf>,
    /// directory with the three share files and the index map
    pub table: Option<PathBuf>,
    pub corpus: Option<PathBuf>,
    pub inserter: Option<InserterConfig>,
    /// listen addresses of P1, P2, P3
    pub peers: Option<[String; 3]>,
    pub party: Option<String>,
    pub job: Option<PartyJob>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InserterConfig {
    pub url: String,
    #[serde(default = "default_inserter_timeout")]
    pub timeout_ms: u64,
}

fn default_inserter_timeout() -> u64 {
    30_000
}

/// What a `party` node does in its session.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PartyJob {
    Echo,
    SectableBuild,
    Insert { text: PathBuf, record: PathBuf },
    Detect { text: PathBuf, record: PathBuf },
}

fn rebase(base: &Path, p: &mut Option<PathBuf>) {
    if let Some(x) = p {
        if x.is_relative() {
            *x = base.join(&*x);
        }
    }
}

impl Config {
    pub fn load(path: &Path) -> Result<Config> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let mut c: Config =
            serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        for p in [&mut c.embedder, &mut c.vocabulary, &mut c.embeddings, &mut c.table, &mut c.corpus] {
            rebase(base, p);
        }
        if let Some(PartyJob::Insert { text, record } | PartyJob::Detect { text, record }) = &mut c.job {
            for p in [text, record] {
                if p.is_relative() {
                    *p = base.join(&*p);
                }
            }
        }
        c.params.validate()?;
        c.session.fixed()?;
        Ok(c)
    }

    pub fn apply_seed(&mut self, seed: u64) {
        let s = SessionConfig::with_seed(seed);
        self.session.seed = s.seed;
        self.session.session_id = s.session_id;
    }

    /// `custom` keeps the profile from the config file.
    pub fn apply_profile(&mut self, name: &str) -> Result<()> {
        if name == "custom" {
            if self.session.profile.is_none() {
                return Err(Error::Config("profile custom needs session.profile in the config".into()));
            }
            return Ok(());
        }
        self.session.profile = Some(NetworkProfile::preset(name)?);
        Ok(())
    }

    pub fn require<'a>(&self, what: &str, p: &'a Option<PathBuf>) -> Result<&'a Path> {
        p.as_deref()
            .ok_or_else(|| Error::Config(format!("no {what} path given (flag or config)")))
    }

    pub fn peers(&self) -> Result<[SocketAddr; 3]> {
        let peers = self
            .peers
            .as_ref()
            .ok_or_else(|| Error::Config("config has no peers".into()))?;
        let mut out = Vec::with_capacity(3);
        for p in peers {
            out.push(
                p.parse::<SocketAddr>()
                    .map_err(|e| Error::Config(format!("peer address {p:?}: {e}")))?,
            );
        }
        Ok([out[0], out[1], out[2]])
    }

    pub fn party_id(&self) -> Result<PartyId> {
        self.party
            .as_deref()
            .ok_or_else(|| Error::Config("no party id (flag or config)".into()))?
            .parse()
    }

    pub fn inserter(&self) -> Box<dyn Inserter> {
        match &self.inserter {
            Some(h) => Box::new(HttpInserter::new(
                h.url.clone(),
                std::time::Duration::from_millis(h.timeout_ms),
            )),
            None => Box::new(SpliceInserter),
        }
    }
}
