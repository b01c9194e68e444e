//! Share-file layout of a table directory.

use std::path::{Path, PathBuf};

use privmark_core::fixed::FixedPoint;
use privmark_core::ring::Ring;
use privmark_core::sectable::{IndexMap, SecTable};
use privmark_core::sharing::PartyId;
use privmark_core::{Error, Result};

pub fn share_path(dir: &Path, p: PartyId) -> PathBuf {
    dir.join(format!("party{}.shares", p.index() + 1))
}

pub fn index_path(dir: &Path) -> PathBuf {
    dir.join("index.json")
}

/// Write one party's view; P1 also writes the index map.
pub fn save(dir: &Path, table: &SecTable, ring: Ring, session: u64) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    table.save_shares(share_path(dir, table.owner()), ring, session)?;
    if let Some(map) = table.index_map() {
        map.save(index_path(dir))?;
    }
    Ok(())
}

/// Load party `p`'s view and check it against the session encoding.
pub fn load(dir: &Path, p: PartyId, fx: FixedPoint) -> Result<SecTable> {
    let ring = fx.ring;
    let vocab = if p == PartyId::P1 {
        Some(IndexMap::load(index_path(dir))?.vocabulary()?)
    } else {
        None
    };
    let (t, r) = SecTable::load_shares(share_path(dir, p), vocab)?;
    if r != ring {
        return Err(Error::Config(format!(
            "table was shared over a {}-bit ring, session uses {}",
            r.bits(),
            ring.bits()
        )));
    }
    if t.table.frac_bits() != fx.frac_bits {
        return Err(Error::Config(format!(
            "table was encoded with {} fraction bits, session uses {}",
            t.table.frac_bits(),
            fx.frac_bits
        )));
    }
    if t.owner() != p {
        return Err(Error::Format(format!("{} holds the share file of {}", p, t.owner())));
    }
    Ok(t)
}
