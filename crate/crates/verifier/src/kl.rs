//! The table of h_{y,x} and g_{y,x} over the ideal.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use shl_core::coxeter::{enumerate_ideal, word_string};
use shl_core::hecke::Hecke;

use crate::cache::Cache;
use crate::config::RunConfig;
use crate::VerifierError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KlEntry {
    pub y: String,
    pub x: String,
    /// h_{y,x}
    pub h: String,
    /// g_{y,x}
    pub g: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KlTable {
    pub config_hash: String,
    /// Entries with y ≤ x, ordered by (x, y) in ideal order.
    pub entries: Vec<KlEntry>,
}

pub fn compute_kl_table(hecke: &Hecke, config_hash: String) -> KlTable {
    let ideal = hecke.ideal();
    let mut entries = Vec::new();
    for x in 0..ideal.len() {
        let inv = hecke.inverse_kl(x);
        for y in ideal.lower_set(x) {
            entries.push(KlEntry {
                y: word_string(ideal.word(y)),
                x: word_string(ideal.word(x)),
                h: hecke.kl_poly(y, x).to_string(),
                g: inv.get(&y).map(|p| p.to_string()).unwrap_or_else(|| "0".into()),
            });
        }
    }
    KlTable { config_hash, entries }
}

/// The KL table of the configured ideal, read from the cache when a valid entry exists.
pub fn kl_table(cfg: &RunConfig) -> Result<KlTable, VerifierError> {
    cfg.validate()?;
    let hash = cfg.hash();
    let cache = match cfg.effective_cache_dir() {
        Some(dir) => Some(Cache::open(&dir, &hash)?),
        None => None,
    };
    if let Some(t) = cache.as_ref().and_then(|c| c.load::<KlTable>("kl", "table")) {
        return Ok(t);
    }
    let sys = cfg.system()?;
    let hecke = Hecke::new(Arc::new(enumerate_ideal(&sys, cfg.max_length)?))?;
    let table = compute_kl_table(&hecke, hash);
    if let Some(c) = &cache {
        c.store("kl", "table", &table)?;
    }
    Ok(table)
}
