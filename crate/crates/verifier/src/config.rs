//! Run configuration: the group, ρ, the length bound, the ζ grid and the requested checks.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use shl_core::coxeter::{CoxeterSystem, DominantWeight, RepChoice, RhoChoice};
use shl_core::numeric::Rational;

use crate::VerifierError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    Soergel,
    Hl,
    Hr,
    Local,
    Embedding,
    Rouquier,
    Coinvariant,
    Zeta,
}

impl Check {
    pub const ALL: [Check; 8] =
        [Check::Soergel, Check::Hl, Check::Hr, Check::Local, Check::Embedding, Check::Rouquier, Check::Coinvariant, Check::Zeta];

    pub fn name(self) -> &'static str {
        match self {
            Check::Soergel => "soergel",
            Check::Hl => "hl",
            Check::Hr => "hr",
            Check::Local => "local",
            Check::Embedding => "embedding",
            Check::Rouquier => "rouquier",
            Check::Coinvariant => "coinvariant",
            Check::Zeta => "zeta",
        }
    }

    pub fn parse(s: &str) -> Result<Check, VerifierError> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s.trim())
            .ok_or_else(|| VerifierError::Config(format!("unknown check {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RepConfig {
    #[default]
    Geometric,
    Doubled,
}

/// `"canonical"`, or coordinates of ρ in h* as rational strings.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RhoConfig {
    #[default]
    #[serde(with = "canonical_tag")]
    Canonical,
    Coordinates(Vec<String>),
}

mod canonical_tag {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str("canonical")
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<(), D::Error> {
        let s = String::deserialize(d)?;
        if s == "canonical" {
            Ok(())
        } else {
            Err(serde::de::Error::custom(format!("expected \"canonical\", got {s:?}")))
        }
    }
}

fn default_grid() -> Vec<String> {
    ["0", "1/2", "1", "2", "10"].iter().map(|s| s.to_string()).collect()
}

fn default_checks() -> BTreeSet<Check> {
    Check::ALL.into_iter().collect()
}

fn default_cap() -> usize {
    shl_core::hodge::DEFAULT_DIMENSION_CAP
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Entries m_st; 0 stands for ∞.
    pub coxeter_matrix: Vec<Vec<u32>>,
    #[serde(default)]
    pub rep_choice: RepConfig,
    #[serde(default)]
    pub rho: RhoConfig,
    pub max_length: usize,
    #[serde(default = "default_grid")]
    pub zeta_grid: Vec<String>,
    #[serde(default = "default_checks")]
    pub checks: BTreeSet<Check>,
    #[serde(default = "default_cap")]
    pub dimension_cap: usize,
    /// Overridden by SHL_CACHE_DIR when set.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cache_dir: Option<PathBuf>,
    #[serde(default)]
    pub stop_on_failure: bool,
}

impl RunConfig {
    pub fn new(coxeter_matrix: Vec<Vec<u32>>, max_length: usize) -> Self {
        RunConfig {
            coxeter_matrix,
            rep_choice: RepConfig::Geometric,
            rho: RhoConfig::Canonical,
            max_length,
            zeta_grid: default_grid(),
            checks: default_checks(),
            dimension_cap: default_cap(),
            cache_dir: None,
            stop_on_failure: false,
        }
    }

    pub fn load(path: &Path) -> Result<Self, VerifierError> {
        let text = std::fs::read_to_string(path).map_err(|e| VerifierError::Io(path.to_path_buf(), e))?;
        let cfg: RunConfig = serde_json::from_str(&text).map_err(|e| VerifierError::Config(format!("{}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), VerifierError> {
        let grid = self.parsed_grid()?;
        if self.checks.contains(&Check::Zeta) && !grid.iter().any(|z| z.is_zero()) {
            return Err(VerifierError::Config("zeta_grid must contain 0 when the zeta check is requested".into()));
        }
        if self.coxeter_matrix.is_empty() {
            return Err(VerifierError::Config("empty Coxeter matrix".into()));
        }
        Ok(())
    }

    pub fn parsed_grid(&self) -> Result<Vec<Rational>, VerifierError> {
        self.zeta_grid
            .iter()
            .map(|s| {
                let q: Rational = s.parse().map_err(|_| VerifierError::Config(format!("bad rational {s:?} in zeta_grid")))?;
                if q.signum() < 0 {
                    return Err(VerifierError::Config(format!("negative ζ {s}")));
                }
                Ok(q)
            })
            .collect()
    }

    pub fn system(&self) -> Result<std::sync::Arc<CoxeterSystem>, VerifierError> {
        let rep = match self.rep_choice {
            RepConfig::Geometric => RepChoice::Geometric,
            RepConfig::Doubled => RepChoice::Doubled,
        };
        Ok(CoxeterSystem::new(self.coxeter_matrix.clone(), rep)?)
    }

    pub fn weight(&self, sys: &CoxeterSystem) -> Result<DominantWeight, VerifierError> {
        let choice = match &self.rho {
            RhoConfig::Canonical => RhoChoice::Canonical,
            RhoConfig::Coordinates(c) => {
                let f = sys.field();
                let vals = c
                    .iter()
                    .map(|s| s.parse::<Rational>().map(|q| f.from_rational(q)))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|_| VerifierError::Config("bad rational in rho".into()))?;
                RhoChoice::Coordinates(vals)
            }
        };
        Ok(sys.choose_rho(choice)?)
    }

    /// The cache directory: SHL_CACHE_DIR, else `cache_dir`.
    pub fn effective_cache_dir(&self) -> Option<PathBuf> {
        std::env::var_os("SHL_CACHE_DIR").map(PathBuf::from).or_else(|| self.cache_dir.clone())
    }

    /// SHA-256 of the canonical JSON form, without the cache location.
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.cache_dir = None;
        let text = serde_json::to_string(&c).expect("config serializes");
        hex::encode(Sha256::digest(text.as_bytes()))
    }
}

/// Coxeter matrices of named types: A_n, B_n, D_n, E6–E8, F4, H3, H4, I2(m), and "U2" for m = ∞.
pub fn named_matrix(name: &str) -> Result<Vec<Vec<u32>>, VerifierError> {
    let bad = || VerifierError::Config(format!("unknown group {name:?}"));
    let name = name.trim();
    let line = |n: usize, edges: &[(usize, usize, u32)]| {
        let mut m = vec![vec![2u32; n]; n];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1;
        }
        for &(a, b, w) in edges {
            m[a][b] = w;
            m[b][a] = w;
        }
        m
    };
    if let Some(rest) = name.strip_prefix("I2(").and_then(|r| r.strip_suffix(')')) {
        let m: u32 = rest.parse().map_err(|_| bad())?;
        if m < 2 {
            return Err(bad());
        }
        return Ok(line(2, &[(0, 1, m)]));
    }
    if name == "U2" {
        return Ok(line(2, &[(0, 1, 0)]));
    }
    let (kind, n) = name.split_at(1);
    let n: usize = n.parse().map_err(|_| bad())?;
    let chain = |n: usize| (0..n.saturating_sub(1)).map(|i| (i, i + 1, 3)).collect::<Vec<_>>();
    match kind {
        "A" if n >= 1 => Ok(line(n, &chain(n))),
        "B" | "C" if n >= 2 => {
            let mut e = chain(n);
            e[n - 2].2 = 4;
            Ok(line(n, &e))
        }
        "D" if n >= 4 => {
            let mut e = chain(n - 1);
            e.push((n - 3, n - 1, 3));
            Ok(line(n, &e))
        }
        "E" if (6..=8).contains(&n) => {
            let mut e = chain(n - 1);
            e.push((2, n - 1, 3));
            Ok(line(n, &e))
        }
        "F" if n == 4 => Ok(line(4, &[(0, 1, 3), (1, 2, 4), (2, 3, 3)])),
        "G" if n == 2 => Ok(line(2, &[(0, 1, 6)])),
        "H" if n == 3 || n == 4 => {
            let mut e = chain(n);
            e[0].2 = 5;
            Ok(line(n, &e))
        }
        _ => Err(bad()),
    }
}

/// Rows separated by ';', entries by whitespace or ','.
pub fn parse_matrix(text: &str) -> Result<Vec<Vec<u32>>, VerifierError> {
    text.split(';')
        .filter(|r| !r.trim().is_empty())
        .map(|row| {
            row.split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<u32>().map_err(|_| VerifierError::Config(format!("bad matrix entry {t:?}"))))
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_defaults() {
        let cfg: RunConfig = serde_json::from_str(r#"{"coxeter_matrix": [[1,3],[3,1]], "max_length": 3}"#).unwrap();
        assert_eq!(cfg, RunConfig::new(vec![vec![1, 3], vec![3, 1]], 3));
        let back: RunConfig = serde_json::from_str(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(back, cfg);
        cfg.validate().unwrap();
    }

    #[test]
    fn rho_forms() {
        let c: RunConfig =
            serde_json::from_str(r#"{"coxeter_matrix": [[1,3],[3,1]], "max_length": 1, "rho": ["1", "3/2"]}"#).unwrap();
        assert_eq!(c.rho, RhoConfig::Coordinates(vec!["1".into(), "3/2".into()]));
        let c: RunConfig =
            serde_json::from_str(r#"{"coxeter_matrix": [[1,3],[3,1]], "max_length": 1, "rho": "canonical"}"#).unwrap();
        assert_eq!(c.rho, RhoConfig::Canonical);
        assert!(serde_json::from_str::<RunConfig>(r#"{"coxeter_matrix": [[1]], "max_length": 1, "rho": "other"}"#).is_err());
    }

    #[test]
    fn zeta_grid_needs_zero() {
        let mut cfg = RunConfig::new(vec![vec![1]], 1);
        cfg.zeta_grid = vec!["1".into()];
        assert!(cfg.validate().is_err());
        cfg.checks.remove(&Check::Zeta);
        cfg.validate().unwrap();
        cfg.zeta_grid = vec!["-1".into()];
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn hash_changes_with_config() {
        let a = RunConfig::new(vec![vec![1, 3], vec![3, 1]], 3);
        let mut b = a.clone();
        assert_eq!(a.hash(), b.hash());
        b.cache_dir = Some("/tmp/x".into());
        assert_eq!(a.hash(), b.hash());
        b.max_length = 2;
        assert_ne!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 64);
    }

    #[test]
    fn named_groups() {
        assert_eq!(named_matrix("A2").unwrap(), vec![vec![1, 3], vec![3, 1]]);
        assert_eq!(named_matrix("B2").unwrap(), vec![vec![1, 4], vec![4, 1]]);
        assert_eq!(named_matrix("I2(5)").unwrap(), vec![vec![1, 5], vec![5, 1]]);
        assert_eq!(named_matrix("U2").unwrap(), vec![vec![1, 0], vec![0, 1]]);
        assert_eq!(named_matrix("H3").unwrap(), vec![vec![1, 5, 2], vec![5, 1, 3], vec![2, 3, 1]]);
        assert_eq!(named_matrix("D4").unwrap()[1][3], 3);
        assert!(named_matrix("X9").is_err());
        assert_eq!(parse_matrix("1 3; 3 1").unwrap(), vec![vec![1, 3], vec![3, 1]]);
    }
}
