//! Flat `key = value` configuration.
//!
//! Blank lines and lines starting with `#` are ignored; everything after the
//! first `=` is the value (trimmed). Later sources override earlier ones:
//! config file, then `--set key=value`, then dedicated flags.
//!
//! | key | used by | meaning |
//! |---|---|---|
//! | `group` | all | group spec, e.g. `free_abelian(2)`, `extension(free_abelian(2),free_abelian(1),heisenberg)` |
//! | `radius` | ball, verify, estimate, cache | ball radius |
//! | `budget_bytes` | ball, cache | memory budget for enumeration |
//! | `cache` | ball | `true` to read/write the ball cache |
//! | `cache_dir` | ball, cache | cache directory (`HSCOMP_CACHE_DIR` wins) |
//! | `lemma` | verify | `schoenberg`, `poly`, `hyp`, `combine` |
//! | `n` | verify | scale, `N` or inclusive range `A..B` |
//! | `p`, `q` | verify | lemma exponents (`q` defaults to the midpoint rule) |
//! | `delta`, `c`, `c_tilde`, `d_const`, `d_tilde` | verify, bound | compression profile / sequence constants |
//! | `c_exp`, `c_tilde_exp`, `d_const_exp`, `d_tilde_exp` | bound | monomial exponents of the sequences |
//! | `g_coef`, `g_exp` | bound | index rule g(n) = ⌈coef·n^exp⌉ |
//! | `r_exp`, `a`, `b` | verify (schoenberg) | R_n = n^r, ε_n = 1/(a·n^b) |
//! | `boundary_pre`, `boundary_period` | verify (hyp) | boundary word pre·period^∞ |
//! | `arithmetic` | verify (hyp) | `float` or `exact` |
//! | `formula` | bound | `limit`, `limit_quasi`, `direct_sum`, `extension_poly`, `extension_hyp`, `wreath` |
//! | `n_max` | bound | scan limit for limit bounds |
//! | `alpha`, `growth_degree` | bound (wreath) | factor compression and base growth degree |
//! | `embedding` | estimate | `identity` or `sqrt` |
//! | `pairs` | estimate | `basepoint` or `sampled` |
//! | `samples`, `d_min` | estimate | sample count and distance cutoff |
//! | `points` | estimate | output path for plot points |
//! | `out` | all | CSV output path (stdout when absent) |
//! | `seed` | all | RNG seed, recorded in the output |
//! | `threads` | all | worker threads (0 = all cores) |

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Display;
use std::str::FromStr;

use crate::error::CliError;

pub const KNOWN_KEYS: &[&str] = &[
    "group",
    "radius",
    "budget_bytes",
    "cache",
    "cache_dir",
    "lemma",
    "n",
    "p",
    "q",
    "delta",
    "c",
    "c_tilde",
    "d_const",
    "d_tilde",
    "c_exp",
    "c_tilde_exp",
    "d_const_exp",
    "d_tilde_exp",
    "g_coef",
    "g_exp",
    "r_exp",
    "a",
    "b",
    "boundary_pre",
    "boundary_period",
    "arithmetic",
    "formula",
    "n_max",
    "alpha",
    "growth_degree",
    "embedding",
    "pairs",
    "samples",
    "d_min",
    "points",
    "out",
    "seed",
    "threads",
];

/// Output locations and parallelism.
const UNHASHED_KEYS: &[&str] = &["out", "points", "threads", "cache_dir"];

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Config {
    values: BTreeMap<String, String>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::new("parse", format!("config line {}: expected `key = value`, got {raw:?}", i + 1)))?;
            values.insert(k.trim().to_string(), v.trim().to_string());
        }
        Ok(Config { values })
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.values.insert(key.to_string(), value.into());
    }

    /// Applies a `key=value` override.
    pub fn set_pair(&mut self, pair: &str) -> Result<(), CliError> {
        let (k, v) = pair
            .split_once('=')
            .ok_or_else(|| CliError::new("parse", format!("override {pair:?} is not `key=value`")))?;
        self.set(k.trim(), v.trim());
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    /// Sorted `key=value` lines, without keys that cannot change results.
    pub fn canonical(&self) -> String {
        self.values
            .iter()
            .filter(|(k, _)| !UNHASHED_KEYS.contains(&k.as_str()))
            .map(|(k, v)| format!("{k}={v}\n"))
            .collect()
    }

    pub fn fields(&self) -> Fields<'_> {
        Fields {
            cfg: self,
            errors: Vec::new(),
        }
    }
}

/// Typed access that collects every invalid field before failing.
pub struct Fields<'a> {
    cfg: &'a Config,
    errors: Vec<String>,
}

impl Fields<'_> {
    pub fn opt<T: FromStr>(&mut self, key: &str) -> Option<T>
    where
        T::Err: Display,
    {
        let raw = self.cfg.get(key)?;
        match raw.parse::<T>() {
            Ok(v) => Some(v),
            Err(e) => {
                self.errors.push(format!("{key}: cannot parse {raw:?} ({e})"));
                None
            }
        }
    }

    pub fn get<T: FromStr>(&mut self, key: &str, default: T) -> T
    where
        T::Err: Display,
    {
        self.opt(key).unwrap_or(default)
    }

    pub fn require<T: FromStr>(&mut self, key: &str) -> Option<T>
    where
        T::Err: Display,
    {
        if self.cfg.get(key).is_none() {
            self.errors.push(format!("{key}: required"));
            return None;
        }
        self.opt(key)
    }

    pub fn check(&mut self, ok: bool, key: &str, msg: impl Into<String>) {
        if !ok {
            self.errors.push(format!("{key}: {}", msg.into()));
        }
    }

    /// Fails with every recorded problem plus any unknown keys.
    pub fn finish(mut self) -> Result<(), CliError> {
        let known: BTreeSet<&str> = KNOWN_KEYS.iter().copied().collect();
        for k in self.cfg.values.keys() {
            if !known.contains(k.as_str()) {
                self.errors.push(format!("{k}: unknown key"));
            }
        }
        if self.errors.is_empty() {
            Ok(())
        } else {
            Err(CliError::new("invalid-parameter", self.errors.join("; ")))
        }
    }
}

/// `N` or inclusive `A..B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NRange {
    pub lo: u64,
    pub hi: u64,
}

impl FromStr for NRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parse = |t: &str| t.trim().parse::<u64>().map_err(|e| e.to_string());
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (parse(a)?, parse(b)?),
            None => {
                let v = parse(s)?;
                (v, v)
            }
        };
        if lo == 0 || lo > hi {
            return Err(format!("need 1 <= lo <= hi, got {lo}..{hi}"));
        }
        Ok(NRange { lo, hi })
    }
}

impl NRange {
    pub fn iter(&self) -> impl Iterator<Item = u64> {
        self.lo..=self.hi
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_overrides() {
        let mut cfg = Config::parse("# run\ngroup = free_abelian(2)\n\nradius=4\n").unwrap();
        cfg.set_pair("radius=6").unwrap();
        assert_eq!(cfg.get("group"), Some("free_abelian(2)"));
        assert_eq!(cfg.get("radius"), Some("6"));
        cfg.set("out", "x.csv");
        assert_eq!(cfg.canonical(), "group=free_abelian(2)\nradius=6\n");
        assert_eq!(Config::parse("oops").unwrap_err().category, "parse");
    }

    #[test]
    fn every_invalid_field_is_listed() {
        let cfg = Config::parse("radius = x\np = 2\nbogus = 1").unwrap();
        let mut f = cfg.fields();
        let _: Option<u32> = f.opt("radius");
        let p: f64 = f.get("p", 0.05);
        f.check(p < 1.0, "p", "must be below 1");
        let _: Option<String> = f.require("group");
        let err = f.finish().unwrap_err();
        assert_eq!(err.category, "invalid-parameter");
        for key in ["radius:", "p:", "group:", "bogus:"] {
            assert!(err.message.contains(key), "{}", err.message);
        }
    }

    #[test]
    fn n_ranges() {
        assert_eq!("4".parse::<NRange>().unwrap(), NRange { lo: 4, hi: 4 });
        assert_eq!("2..5".parse::<NRange>().unwrap().iter().count(), 4);
        assert!("5..2".parse::<NRange>().is_err());
        assert!("0".parse::<NRange>().is_err());
    }
}
