//! Flat `key = value` configuration: sweep files, config files and flags
//! merged into one map, checked before anything runs.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use strongsum::lab::{expand_id, parse_f64, InequalityId, SweepSpec};
use strongsum::strong_means::IndexSequence;

use crate::CliError;

/// Keys understood outside the sweep grids.
pub const RUN_KEYS: [&str; 18] = [
    "command",
    "ids",
    "sweep",
    "seed",
    "subsample",
    "out",
    "function",
    "x",
    "degree",
    "samples",
    "kmax",
    "indices",
    "p",
    "s",
    "levels",
    "quad_cells",
    "quad_points",
    "route",
];

pub fn is_known_key(key: &str) -> bool {
    RUN_KEYS.contains(&key) || SweepSpec::KEYS.contains(&key)
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_pairs(text: &str, origin: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("{origin}:{}: expected `key = value`", n + 1)))?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// A resolved run: the subcommand and every key it was given.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: String,
    values: BTreeMap<String, String>,
}

impl RunConfig {
    /// Merges, lowest precedence first: the sweep file named by `sweep`, the
    /// config file, then flags.
    pub fn resolve(
        command: &str,
        config_file: Option<&Path>,
        flags: Vec<(String, String)>,
    ) -> Result<Self, CliError> {
        let file_pairs = match config_file {
            Some(p) => parse_pairs(&read(p)?, &p.display().to_string())?,
            None => Vec::new(),
        };
        let sweep_choice = flags
            .iter()
            .chain(&file_pairs)
            .rev()
            .find(|(k, _)| k == "sweep")
            .map(|(_, v)| v.clone());
        let mut layers = Vec::new();
        if let Some(s) = sweep_choice.as_deref().filter(|s| !matches!(*s, "default" | "small")) {
            let p = Path::new(s);
            for (k, v) in parse_pairs(&read(p)?, s)? {
                if !SweepSpec::KEYS.contains(&k.as_str()) {
                    return Err(CliError::Config(format!("{s}: `{k}` is not a sweep key")));
                }
                layers.push((k, v));
            }
        }
        layers.extend(file_pairs);
        layers.extend(flags);

        let mut values = BTreeMap::new();
        for (k, v) in layers {
            if !is_known_key(&k) {
                return Err(CliError::Config(format!("unknown key `{k}`")));
            }
            values.insert(k, v);
        }
        if let Some(c) = values.get("command") {
            if c != command {
                return Err(CliError::Config(format!(
                    "key `command`: configuration is for `{c}`, not `{command}`"
                )));
            }
        }
        values.insert("command".into(), command.to_string());
        let cfg = Self {
            command: command.to_string(),
            values,
        };
        cfg.check_types()?;
        Ok(cfg)
    }

    fn check_types(&self) -> Result<(), CliError> {
        let mut scratch = SweepSpec::default_for(InequalityId::E1);
        for (k, v) in &self.values {
            match k.as_str() {
                "seed" => self.u64_key(k).map(|_| ())?,
                "subsample" | "degree" | "samples" | "kmax" | "levels" | "quad_cells" | "quad_points" => {
                    self.usize_key(k).map(|_| ())?
                }
                "x" | "p" | "s" => self.f64_key(k).map(|_| ())?,
                "ids" => self.ids().map(|_| ())?,
                "indices" => {
                    IndexSequence::parse(v).map_err(|e| CliError::Config(format!("key `indices`: {e}")))?;
                }
                "function" => {
                    strongsum::by_name(v).map_err(|e| CliError::Config(format!("key `function`: {e}")))?;
                }
                "route" if !matches!(v.as_str(), "dft" | "quadrature") => {
                    return Err(CliError::Config(format!("key `route`: `{v}` is not dft or quadrature")))
                }
                key if SweepSpec::KEYS.contains(&key) => {
                    scratch.set(key, v).map_err(|e| CliError::Config(e.to_string()))?
                }
                _ => {}
            }
        }
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &str)> {
        self.values.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    fn type_error(key: &str, v: &str, what: &str) -> CliError {
        CliError::Config(format!("key `{key}`: `{v}` is not {what}"))
    }

    pub fn f64_key(&self, key: &str) -> Result<Option<f64>, CliError> {
        self.get(key)
            .map(|v| parse_f64(v).ok_or_else(|| Self::type_error(key, v, "a number")))
            .transpose()
    }

    pub fn usize_key(&self, key: &str) -> Result<Option<usize>, CliError> {
        self.get(key)
            .map(|v| v.parse().map_err(|_| Self::type_error(key, v, "a nonnegative integer")))
            .transpose()
    }

    pub fn u64_key(&self, key: &str) -> Result<Option<u64>, CliError> {
        self.get(key)
            .map(|v| v.parse().map_err(|_| Self::type_error(key, v, "a nonnegative integer")))
            .transpose()
    }

    pub fn f64_list(&self, key: &str) -> Result<Option<Vec<f64>>, CliError> {
        self.get(key)
            .map(|v| {
                v.split(',')
                    .map(|t| parse_f64(t).ok_or_else(|| Self::type_error(key, v, "a list of numbers")))
                    .collect()
            })
            .transpose()
    }

    /// The ids named by `ids`, with `all` for every inequality.
    pub fn ids(&self) -> Result<Vec<InequalityId>, CliError> {
        let Some(v) = self.get("ids") else {
            return Ok(Vec::new());
        };
        if v.trim() == "all" {
            return Ok(InequalityId::ALL.to_vec());
        }
        let mut out = Vec::new();
        for t in v.split(',').filter(|t| !t.trim().is_empty()) {
            out.extend(expand_id(t).map_err(|e| CliError::Config(format!("key `ids`: {e}")))?);
        }
        Ok(out)
    }

    /// The sweep for `id`: the built-in grid named by `sweep`, overridden by
    /// every sweep key present, then optionally subsampled.
    pub fn sweep_for(&self, id: InequalityId) -> Result<SweepSpec, CliError> {
        let mut s = match self.get("sweep") {
            Some("small") => SweepSpec::small_for(id),
            _ => SweepSpec::default_for(id),
        };
        for (k, v) in &self.values {
            if SweepSpec::KEYS.contains(&k.as_str()) {
                s.set(k, v).map_err(|e| CliError::Config(e.to_string()))?;
            }
        }
        if let Some(n) = self.usize_key("subsample")? {
            let seed = self.u64_key("seed")?.unwrap_or(0);
            s.points = subsample(&s.points, n, seed);
        }
        Ok(s)
    }
}

/// `n` of the points, chosen by a seeded generator, in their original order.
pub fn subsample(points: &[f64], n: usize, seed: u64) -> Vec<f64> {
    if n >= points.len() {
        return points.to_vec();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut idx = sample(&mut rng, points.len(), n).into_vec();
    idx.sort_unstable();
    idx.into_iter().map(|i| points[i]).collect()
}
