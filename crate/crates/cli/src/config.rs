//! Run configuration: everything a report needs to be recomputed.

use std::fs;
use std::path::Path;

use clap::ValueEnum;
use gtrs_core::codes::DistanceLimits;
use gtrs_core::constructions::ConstructionSpec;
use gtrs_core::gf::FieldSpec;
use serde::{Deserialize, Serialize};

use crate::run::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
pub enum Suite {
    /// Square span of the twisted code on any point set.
    #[value(name = "L31")]
    L31,
    /// Square span and dimension of the standard code, per regime.
    #[value(name = "L32")]
    L32,
    /// Dual of the standard square against the closed-form basis.
    #[value(name = "L34")]
    L34,
    #[value(name = "powersum")]
    #[serde(rename = "powersum")]
    PowerSum,
    #[value(name = "rsdual")]
    #[serde(rename = "rsdual")]
    RsDual,
    /// Self-orthogonality criterion against the Gram matrix on random instances.
    #[value(name = "oracle")]
    #[serde(rename = "oracle")]
    Oracle,
}

/// Parameter ranges; an empty list admits every value.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grid {
    pub k: Vec<usize>,
    pub t: Vec<usize>,
    pub h: Vec<usize>,
    pub n: Vec<usize>,
    pub l: Vec<usize>,
    /// Twist coefficients per cell, drawn from the run seed.
    pub etas: usize,
    pub samples: usize,
}

impl Grid {
    pub fn allows(list: &[usize], x: usize) -> bool {
        list.is_empty() || list.contains(&x)
    }

    /// `(k, t, h)` with `3 <= k <= q/2`, `t >= 1`, `t + h <= k - 1`, `k + t <= q`.
    pub fn twist_cells(&self, q: usize) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for k in (3..=q / 2).filter(|&k| Self::allows(&self.k, k)) {
            for t in (1..k).filter(|&t| Self::allows(&self.t, t) && k + t <= q) {
                for h in (0..k - t).filter(|&h| Self::allows(&self.h, h)) {
                    out.push((k, t, h));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Task {
    Construct {
        spec: ConstructionSpec,
        classify: bool,
    },
    Verify {
        suite: Suite,
        grid: Grid,
    },
    Search {
        grid: Grid,
        keep: usize,
    },
}

impl Task {
    pub fn name(&self) -> &'static str {
        match self {
            Task::Construct { .. } => "construct",
            Task::Verify { .. } => "verify",
            Task::Search { .. } => "search",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub field: FieldSpec,
    pub seed: u64,
    pub limits: DistanceLimits,
    /// Upper bound on grid cells times samples.
    pub max_work: u64,
    pub task: Task,
}

pub const DEFAULT_MAX_WORK: u64 = 2_000_000;

/// Defaults read from a TOML file; command-line flags take precedence.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub field: Option<FieldFile>,
    pub seed: Option<u64>,
    pub limits: Option<DistanceLimits>,
    pub max_work: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldFile {
    pub p: u32,
    pub m: u32,
    pub modulus: Option<Vec<u32>>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }

    pub fn field_spec(&self) -> Result<Option<FieldSpec>, CliError> {
        self.field
            .as_ref()
            .map(|f| {
                FieldSpec::new(f.p, f.m, f.modulus.clone())
                    .map_err(|e| CliError::Usage(e.to_string()))
            })
            .transpose()
    }
}

/// Parses `3`, `3-6`, or comma-separated mixes such as `3-5,8`.
pub fn parse_list(s: &str) -> Result<Vec<usize>, String> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once('-') {
            Some((a, b)) => {
                let a: usize = a
                    .trim()
                    .parse()
                    .map_err(|_| format!("bad range start in {part:?}"))?;
                let b: usize = b
                    .trim()
                    .parse()
                    .map_err(|_| format!("bad range end in {part:?}"))?;
                if a > b {
                    return Err(format!("empty range {part:?}"));
                }
                out.extend(a..=b);
            }
            None => out.push(part.parse().map_err(|_| format!("bad integer {part:?}"))?),
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists() {
        assert_eq!(parse_list("3-5,8").unwrap(), vec![3, 4, 5, 8]);
        assert_eq!(parse_list("7").unwrap(), vec![7]);
        assert_eq!(parse_list("").unwrap(), Vec::<usize>::new());
        assert!(parse_list("5-3").is_err());
        assert!(parse_list("x").is_err());
    }

    #[test]
    fn cells_respect_bounds() {
        let g = Grid::default();
        let cells = g.twist_cells(8);
        assert!(cells
            .iter()
            .all(|&(k, t, h)| (3..=4).contains(&k) && t + h < k));
        // k = 3: (1,0) (1,1) (2,0); k = 4: 6 cells
        assert_eq!(cells.len(), 9);
        let g = Grid {
            k: vec![4],
            h: vec![0],
            ..Grid::default()
        };
        assert_eq!(g.twist_cells(8), vec![(4, 1, 0), (4, 2, 0), (4, 3, 0)]);
    }

    #[test]
    fn file_config() {
        let c: FileConfig = toml::from_str(
            "seed = 9\n[field]\np = 2\nm = 4\n[limits]\nmax_messages = 10\nmax_minors = 20\n",
        )
        .unwrap();
        assert_eq!(c.seed, Some(9));
        assert_eq!(c.field_spec().unwrap().unwrap().order(), 16);
        assert_eq!(c.limits.unwrap().max_minors, 20);
        assert!(toml::from_str::<FileConfig>("bogus = 1").is_err());
    }
}
