use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use tmq_core::tmcore::QuasicrystalParams;

use crate::args::{Cli, Command, Format, WeightKind};
use crate::{CliError, Result};

/// A grid given either as one string or as a list of value strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GridSpec {
    Text(String),
    List(Vec<String>),
}

/// Contents of a `--config` file. Every field is optional and mirrors the
/// flag of the same name.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub a: Option<String>,
    pub b: Option<String>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub limit: Option<u64>,
    pub horizon: Option<u32>,
    pub grid: Option<GridSpec>,
    pub jobs: Option<usize>,
    pub seed: Option<u64>,
    pub sizes: Option<String>,
    pub p: Option<u64>,
    pub j: Option<u64>,
    pub resolution: Option<usize>,
    pub weights: Option<WeightKind>,
    pub compare: Option<WeightKind>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))
    }
}

/// Settings after merging flags over the config file.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub params: QuasicrystalParams,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub limit: Option<u64>,
    pub horizon: Option<u32>,
    pub grid: Option<GridSpec>,
    pub jobs: Option<usize>,
    pub seed: u64,
    pub sizes: Option<String>,
    pub p: Option<u64>,
    pub j: Option<u64>,
    pub resolution: Option<usize>,
    pub weights: Option<WeightKind>,
    pub compare: Option<WeightKind>,
}

pub const DEFAULT_A: &str = "2";
pub const DEFAULT_B: &str = "1";
pub const DEFAULT_SEED: u64 = 0;

impl RunConfig {
    pub fn resolve(cli: &Cli) -> Result<Self> {
        let g = &cli.global;
        let file = match &g.config {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };
        let a = g.a.clone().or(file.a).unwrap_or_else(|| DEFAULT_A.into());
        let b = g.b.clone().or(file.b).unwrap_or_else(|| DEFAULT_B.into());
        let params = QuasicrystalParams::parse(&a, &b)?;
        let (mut sizes, mut p, mut j, mut resolution, mut weights, mut compare) = (None, None, None, None, None, None);
        match &cli.command {
            Command::Diffract(d) => sizes = d.sizes.clone(),
            Command::Profile(pr) => {
                p = pr.p;
                j = pr.j;
                resolution = pr.resolution;
            }
            Command::Rarefy(r) => p = r.p,
            Command::Marcinkiewicz(m) => {
                weights = m.weights;
                compare = m.compare;
            }
            _ => {}
        }
        Ok(RunConfig {
            params,
            out: g.out.clone().or(file.out),
            format: g.format.or(file.format).unwrap_or_default(),
            limit: g.limit.or(file.limit),
            horizon: g.horizon.or(file.horizon),
            grid: g.grid.clone().map(GridSpec::Text).or(file.grid),
            jobs: g.jobs.or(file.jobs),
            seed: g.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
            sizes: sizes.or(file.sizes),
            p: p.or(file.p),
            j: j.or(file.j),
            resolution: resolution.or(file.resolution),
            weights: weights.or(file.weights),
            compare: compare.or(file.compare),
        })
    }
}
